#include "heis/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "heis/error.hpp"
#include "heis/gauss_bonnet.hpp"
#include "heis/surface_curve.hpp"

namespace heis {

namespace gen {

namespace {
// Drawn surface points keep l >= kSampleMargin |grad u|; the L -> infinity
// remainder grows like (X3 u / l)^4 / L.
constexpr double kSampleMargin = 0.1;
}  // namespace

double Sampler::log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return buf;
}

namespace {

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string leaf(Sampler& s, bool curve) {
    if (s.pick(5) < 3) {
        if (curve) return "t";
        static const char* vars[] = {"x1", "x2", "x3"};
        return vars[s.pick(3)];
    }
    return num(s.uniform(-2.0, 2.0));
}

void grow(Sampler& s, int depth, bool curve, RandomExpr& out, std::string& text) {
    if (depth <= 0) {
        text = leaf(s, curve);
        return;
    }
    std::string a, b;
    const int r = s.pick(20);
    if (r < 9) {
        grow(s, depth - 1, curve, out, a);
        grow(s, depth - 1, curve, out, b);
        static const char* ops[] = {" + ", " - ", " * "};
        text = "(" + a + ops[s.pick(3)] + b + ")";
        return;
    }
    grow(s, depth - 1, curve, out, a);
    if (r < 17) {
        switch (s.pick(11)) {
            case 0: text = "sin(" + a + ")"; break;
            case 1: text = "cos(" + a + ")"; break;
            case 2: text = "atan(" + a + ")"; break;
            case 3: text = "exp((" + a + ")/4)"; break;
            case 4: text = "log(2 + sin(" + a + "))"; break;
            case 5: text = "sqrt(1 + (" + a + ")^2)"; break;
            case 6: text = "tan((" + a + ")/8)"; break;
            case 7: text = "sinh((" + a + ")/4)"; break;
            case 8: text = "cosh((" + a + ")/4)"; break;
            case 9:
                text = "abs(" + a + ")";
                out.abs_args.push_back(a);
                break;
            default:
                grow(s, depth - 1, curve, out, b);
                text = "((" + a + ")/(1.5 + cos(" + b + ")))";
                break;
        }
        return;
    }
    switch (s.pick(4)) {
        case 0: text = "(" + a + ")^2"; break;
        case 1: text = "(" + a + ")^3"; break;
        case 2: text = "(1 + (" + a + ")^2)^0.75"; break;
        default: text = "(2 + sin(" + a + "))^-1.5"; break;
    }
}

// Curve component template in the placeholder T.
std::string component_template(Sampler& s) {
    std::string c = num(s.uniform(-1, 1)) + " + " + num(s.uniform(-1.5, 1.5)) + "*T + " +
                    num(s.uniform(-1, 1)) + "*T^2";
    switch (s.pick(4)) {
        case 0: c += " + " + num(s.uniform(-0.5, 0.5)) + "*sin(" + num(s.uniform(0.5, 2.5)) + "*T)"; break;
        case 1: c += " + " + num(s.uniform(-0.5, 0.5)) + "*cos(" + num(s.uniform(0.5, 2.5)) + "*T)"; break;
        case 2: c += " + " + num(s.uniform(-0.3, 0.3)) + "*T^3"; break;
        default: c += " + " + num(s.uniform(-0.3, 0.3)) + "*exp(" + num(s.uniform(-1, 1)) + "*T)"; break;
    }
    return c;
}

// Graph height template in the placeholders X, Y.
std::string height_template(Sampler& s) {
    return num(s.uniform(-1, 1)) + " + " + num(s.uniform(-1, 1)) + "*X + " + num(s.uniform(-1, 1)) + "*Y + " +
           num(s.uniform(-0.8, 0.8)) + "*X^2 + " + num(s.uniform(-0.8, 0.8)) + "*X*Y + " +
           num(s.uniform(-0.8, 0.8)) + "*Y^2 + " + num(s.uniform(-0.5, 0.5)) + "*sin(" + num(s.uniform(-2, 2)) +
           "*X + " + num(s.uniform(-2, 2)) + "*Y) + " + num(s.uniform(-0.2, 0.2)) + "*X^3";
}

}  // namespace

RandomExpr random_expr(Sampler& s, int depth, bool curve) {
    RandomExpr out;
    grow(s, depth, curve, out, out.source);
    return out;
}

std::array<std::string, 3> random_curve(Sampler& s) {
    std::array<std::string, 3> c;
    for (auto& x : c) x = replace_all(component_template(s), "T", "t");
    return c;
}

SurfaceCase random_surface_case(Sampler& s, bool need_graph_chart, double min_omega) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SurfaceCase sc;
        std::array<std::string, 3> tmpl;
        std::string F;
        const int type = need_graph_chart ? s.pick(3) : s.pick(4);
        if (type < 3) {
            F = height_template(s);
            const std::string Fx = replace_all(replace_all(F, "X", "x1"), "Y", "x2");
            switch (type) {
                case 0: sc.u_source = "x3 - (" + Fx + ")"; break;
                case 1: sc.u_source = "(x3 - (" + Fx + "))*(1.5 + 0.5*cos(x1))"; break;
                default: sc.u_source = "exp(x3 - (" + Fx + ")) - 1"; break;
            }
            tmpl[0] = component_template(s);
            tmpl[1] = component_template(s);
            tmpl[2] = replace_all(replace_all(F, "X", "(" + tmpl[0] + ")"), "Y", "(" + tmpl[1] + ")");
        } else {
            const double c1 = s.uniform(-1, 1), c2 = s.uniform(-1, 1), c3 = s.uniform(-1, 1), R = s.uniform(0.8, 2.0);
            sc.u_source = "(x1 - " + num(c1) + ")^2 + (x2 - " + num(c2) + ")^2 + (x3 - " + num(c3) + ")^2 - " +
                          num(R * R);
            const std::string A = num(s.uniform(-0.8, 0.8)) + " + " + num(s.uniform(-0.8, 0.8)) + "*T + " +
                                  num(s.uniform(-0.3, 0.3)) + "*T^2";
            const std::string B = num(s.uniform(-3, 3)) + " + " + num(s.uniform(-1.5, 1.5)) + "*T + " +
                                  num(s.uniform(-0.5, 0.5)) + "*sin(T)";
            tmpl[0] = num(c1) + " + " + num(R) + "*cos(" + A + ")*cos(" + B + ")";
            tmpl[1] = num(c2) + " + " + num(R) + "*cos(" + A + ")*sin(" + B + ")";
            tmpl[2] = num(c3) + " + " + num(R) + "*sin(" + A + ")";
        }
        try {
            sc.u = parse(sc.u_source);
            for (std::size_t i = 0; i < 3; ++i) sc.curve_source[i] = replace_all(tmpl[i], "T", "t");
            sc.curve = ParamCurve::parse(sc.curve_source[0], sc.curve_source[1], sc.curve_source[2]);
            sc.reversed = ParamCurve::parse(replace_all(tmpl[0], "T", "(-t)"), replace_all(tmpl[1], "T", "(-t)"),
                                            replace_all(tmpl[2], "T", "(-t)"));
            sc.t0 = s.uniform(-0.6, 0.6);
            const CurveJet c = sc.curve.at(sc.t0);
            sc.x = Point::from(c.pos);
            const double speed = std::sqrt(c.vel[0] * c.vel[0] + c.vel[1] * c.vel[1] + c.vel[2] * c.vel[2]);
            if (speed < 0.05) continue;
            if (std::abs(omega(sc.x, c.vel)) < min_omega) continue;
            const SurfaceLocal local(sc.u, sc.x);
            const Vec3& g = local.u_jet().d;
            if (local.l() < kSampleMargin * std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2])) continue;
            if (type < 3) {
                sc.chart = Chart::parse("s1", "s2", replace_all(replace_all(F, "X", "s1"), "Y", "s2"));
                sc.s1 = sc.x.x1;
                sc.s2 = sc.x.x2;
            }
            return sc;
        } catch (const Error&) {
            continue;
        }
    }
    throw NumericContractError("could not draw a non-characteristic surface sample");
}

}  // namespace gen

namespace {

using gen::Sampler;
using gen::num;

constexpr double kUlp = std::numeric_limits<double>::epsilon();
constexpr double kLimitL = 1e8;
// Below about 1e4 the next-order terms still compete (and may flip the sign of the deviation).
const std::vector<double> kRateGrid{1e4, 1e5, 1e6, 1e7, 1e8};

// Collects deviations for one property.
class Check {
public:
    Check(std::string name, std::string description, double tolerance) {
        r_.name = std::move(name);
        r_.description = std::move(description);
        r_.tolerance = tolerance;
    }

    template <class Describe>
    void observe(double deviation, Describe&& describe) {
        ++r_.samples;
        const bool bad = !(deviation <= r_.tolerance);
        if (bad || !(deviation <= r_.worst)) {
            if (bad && r_.passed) {
                r_.passed = false;
                r_.worst = std::isnan(deviation) ? std::numeric_limits<double>::infinity() : deviation;
                r_.detail = describe();
            } else if (r_.passed || (bad && deviation > r_.worst)) {
                r_.worst = std::isnan(deviation) ? std::numeric_limits<double>::infinity() : deviation;
                r_.detail = describe();
            }
        }
    }
    void observe(double deviation) {
        observe(deviation, [] { return std::string(); });
    }
    void fail(const std::string& why) {
        r_.passed = false;
        r_.worst = std::numeric_limits<double>::infinity();
        r_.detail = why;
    }
    PropertyResult result() && { return std::move(r_); }
    PropertyResult& raw() { return r_; }

private:
    PropertyResult r_;
};

template <class Body>
void guarded(Check& c, Body&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        c.fail(std::string("exception: ") + e.what());
    }
}

CoeffTable table_for(const VerifyOptions& o, ConnectionKind kind, double L) {
    CoeffTable t = coeff_table(kind, L);
    if (o.corrupt_table) o.corrupt_table(t);
    return t;
}

double rel(double a, double b, double floor = 0.0) {
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string kname(ConnectionKind k) { return std::string(to_string(k)); }

double frame_mag(const FrameVector& v) { return std::max({std::abs(v.a1), std::abs(v.a2), std::abs(v.a3)}); }

// Random frame-vector field along t: three random curve components.
struct FrameField {
    std::array<Expr, 3> comps;
    FrameVector value(double t, FrameVector& rate) const {
        const CurveJet j = eval_curve_jet(comps, t);
        rate = {j.vel[0], j.vel[1], j.vel[2]};
        return {j.pos[0], j.pos[1], j.pos[2]};
    }
};

FrameField random_field(Sampler& s) {
    const auto c = gen::random_curve(s);
    return {{parse(c[0], VariableSet::curve()), parse(c[1], VariableSet::curve()), parse(c[2], VariableSet::curve())}};
}

ParamCurve random_param_curve(Sampler& s) {
    const auto c = gen::random_curve(s);
    return ParamCurve::parse(c[0], c[1], c[2]);
}

// Curve with w(gamma') = 0 identically: (a t + b t^2, c t + d t^2, (ad - bc) t^3 / 6 + e).
ParamCurve horizontal_curve(Sampler& s, double bump) {
    const double a = s.uniform(0.5, 1.5) * s.sign(), b = s.uniform(-1, 1), c = s.uniform(-1.5, 1.5),
                 d = s.uniform(-1, 1), e = s.uniform(-1, 1);
    const std::string x3 = num((a * d - b * c) / 6.0) + "*t^3 + " + num(e) + " + " + num(bump) + "*t^2";
    return ParamCurve::parse(num(a) + "*t + " + num(b) + "*t^2", num(c) + "*t + " + num(d) + "*t^2", x3);
}

}  // namespace

double fit_decay_exponent(const std::vector<double>& Ls, const std::vector<double>& deviations) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(Ls.size());
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        const double x = std::log(Ls[i]), y = std::log(std::abs(deviations[i]));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool VerifyReport::all_passed() const noexcept {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

const PropertyResult* VerifyReport::find(std::string_view name) const noexcept {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

// ---------------------------------------------------------------- expr

std::vector<PropertyResult> verify_expr(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x6578707200000001ULL);
    Check grad("expr.jet-gradient", "jet gradient vs central differences (h=1e-4): |d - fd| / (1 + |d|)", 1e-6);
    Check hess("expr.jet-hessian", "jet Hessian vs central differences (h=1e-4): |h - fd| / (1 + |h|)", 1e-4);
    Check prod("expr.product-rule", "d(e1*e2) vs e1 d(e2) + e2 d(e1), in units of 4 ulp of the term sizes", 1.0);
    Check round("expr.print-roundtrip", "parse(print(e)) evaluates identically: |difference|", 0.0);

    const std::size_t n = 2 * o.samples;
    std::size_t done = 0;
    guarded(grad, [&] {
        for (int attempts = 0; done < n && attempts < 100000; ++attempts) {
            const gen::RandomExpr re = gen::random_expr(s, 1 + s.pick(3));
            const std::array<double, 3> x{s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)};
            Expr e;
            Jet2 j;
            try {
                e = parse(re.source);
                bool near_kink = false;
                for (const auto& a : re.abs_args)
                    if (std::abs(parse(a).evaluate(x)) < 0.05) near_kink = true;
                if (near_kink) continue;
                j = e.eval_jet(x);
            } catch (const DomainError&) {
                continue;
            }
            double big = std::abs(j.v);
            for (double d : j.d) big = std::max(big, std::abs(d));
            for (double h : j.h) big = std::max(big, std::abs(h));
            if (!(big < 1e4)) continue;

            const double h = 1e-4;
            auto f = [&](double d0, double d1, double d2) {
                return e.evaluate(std::array<double, 3>{x[0] + d0, x[1] + d1, x[2] + d2});
            };
            auto shift = [&](std::size_t i, double amount) {
                std::array<double, 3> d{0, 0, 0};
                d[i] = amount;
                return d;
            };
            double gdev = 0, hdev = 0;
            try {
                for (std::size_t i = 0; i < 3; ++i) {
                    const auto p = shift(i, h), m = shift(i, -h);
                    const double fd = (f(p[0], p[1], p[2]) - f(m[0], m[1], m[2])) / (2 * h);
                    gdev = std::max(gdev, std::abs(j.d[i] - fd) / (1 + std::abs(j.d[i])));
                }
                const double f0 = f(0, 0, 0);
                for (std::size_t i = 0; i < 3; ++i) {
                    for (std::size_t k = i; k < 3; ++k) {
                        double fd;
                        if (i == k) {
                            const auto p = shift(i, h), m = shift(i, -h);
                            fd = (f(p[0], p[1], p[2]) - 2 * f0 + f(m[0], m[1], m[2])) / (h * h);
                        } else {
                            auto at = [&](double si, double sk) {
                                std::array<double, 3> d{0, 0, 0};
                                d[i] = si * h;
                                d[k] = sk * h;
                                return f(d[0], d[1], d[2]);
                            };
                            fd = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
                        }
                        const double hv = j.hess(i, k);
                        hdev = std::max(hdev, std::abs(hv - fd) / (1 + std::abs(hv)));
                    }
                }
            } catch (const DomainError&) {
                continue;
            }
            const auto where = [&] {
                return re.source + " at (" + fmt(x[0]) + ", " + fmt(x[1]) + ", " + fmt(x[2]) + ")";
            };
            grad.observe(gdev, where);
            hess.observe(hdev, where);
            ++done;

            const Expr back = parse(e.print());
            round.observe(std::abs(back.evaluate(x) - e.evaluate(x)), where);
        }
        if (done < n) grad.fail("generator produced only " + std::to_string(done) + " usable samples");
    });

    guarded(prod, [&] {
        std::size_t k = 0;
        for (int attempts = 0; k < n && attempts < 100000; ++attempts) {
            const auto a = gen::random_expr(s, 2), b = gen::random_expr(s, 2);
            if (!a.abs_args.empty() || !b.abs_args.empty()) continue;
            const std::array<double, 3> x{s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-1, 1)};
            Jet2 ja, jb, jp;
            try {
                ja = parse(a.source).eval_jet(x);
                jb = parse(b.source).eval_jet(x);
                jp = parse("(" + a.source + ")*(" + b.source + ")").eval_jet(x);
            } catch (const DomainError&) {
                continue;
            }
            double dev = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                const double expect = ja.v * jb.d[i] + jb.v * ja.d[i];
                const double scale = std::abs(ja.v * jb.d[i]) + std::abs(jb.v * ja.d[i]);
                const double ulps = scale == 0 ? (jp.d[i] == 0 ? 0 : 1e300) : std::abs(jp.d[i] - expect) / (scale * kUlp);
                dev = std::max(dev, ulps / 4.0);
            }
            prod.observe(dev, [&] { return a.source + " * " + b.source; });
            ++k;
        }
    });
    return {std::move(grad).result(), std::move(hess).result(), std::move(prod).result(), std::move(round).result()};
}

// ---------------------------------------------------------------- heis-core

std::vector<PropertyResult> verify_core(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x636f726500000002ULL);
    Check a3("core.frame-a3-is-omega", "frame_from_coordinate(p, v).a3 == omega(p, v) bitwise", 0.0);
    Check unit("core.x3-tilde-unit", "|norm_L(L^{-1/2} X3) - 1| over L in {1, 10, ..., 1e8}, in ulps", 2.0);
    Check wdot("core.omega-dot-jet", "omega_dot vs jet derivative of t -> omega(gamma, gamma'): |diff| / (1 + |w'|)",
               1e-10);
    guarded(a3, [&] {
        for (std::size_t i = 0; i < o.samples; ++i) {
            const Point p{s.uniform(-5, 5), s.uniform(-5, 5), s.uniform(-5, 5)};
            const Vec3 v{s.uniform(-5, 5), s.uniform(-5, 5), s.uniform(-5, 5)};
            a3.observe(std::abs(frame_from_coordinate(p, v).a3 - omega(p, v)));
        }
    });
    guarded(unit, [&] {
        for (double L = 1.0; L <= 1e8; L *= 10) {
            const double n = norm_L(L, FrameVector{0, 0, 1.0 / std::sqrt(L)});
            unit.observe(std::abs(n - 1.0) / kUlp, [&] { return "L = " + fmt(L); });
        }
    });
    guarded(wdot, [&] {
        for (std::size_t i = 0; i < o.samples; ++i) {
            const ParamCurve g = random_param_curve(s);
            const double t = s.uniform(-1, 1);
            const CurveJet c = g.at(t);
            Jet1 x[3], v[3];
            for (std::size_t k = 0; k < 3; ++k) {
                x[k].v = c.pos[k];
                x[k].d[0] = c.vel[k];
                v[k].v = c.vel[k];
                v[k].d[0] = c.acc[k];
            }
            const Jet1 w = v[2] + 0.5 * (x[1] * v[0] - x[0] * v[1]);
            const double wd = omega_dot(c);
            wdot.observe(std::abs(w.d[0] - wd) / (1 + std::abs(wd)));
        }
    });
    return {std::move(a3).result(), std::move(unit).result(), std::move(wdot).result()};
}

// ---------------------------------------------------------------- connections

std::vector<PropertyResult> verify_connections(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x636f6e6e00000003ULL);
    Check metric("connections.metric-compatibility",
                 "d/dt <V,W>_L vs <nabla V, W>_L + <V, nabla W>_L along random curves: |diff| / (1 + term sizes)",
                 1e-10);
    Check defect("connections.table-metric", "max |<G_ij, X_k>_L + <X_j, G_ik>_L| / (1 + L)", 0.0);
    Check torsion_lc("connections.levi-civita-torsion-free", "max |T(X_i, X_j)| for Levi-Civita", 0.0);
    Check anti("connections.curvature-antisymmetry", "R(X_i,X_j)X_k + R(X_j,X_i)X_k, bitwise", 0.0);
    Check svk1_table("connections.svk1-curvature-table",
                "generic R vs R(X1,X2)X1 = L/2 X2, R(X1,X2)X2 = -L/2 X1, others 0 (up to antisymmetry), bitwise",
                0.0);
    Check flat("connections.svk2-adapted-flat", "max |R(X_i,X_j)X_k| for svk2 and adapted, bitwise", 0.0);
    Check closed("connections.covariant-closed-forms",
                 "nabla_{gamma'} gamma' vs the expanded displays for svk1, svk2, adapted: |diff| / (1 + |A|)", 1e-12);

    const std::size_t curves = std::max<std::size_t>(1, o.samples / 2);
    guarded(metric, [&] {
        for (ConnectionKind kind : kAllKinds) {
            for (std::size_t i = 0; i < curves; ++i) {
                const double L = s.log_uniform(0.1, 100);
                const CoeffTable T = table_for(o, kind, L);
                const ParamCurve g = random_param_curve(s);
                const FrameField V = random_field(s), W = random_field(s);
                const double t = s.uniform(-1, 1);
                const CurveJet c = g.at(t);
                const FrameVector vel = frame_velocity(c).value;
                FrameVector Vd, Wd;
                const FrameVector v = V.value(t, Vd), w = W.value(t, Wd);
                const double lhs = inner_L(L, Vd, w) + inner_L(L, v, Wd);
                const FrameVector nV = covariant_along_curve(T, vel, v, Vd);
                const FrameVector nW = covariant_along_curve(T, vel, w, Wd);
                const double rhs = inner_L(L, nV, w) + inner_L(L, v, nW);
                const double scale = 1 + std::abs(inner_L(L, Vd, w)) + std::abs(inner_L(L, v, Wd)) +
                                     L * frame_mag(vel) * frame_mag(v) * frame_mag(w);
                metric.observe(std::abs(lhs - rhs) / scale,
                               [&] { return kname(kind) + " at L = " + fmt(L) + ", t = " + fmt(t); });
            }
        }
    });
    guarded(defect, [&] {
        for (ConnectionKind kind : kAllKinds)
            for (double L : {0.25, 1.0, 4.0, 1e4}) {
                defect.observe(metric_defect(table_for(o, kind, L)) / (1 + L),
                               [&] { return kname(kind) + " at L = " + fmt(L); });
            }
    });
    guarded(torsion_lc, [&] {
        for (double L : {0.25, 1.0, 4.0, 1e4}) {
            const CoeffTable T = table_for(o, ConnectionKind::LeviCivita, L);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    torsion_lc.observe(frame_mag(torsion(T, i, j)), [&] { return "L = " + fmt(L); });
        }
    });
    guarded(anti, [&] {
        for (ConnectionKind kind : kAllKinds)
            for (std::size_t n = 0; n < 8; ++n) {
                const double L = s.log_uniform(0.01, 1e6);
                const CurvatureArray R = curvature_array(table_for(o, kind, L));
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = 0; j < 3; ++j)
                        for (std::size_t k = 0; k < 3; ++k)
                            anti.observe(frame_mag(R[i][j][k] + R[j][i][k]),
                                         [&] { return kname(kind) + " at L = " + fmt(L); });
            }
    });
    guarded(svk1_table, [&] {
        for (std::size_t n = 0; n < 16; ++n) {
            const double L = n == 0 ? 1.0 : s.log_uniform(0.01, 1e6);
            const CurvatureArray R = curvature_array(table_for(o, ConnectionKind::SvK1, L));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    for (std::size_t k = 0; k < 3; ++k) {
                        FrameVector expect{};
                        const double sg = (i == 0 && j == 1) ? 1.0 : (i == 1 && j == 0) ? -1.0 : 0.0;
                        if (sg != 0.0 && k == 0) expect = {0, sg * L / 2, 0};
                        if (sg != 0.0 && k == 1) expect = {-sg * L / 2, 0, 0};
                        svk1_table.observe(frame_mag(R[i][j][k] - expect), [&] {
                            return "R(X" + std::to_string(i + 1) + ",X" + std::to_string(j + 1) + ")X" +
                                   std::to_string(k + 1) + " at L = " + fmt(L);
                        });
                    }
        }
    });
    guarded(flat, [&] {
        for (ConnectionKind kind : {ConnectionKind::SvK2, ConnectionKind::Adapted})
            for (std::size_t n = 0; n < 8; ++n) {
                const double L = s.log_uniform(0.01, 1e6);
                const CurvatureArray R = curvature_array(table_for(o, kind, L));
                for (const auto& a : R)
                    for (const auto& b : a)
                        for (const auto& v : b) flat.observe(frame_mag(v), [&] { return kname(kind); });
            }
    });
    guarded(closed, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const double L = s.log_uniform(0.1, 100);
                const CurveJet c = random_param_curve(s).at(s.uniform(-1, 1));
                const FrameVector A = covariant_acceleration(table_for(o, kind, L), c);
                const double g1 = c.vel[0], g2 = c.vel[1];
                const double w = omega(Point::from(c.pos), c.vel), wd = omega_dot(c);
                FrameVector E;
                if (kind == ConnectionKind::SvK1) E = {c.acc[0] + L * w * g2 / 2, c.acc[1] - L * w * g1 / 2, wd};
                if (kind == ConnectionKind::SvK2) E = {c.acc[0], c.acc[1] - L * w * g1 / 2, wd + g1 * g2 / 2};
                if (kind == ConnectionKind::Adapted) E = {c.acc[0], c.acc[1], wd};
                closed.observe(frame_mag(A - E) / (1 + frame_mag(A)), [&] { return kname(kind); });
            }
    });
    return {std::move(metric).result(), std::move(defect).result(), std::move(torsion_lc).result(),
            std::move(anti).result(),   std::move(svk1_table).result(),  std::move(flat).result(),
            std::move(closed).result()};
}

// ---------------------------------------------------------------- curves

std::vector<PropertyResult> verify_curves(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x6375727600000004ULL);
    Check two("curves.two-path", "closed-form vs definition curvature, relative", 1e-10);
    Check two_h("curves.two-path-horizontal", "horizontal closed form vs definition at w = 0, relative", 1e-10);
    Check lim("curves.limit-consistency",
              "k^L at L = 1e8 vs limit: |k - k_inf| / (1 + k_inf), or |k/sqrt(L) - c| on the divergent branch", 1e-3);
    Check rate("curves.limit-rate",
               "fitted alpha in |k^L - k_inf| ~ L^-alpha over the settled tail L in 1e4..1e8; must lie in [0.4, 1.1]",
               0.0);
    Check lit("curves.horizontal-finite-literal", "svk1 and adapted horizontal-finite values agree bitwise", 0.0);

    guarded(two, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const double L = s.log_uniform(0.1, 100);
                const CurveJet c = random_param_curve(s).at(s.uniform(-1, 1));
                const double a = curve_curvature_L(table_for(o, kind, L), c);
                const double b = *curve_curvature_closed_form(kind, L, c);
                two.observe(rel(a, b), [&] { return kname(kind) + ": " + fmt(a) + " vs " + fmt(b); });
            }
    });
    guarded(two_h, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const double L = s.log_uniform(0.1, 100);
                const CurveJet c = horizontal_curve(s, s.uniform(-1, 1)).at(0.0);
                const double a = curve_curvature_L(table_for(o, kind, L), c);
                const double b = *curve_curvature_horizontal_closed_form(kind, L, c);
                two_h.observe(rel(a, b), [&] { return kname(kind) + ": " + fmt(a) + " vs " + fmt(b); });
            }
    });
    guarded(lim, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                CurveJet c;
                switch (n % 3) {
                    case 0: {
                        const ParamCurve g = random_param_curve(s);
                        do c = g.at(s.uniform(-1, 1));
                        while (std::abs(omega(Point::from(c.pos), c.vel)) < 0.05);
                        break;
                    }
                    case 1: c = horizontal_curve(s, 0.0).at(0.0); break;
                    default: c = horizontal_curve(s, s.uniform(0.3, 1.0) * s.sign()).at(0.0); break;
                }
                const CurveLimitResult r = curve_curvature_limit(kind, c);
                const double k = curve_curvature_L(table_for(o, kind, kLimitL), c);
                const double dev = r.branch == CurveBranch::HorizontalDivergent
                                       ? std::abs(k / std::sqrt(kLimitL) - r.value)
                                       : std::abs(k - r.value) / (1 + r.value);
                lim.observe(dev, [&] {
                    return kname(kind) + " " + std::string(to_string(r.branch)) + ": k^L = " + fmt(k) +
                           ", limit " + fmt(r.value);
                });
            }
    });
    guarded(rate, [&] {
        double lo = 1e300, hi = -1e300;
        const std::size_t per_kind = std::min<std::size_t>(o.samples, 20);
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < per_kind; ++n) {
                const ParamCurve g = random_param_curve(s);
                CurveJet c;
                do c = g.at(s.uniform(-1, 1));
                while (std::abs(omega(Point::from(c.pos), c.vel)) < 0.05);
                const double kinf = curve_curvature_limit(kind, c).value;
                std::vector<double> dev;
                for (double L : kRateGrid) dev.push_back(curve_curvature_L(table_for(o, kind, L), c) - kinf);
                const double alpha = fit_decay_exponent(kRateGrid, dev);
                lo = std::min(lo, alpha);
                hi = std::max(hi, alpha);
                const double out = alpha < 0.4 ? 0.4 - alpha : (alpha > 1.1 ? alpha - 1.1 : 0.0);
                rate.observe(std::isfinite(alpha) ? out : NAN,
                             [&] { return kname(kind) + ": alpha = " + fmt(alpha); });
            }
        if (rate.raw().passed) rate.raw().detail = "alpha range [" + fmt(lo) + ", " + fmt(hi) + "]";
    });
    guarded(lit, [&] {
        for (std::size_t n = 0; n < o.samples; ++n) {
            const CurveJet c = horizontal_curve(s, 0.0).at(0.0);
            const CurveLimitResult a = curve_curvature_limit(ConnectionKind::SvK1, c);
            const CurveLimitResult b = curve_curvature_limit(ConnectionKind::Adapted, c);
            if (a.branch != CurveBranch::HorizontalFinite || b.branch != CurveBranch::HorizontalFinite) {
                lit.fail("sample did not land on the horizontal-finite branch");
                return;
            }
            lit.observe(std::abs(a.value - b.value));
        }
    });
    return {std::move(two).result(), std::move(two_h).result(), std::move(lim).result(), std::move(rate).result(),
            std::move(lit).result()};
}

// ---------------------------------------------------------------- surfaces

std::vector<PropertyResult> verify_surfaces(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x7375726600000005ULL);
    Check ortho("surfaces.frame-orthonormal", "max |Gram_L(v_L, e1, e2) - I|; e1 horizontal", 1e-10);
    Check unitpq("surfaces.unit-horizontal-normal", "|p_bar^2 + q_bar^2 - 1|", 1e-12);
    Check two("surfaces.two-path", "closed-form II tables vs definition: max |diff| / max(1, |II|)", 1e-9);
    Check lc("surfaces.levi-civita-offsets",
             "II(svk1) - II(levi-civita) vs offsets (0, sqrt(L)/2; -sqrt(L)/2 r_bar_L^2, 0): max |diff| / max(1, |II|)",
             1e-9);
    Check gauss("surfaces.gauss-equation", "K_surf - (K_amb + det II), bitwise", 0.0);
    Check sect("surfaces.svk1-sectional", "K_amb(svk1) vs -(L/2) r_bar_L^2, in ulps of max(1, |K_amb|)", 16.0);
    Check flat("surfaces.flat-ambient", "|K_amb| for svk2 and adapted", 0.0);
    Check hlim("surfaces.mean-limit-consistency", "H_L at L = 1e8 vs X1(p_bar) + X2(q_bar): |diff| / (1 + |H_inf|)",
               1e-3);
    Check klim("surfaces.gauss-limit-consistency", "K_L at L = 1e8 vs K_inf: |diff| / (1 + |K_inf|)", 1e-3);
    Check rate("surfaces.gauss-limit-rate",
               "svk1: fitted alpha in |K_L - K_inf| ~ L^-alpha over L in 1e4..1e8; must lie in [0.4, 1.1]", 0.0);

    guarded(ortho, [&] {
        for (std::size_t n = 0; n < o.samples; ++n) {
            const gen::SurfaceCase sc = gen::random_surface_case(s);
            const SurfaceLocal local(sc.u, sc.x);
            const double L = s.log_uniform(0.01, 1e6);
            const SurfaceFrame f = local.frame(L);
            const FrameVector b[3] = {f.v_L, f.e1, f.e2};
            double dev = std::abs(f.e1.a3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) dev = std::max(dev, std::abs(inner_L(L, b[i], b[j]) - (i == j ? 1 : 0)));
            ortho.observe(dev, [&] { return sc.u_source + " at L = " + fmt(L); });
            unitpq.observe(std::abs(f.p_bar * f.p_bar + f.q_bar * f.q_bar - 1));
        }
    });
    guarded(two, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const gen::SurfaceCase sc = gen::random_surface_case(s);
                const SurfaceLocal local(sc.u, sc.x);
                const double L = s.log_uniform(0.1, 100);
                const Matrix2 a = local.second_fundamental_form(table_for(o, kind, L));
                const Matrix2 b = *local.second_fundamental_form_closed_form(kind, L);
                double scale = 1, diff = 0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        scale = std::max(scale, std::abs(a[i][j]));
                        diff = std::max(diff, std::abs(a[i][j] - b[i][j]));
                    }
                two.observe(diff / scale, [&] { return kname(kind) + " on " + sc.u_source + " at L = " + fmt(L); });
            }
    });
    guarded(lc, [&] {
        for (std::size_t n = 0; n < o.samples; ++n) {
            const gen::SurfaceCase sc = gen::random_surface_case(s);
            const SurfaceLocal local(sc.u, sc.x);
            const double L = s.log_uniform(0.1, 100);
            const Matrix2 a = local.second_fundamental_form(table_for(o, ConnectionKind::SvK1, L));
            const Matrix2 b = local.second_fundamental_form(table_for(o, ConnectionKind::LeviCivita, L));
            const double rL = local.frame(L).r_bar_L;
            const Matrix2 off{{{0.0, std::sqrt(L) / 2}, {-std::sqrt(L) / 2 * rL * rL, 0.0}}};
            double scale = 1, diff = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    scale = std::max(scale, std::abs(a[i][j]));
                    diff = std::max(diff, std::abs(a[i][j] - b[i][j] - off[i][j]));
                }
            lc.observe(diff / scale, [&] { return sc.u_source + " at L = " + fmt(L); });
        }
    });
    guarded(gauss, [&] {
        for (ConnectionKind kind : kAllKinds)
            for (std::size_t n = 0; n < o.samples / 4 + 1; ++n) {
                const gen::SurfaceCase sc = gen::random_surface_case(s);
                const double L = s.log_uniform(0.1, 100);
                const SurfaceLocal local(sc.u, sc.x);
                const ShapeOperatorReport r = local.gauss_curvature(table_for(o, kind, L));
                gauss.observe(std::abs(r.K_surf - (r.K_amb + det(r.II))));
                if (kind == ConnectionKind::SvK1) {
                    const double rL = local.frame(L).r_bar_L;
                    const double expect = -(L / 2) * rL * rL;
                    sect.observe(std::abs(r.K_amb - expect) / (kUlp * std::max(1.0, std::abs(r.K_amb))),
                                 [&] { return "L = " + fmt(L) + ": " + fmt(r.K_amb) + " vs " + fmt(expect); });
                }
                if (kind == ConnectionKind::SvK2 || kind == ConnectionKind::Adapted) flat.observe(std::abs(r.K_amb));
            }
    });
    guarded(hlim, [&] {
        for (std::size_t n = 0; n < o.samples; ++n) {
            const gen::SurfaceCase sc = gen::random_surface_case(s);
            const SurfaceLocal local(sc.u, sc.x);
            const double Hinf = local.horizontal_mean_curvature();
            for (ConnectionKind kind : kAllKinds) {
                const double H = trace(local.second_fundamental_form(table_for(o, kind, kLimitL)));
                hlim.observe(std::abs(H - Hinf) / (1 + std::abs(Hinf)),
                             [&] { return kname(kind) + ": " + fmt(H) + " vs " + fmt(Hinf); });
            }
            for (ConnectionKind kind : kLimitKinds) {
                const double Kinf = local.gauss_curvature_limit(kind);
                const double K = local.gauss_curvature(table_for(o, kind, kLimitL)).K_surf;
                klim.observe(std::abs(K - Kinf) / (1 + std::abs(Kinf)),
                             [&] { return kname(kind) + " on " + sc.u_source + ": " + fmt(K) + " vs " + fmt(Kinf); });
            }
        }
    });
    guarded(rate, [&] {
        double lo = 1e300, hi = -1e300;
        for (std::size_t n = 0; n < std::min<std::size_t>(o.samples, 20); ++n) {
            const gen::SurfaceCase sc = gen::random_surface_case(s);
            const SurfaceLocal local(sc.u, sc.x);
            const double Kinf = local.gauss_curvature_limit(ConnectionKind::SvK1);
            std::vector<double> dev;
            for (double L : kRateGrid)
                dev.push_back(local.gauss_curvature(table_for(o, ConnectionKind::SvK1, L)).K_surf - Kinf);
            const double alpha = fit_decay_exponent(kRateGrid, dev);
            lo = std::min(lo, alpha);
            hi = std::max(hi, alpha);
            const double out = alpha < 0.4 ? 0.4 - alpha : (alpha > 1.1 ? alpha - 1.1 : 0.0);
            rate.observe(std::isfinite(alpha) ? out : NAN,
                         [&] { return sc.u_source + ": alpha = " + fmt(alpha); });
        }
        if (rate.raw().passed) rate.raw().detail = "alpha range [" + fmt(lo) + ", " + fmt(hi) + "]";
    });
    return {std::move(ortho).result(), std::move(unitpq).result(), std::move(two).result(),
            std::move(lc).result(),    std::move(gauss).result(),  std::move(sect).result(),
            std::move(flat).result(),  std::move(hlim).result(),   std::move(klim).result(),
            std::move(rate).result()};
}

// ---------------------------------------------------------------- surface-curves

std::vector<PropertyResult> verify_surface_curves(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x7363757200000006ULL);
    Check two("surface-curves.two-path",
              "projected acceleration: expansions vs generic projection, max |diff| / max(1, |c|)", 1e-10);
    Check dom("surface-curves.unsigned-dominates-signed", "(|k_signed| - k_unsigned) / max(1, k_unsigned)", 1e-12);
    Check lim("surface-curves.limit-consistency",
              "signed and unsigned k at L = 1e8 vs limit on non-horizontal samples: |diff| / (1 + |k_inf|)", 1e-3);
    Check rev("surface-curves.orientation-reversal",
              "t -> -t flips the signed limit and keeps the unsigned one: max |mismatch| / (1 + |k|)", 1e-12);

    guarded(two, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const gen::SurfaceCase sc = gen::random_surface_case(s);
                const double L = s.log_uniform(0.1, 100);
                const SurfaceCurvePoint p(sc.u, sc.curve.at(sc.t0));
                const ProjectedAcceleration a = projected_acceleration(table_for(o, kind, L), p);
                const ProjectedAcceleration b = *projected_acceleration_expansion(kind, L, p);
                const double scale = std::max({1.0, std::abs(a.c1), std::abs(a.c2)});
                two.observe(std::max(std::abs(a.c1 - b.c1), std::abs(a.c2 - b.c2)) / scale,
                            [&] { return kname(kind) + " at L = " + fmt(L); });
            }
    });
    guarded(dom, [&] {
        for (ConnectionKind kind : kAllKinds)
            for (std::size_t n = 0; n < o.samples / 4 + 1; ++n) {
                const gen::SurfaceCase sc = gen::random_surface_case(s);
                const double L = s.log_uniform(0.1, 100);
                const SurfaceCurvePoint p(sc.u, sc.curve.at(sc.t0));
                const CoeffTable T = table_for(o, kind, L);
                const double ks = geodesic_curvature_L(T, p, true), ku = geodesic_curvature_L(T, p, false);
                dom.observe(std::max(0.0, std::abs(ks) - ku) / std::max(1.0, ku),
                            [&] { return kname(kind) + ": " + fmt(ks) + " vs " + fmt(ku); });
            }
    });
    guarded(lim, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const gen::SurfaceCase sc = gen::random_surface_case(s, false, 0.05);
                const SurfaceCurvePoint p(sc.u, sc.curve.at(sc.t0));
                const CoeffTable T = table_for(o, kind, kLimitL);
                for (bool sgn : {true, false}) {
                    const SignedLimitResult r = geodesic_curvature_limit(kind, p, sgn);
                    const double k = geodesic_curvature_L(T, p, sgn);
                    lim.observe(std::abs(k - r.value) / (1 + std::abs(r.value)), [&] {
                        return kname(kind) + (sgn ? " signed" : " unsigned") + ": " + fmt(k) + " vs " + fmt(r.value);
                    });
                }
            }
    });
    guarded(rev, [&] {
        for (ConnectionKind kind : kLimitKinds)
            for (std::size_t n = 0; n < o.samples; ++n) {
                const gen::SurfaceCase sc = gen::random_surface_case(s, false, 0.05);
                const SurfaceCurvePoint fwd(sc.u, sc.curve.at(sc.t0));
                const SurfaceCurvePoint bwd(sc.u, sc.reversed.at(-sc.t0));
                const double sf = geodesic_curvature_limit(kind, fwd, true).value;
                const double sb = geodesic_curvature_limit(kind, bwd, true).value;
                const double uf = geodesic_curvature_limit(kind, fwd, false).value;
                const double ub = geodesic_curvature_limit(kind, bwd, false).value;
                rev.observe(std::max(std::abs(sf + sb), std::abs(uf - ub)) / (1 + std::abs(sf)),
                            [&] { return kname(kind) + ": " + fmt(sf) + " / " + fmt(sb); });
            }
    });
    return {std::move(two).result(), std::move(dom).result(), std::move(lim).result(), std::move(rev).result()};
}

// ---------------------------------------------------------------- integrate-gb measures

std::vector<PropertyResult> verify_measures(const VerifyOptions& o) {
    Sampler s(o.seed ^ 0x6d65617300000007ULL);
    Check len("integrate-gb.length-measure", "|ds_L / sqrt(L) - |w(gamma')|| at L = 1e8, / (1 + |w|)", 1e-4);
    Check area("integrate-gb.area-measure", "|dA_L / sqrt(L) - |limit density|| at L = 1e8, / (1 + |density|)", 1e-4);
    guarded(len, [&] {
        for (std::size_t n = 0; n < o.samples; ++n) {
            const CurveJet c = random_param_curve(s).at(s.uniform(-1, 1));
            const double w = limit_length_element(c);
            if (w < 1e-3) continue;
            const double dsL = norm_L(kLimitL, frame_velocity(c).value) / std::sqrt(kLimitL);
            len.observe(std::abs(dsL - w) / (1 + w));
        }
    });
    guarded(area, [&] {
        for (std::size_t n = 0; n < o.samples; ++n) {
            const gen::SurfaceCase sc = gen::random_surface_case(s, true);
            const double lim_d = limit_area_element(sc.u, *sc.chart, sc.s1, sc.s2);
            const double dA = area_element_L(kLimitL, *sc.chart, sc.s1, sc.s2) / std::sqrt(kLimitL);
            area.observe(std::abs(dA - std::abs(lim_d)) / (1 + std::abs(lim_d)),
                         [&] { return sc.u_source + ": " + fmt(dA) + " vs " + fmt(lim_d); });
        }
    });
    return {std::move(len).result(), std::move(area).result()};
}

VerifyReport run_verify(const VerifyOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.seed = opts.seed;
    rep.samples = opts.samples;
    for (auto* group : {&verify_expr, &verify_core, &verify_connections, &verify_curves, &verify_surfaces,
                        &verify_surface_curves, &verify_measures}) {
        auto part = group(opts);
        for (auto& p : part) rep.properties.push_back(std::move(p));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace heis
