#include "heis/gauss_bonnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "heis/error.hpp"

namespace heis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanGrid = 64;
constexpr int kBoundarySamples = 64;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Pullback density of the limit area form, given the surface data and chart tangents.
double limit_density(const SurfaceLocal& local, const Chart::Sample& s) {
    const double pb = local.p() / local.l(), qb = local.q() / local.l();
    const double w1 = omega(s.pos, s.d1), w2 = omega(s.pos, s.d2);
    return pb * (s.d1[1] * w2 - s.d2[1] * w1) - qb * (s.d1[0] * w2 - s.d2[0] * w1);
}

double gram_density(double L, const Chart::Sample& s) {
    const FrameVector t1 = frame_from_coordinate(s.pos, s.d1);
    const FrameVector t2 = frame_from_coordinate(s.pos, s.d2);
    const double g11 = inner_L(L, t1, t1), g22 = inner_L(L, t2, t2), g12 = inner_L(L, t1, t2);
    return std::sqrt(std::max(0.0, g11 * g22 - g12 * g12));
}

// Horizontal gradient (X1 u, X2 u) and the scale 1 + |grad u| at a chart point.
struct HorizontalGradient {
    double p = 0, q = 0, scale = 1;
    Point x;
    bool ok = false;
};

HorizontalGradient horizontal_gradient(const Scene& scene, double s1, double s2) {
    HorizontalGradient h;
    try {
        const Chart::Sample smp = scene.chart.at(s1, s2);
        const Jet2 j = scene.u.eval_jet(smp.pos.coords());
        const Vec3 xf = frame_derivatives(smp.pos, j.d);
        h.p = xf[0];
        h.q = xf[1];
        h.scale = 1.0 + std::sqrt(j.d[0] * j.d[0] + j.d[1] * j.d[1] + j.d[2] * j.d[2]);
        h.x = smp.pos;
        h.ok = std::isfinite(h.p) && std::isfinite(h.q);
    } catch (const DomainError&) {
        h.ok = false;
    }
    return h;
}

std::optional<CharacteristicPoint> polish(const Scene& scene, double s1, double s2) {
    auto F = [&](double a, double b) { return horizontal_gradient(scene, a, b); };
    HorizontalGradient cur = F(s1, s2);
    if (!cur.ok) return std::nullopt;
    for (int it = 0; it < 60; ++it) {
        const double norm = std::hypot(cur.p, cur.q);
        if (norm <= 1e-15 * cur.scale) break;
        const double h1 = 1e-6 * (1.0 + std::abs(s1)), h2 = 1e-6 * (1.0 + std::abs(s2));
        const HorizontalGradient a = F(s1 + h1, s2), b = F(s1 - h1, s2);
        const HorizontalGradient c = F(s1, s2 + h2), d = F(s1, s2 - h2);
        if (!(a.ok && b.ok && c.ok && d.ok)) return std::nullopt;
        const double j11 = (a.p - b.p) / (2 * h1), j21 = (a.q - b.q) / (2 * h1);
        const double j12 = (c.p - d.p) / (2 * h2), j22 = (c.q - d.q) / (2 * h2);
        const double det = j11 * j22 - j12 * j21;
        if (!(std::abs(det) > 0.0)) return std::nullopt;
        const double ds1 = -(j22 * cur.p - j12 * cur.q) / det;
        const double ds2 = -(-j21 * cur.p + j11 * cur.q) / det;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k, lambda *= 0.5) {
            const HorizontalGradient trial = F(s1 + lambda * ds1, s2 + lambda * ds2);
            if (trial.ok && std::hypot(trial.p, trial.q) < norm) {
                s1 += lambda * ds1;
                s2 += lambda * ds2;
                cur = trial;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    const double l = std::hypot(cur.p, cur.q);
    if (l > kCharEps * cur.scale) return std::nullopt;
    return CharacteristicPoint{s1, s2, cur.x, l};
}

// Ray length from an interior point to the domain boundary in direction phi.
double ray_to_boundary(const Domain& dom, double c1, double c2, double phi) {
    const double e1 = std::cos(phi), e2 = std::sin(phi);
    if (dom.shape == Domain::Shape::Disk) {
        const double d1 = c1 - dom.c1, d2 = c2 - dom.c2;
        const double de = d1 * e1 + d2 * e2;
        const double dd = d1 * d1 + d2 * d2;
        return -de + std::sqrt(std::max(0.0, de * de - dd + dom.R * dom.R));
    }
    double r = std::numeric_limits<double>::infinity();
    if (e1 > 0) r = std::min(r, (dom.b - c1) / e1);
    if (e1 < 0) r = std::min(r, (dom.a - c1) / e1);
    if (e2 > 0) r = std::min(r, (dom.d - c2) / e2);
    if (e2 < 0) r = std::min(r, (dom.c - c2) / e2);
    return r;
}

void add(QuadResult& acc, const QuadResult& r) {
    acc.value += r.value;
    acc.error += r.error;
    acc.evaluations += r.evaluations;
    acc.cells += r.cells;
    acc.converged = acc.converged && r.converged;
}

Orientation resolve_orientation(const Scene& scene, const GBOptions& opts, bool& detected) {
    const OrientationMode mode = opts.orientation.value_or(scene.orientation);
    detected = false;
    switch (mode) {
        case OrientationMode::AsAuthored: return Orientation::AsAuthored;
        case OrientationMode::Flipped: return Orientation::Flipped;
        case OrientationMode::Auto: break;
    }
    detected = true;
    return orientation_autodetect(scene, opts);
}

const CharacteristicPoint* single_characteristic(const std::vector<CharacteristicPoint>& pts) {
    if (pts.size() > 1)
        throw SceneError("scene has " + std::to_string(pts.size()) +
                         " characteristic points; excision supports at most one per chart");
    return pts.empty() ? nullptr : &pts.front();
}

struct BoundaryPass {
    std::vector<double> values, errors;
    std::vector<std::size_t> nodes;
};

template <class Integrand>
BoundaryPass integrate_boundary(const Scene& scene, const QuadTolerance& tol, Execution exec, Integrand&& g) {
    BoundaryPass out;
    for (const ParamCurve& curve : scene.boundary) {
        const QuadResult r = integrate_1d([&](double t) { return g(curve, t); }, curve.a, curve.b, tol, exec);
        if (!r.converged)
            throw NumericContractError("boundary quadrature did not converge (error " + fmt(r.error) + ")");
        out.values.push_back(r.value);
        out.errors.push_back(r.error);
        out.nodes.push_back(r.evaluations);
    }
    return out;
}

// Interior and boundary of the finite-L check under the as-authored orientation.
struct FinitePass {
    QuadResult interior;
    BoundaryPass boundary;
    std::vector<CharacteristicPoint> chars;
};

FinitePass finite_pass(ConnectionKind kind, double L, const Scene& scene, const QuadTolerance& tol,
                       Execution exec) {
    validate_scene(scene);
    FinitePass fp;
    const CoeffTable table = coeff_table(kind, L);
    fp.chars = locate_characteristic_points(scene);
    const CharacteristicPoint* cp = single_characteristic(fp.chars);
    std::optional<std::array<double, 2>> centre;
    if (cp) centre = std::array<double, 2>{cp->s1, cp->s2};

    auto interior = [&](double s1, double s2) {
        const Chart::Sample smp = scene.chart.at(s1, s2);
        const SurfaceLocal local(scene.u, smp.pos);
        return local.gauss_curvature(table).K_surf * gram_density(L, smp);
    };
    fp.interior = integrate_domain(interior, scene.domain, centre, 0.0, tol, exec);
    if (!fp.interior.converged)
        throw NumericContractError("interior quadrature did not converge (error " + fmt(fp.interior.error) + ")");

    fp.boundary = integrate_boundary(scene, tol, exec, [&](const ParamCurve& c, double t) {
        const SurfaceCurvePoint s(scene.u, c.at(t));
        const double speed = norm_L(L, frame_velocity(s.jet()).value);
        return geodesic_curvature_L(table, s, true, Orientation::AsAuthored) * speed;
    });
    return fp;
}

}  // namespace

Domain Domain::rectangle(double a, double b, double c, double d) {
    if (!(a < b && c < d)) throw InputError("rectangle domain needs a < b and c < d");
    Domain dom;
    dom.shape = Shape::Rectangle;
    dom.a = a, dom.b = b, dom.c = c, dom.d = d;
    return dom;
}

Domain Domain::disk(double c1, double c2, double R) {
    if (!(R > 0)) throw InputError("disk domain needs a positive radius");
    Domain dom;
    dom.shape = Shape::Disk;
    dom.c1 = c1, dom.c2 = c2, dom.R = R;
    return dom;
}

bool Domain::contains(double s1, double s2) const noexcept {
    if (shape == Shape::Disk) return std::hypot(s1 - c1, s2 - c2) <= R;
    return s1 >= a && s1 <= b && s2 >= c && s2 <= d;
}

double Domain::area() const noexcept { return shape == Shape::Disk ? kPi * R * R : (b - a) * (d - c); }

double Domain::distance_to_boundary(double s1, double s2) const noexcept {
    if (shape == Shape::Disk) return R - std::hypot(s1 - c1, s2 - c2);
    return std::min({s1 - a, b - s1, s2 - c, d - s2});
}

Box Domain::bounding_box() const noexcept {
    if (shape == Shape::Disk) return {c1 - R, c1 + R, c2 - R, c2 + R};
    return {a, b, c, d};
}

std::string Domain::describe() const {
    if (shape == Shape::Disk) return "disk(" + fmt(c1) + ", " + fmt(c2) + ", " + fmt(R) + ")";
    return "rectangle(" + fmt(a) + ", " + fmt(b) + ", " + fmt(c) + ", " + fmt(d) + ")";
}

void validate_scene(const Scene& scene) {
    const Box bb = scene.domain.bounding_box();
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double s1 = bb.a + (bb.b - bb.a) * (i + 0.5) / 8;
            const double s2 = bb.c + (bb.d - bb.c) * (j + 0.5) / 8;
            if (!scene.domain.contains(s1, s2)) continue;
            const Point x = scene.chart.at(s1, s2).pos;
            const Jet2 uj = scene.u.eval_jet(x.coords());
            const double g = std::sqrt(uj.d[0] * uj.d[0] + uj.d[1] * uj.d[1] + uj.d[2] * uj.d[2]);
            if (std::abs(uj.v) > kOnSurfaceEps * (1.0 + g))
                throw SceneError("chart leaves the surface at s = (" + fmt(s1) + ", " + fmt(s2) + "): u = " +
                                 fmt(uj.v));
        }
    }
    if (scene.boundary.empty()) throw SceneError("scene has no boundary curves");
    for (std::size_t k = 0; k < scene.boundary.size(); ++k) {
        const ParamCurve& c = scene.boundary[k];
        if (!(c.a < c.b)) throw SceneError("boundary." + std::to_string(k + 1) + " has an empty interval");
        for (int i = 0; i < kBoundarySamples; ++i) {
            const double t = c.a + (c.b - c.a) * i / kBoundarySamples;
            const Vec3 pos = c.at(t).pos;
            const Jet2 uj = scene.u.eval_jet(pos);
            const double g = std::sqrt(uj.d[0] * uj.d[0] + uj.d[1] * uj.d[1] + uj.d[2] * uj.d[2]);
            if (std::abs(uj.v) > kOnSurfaceEps * (1.0 + g))
                throw SceneError("boundary." + std::to_string(k + 1) + " leaves the surface at t = " + fmt(t) +
                                 ": u = " + fmt(uj.v));
        }
    }
}

double limit_length_element(const CurveJet& c) noexcept { return std::abs(omega(Point::from(c.pos), c.vel)); }

double limit_length_element(const ParamCurve& g, double t) { return limit_length_element(g.at(t)); }

double limit_area_element(const Expr& u, const Chart& chart, double s1, double s2) {
    const Chart::Sample smp = chart.at(s1, s2);
    return limit_density(SurfaceLocal(u, smp.pos), smp);
}

double area_element_L(double L, const Chart& chart, double s1, double s2) {
    return gram_density(MetricParam(L).value(), chart.at(s1, s2));
}

std::vector<CharacteristicPoint> locate_characteristic_points(const Scene& scene) {
    const Box bb = scene.domain.bounding_box();
    const int n = kScanGrid;
    std::vector<double> l(n * n, std::numeric_limits<double>::quiet_NaN());
    auto s_of = [&](int i, int j) {
        return std::array<double, 2>{bb.a + (bb.b - bb.a) * (i + 0.5) / n, bb.c + (bb.d - bb.c) * (j + 0.5) / n};
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto s = s_of(i, j);
            if (!scene.domain.contains(s[0], s[1])) continue;
            const HorizontalGradient h = horizontal_gradient(scene, s[0], s[1]);
            if (h.ok) l[i * n + j] = std::hypot(h.p, h.q) / h.scale;
        }
    }
    struct Candidate {
        double l;
        int i, j;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = l[i * n + j];
            if (std::isnan(v)) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di, b = j + dj;
                    if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= n || b >= n) continue;
                    const double w = l[a * n + b];
                    if (!std::isnan(w) && w < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) cands.push_back({v, i, j});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        return x.l < y.l || (x.l == y.l && (x.i < y.i || (x.i == y.i && x.j < y.j)));
    });
    if (cands.size() > 64) cands.resize(64);

    std::vector<CharacteristicPoint> found;
    for (const Candidate& c : cands) {
        const auto s = s_of(c.i, c.j);
        const auto cp = polish(scene, s[0], s[1]);
        if (!cp || !scene.domain.contains(cp->s1, cp->s2)) continue;
        const bool dup = std::any_of(found.begin(), found.end(), [&](const CharacteristicPoint& f) {
            return std::hypot(f.s1 - cp->s1, f.s2 - cp->s2) < 1e-6;
        });
        if (!dup) found.push_back(*cp);
    }
    return found;
}

QuadResult integrate_domain(const std::function<double(double, double)>& f, const Domain& domain,
                            const std::optional<std::array<double, 2>>& centre, double rho,
                            const QuadTolerance& tol, Execution exec) {
    if (!centre && domain.shape == Domain::Shape::Rectangle)
        return integrate_2d(f, {domain.a, domain.b, domain.c, domain.d}, tol, exec);
    const double c1 = centre ? (*centre)[0] : domain.c1;
    const double c2 = centre ? (*centre)[1] : domain.c2;
    const double margin = domain.distance_to_boundary(c1, c2);
    if (!(margin > rho))
        throw SceneError("characteristic point at s = (" + fmt(c1) + ", " + fmt(c2) +
                         ") lies within the excision radius of the domain boundary");

    // Angular pieces on which the ray length is smooth.
    std::vector<double> cuts;
    if (domain.shape == Domain::Shape::Disk) {
        cuts = {0.0, 2 * kPi};
    } else {
        const double corners[4][2] = {{domain.b, domain.d}, {domain.a, domain.d}, {domain.a, domain.c},
                                      {domain.b, domain.c}};
        for (const auto& k : corners) {
            double ang = std::atan2(k[1] - c2, k[0] - c1);
            if (ang < 0) ang += 2 * kPi;
            cuts.push_back(ang);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(cuts.front() + 2 * kPi);
    }
    QuadTolerance piece_tol = tol;
    piece_tol.abs = tol.abs / static_cast<double>(cuts.size() - 1);
    QuadResult total;
    total.converged = true;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        auto g = [&](double phi, double tau) {
            const double rmax = ray_to_boundary(domain, c1, c2, phi);
            const double span = rmax - rho;
            const double r = rho + tau * span;
            return f(c1 + r * std::cos(phi), c2 + r * std::sin(phi)) * r * span;
        };
        add(total, integrate_2d(g, {cuts[k], cuts[k + 1], 0.0, 1.0}, piece_tol, exec));
    }
    return total;
}

Orientation orientation_autodetect(const Scene& scene, const GBOptions& opts) {
    const QuadTolerance tol = opts.tolerance.value_or(scene.tolerance);
    const FinitePass fp = finite_pass(ConnectionKind::LeviCivita, 1.0, scene, tol, opts.execution);
    const double b = pairwise_sum(fp.boundary.values);
    const double target = 2 * kPi * scene.euler_characteristic;
    const double as = fp.interior.value + b - target;
    const double fl = fp.interior.value - b - target;
    if (std::abs(as) > 0.1 && std::abs(fl) > 0.1)
        throw OrientationError("neither orientation closes the classical Gauss-Bonnet check (residuals " + fmt(as) +
                               " and " + fmt(fl) + ")");
    return std::abs(fl) < std::abs(as) - 1e-9 ? Orientation::Flipped : Orientation::AsAuthored;
}

GBReport gb_check_finite_L(ConnectionKind kind, double L, const Scene& scene, const GBOptions& opts) {
    MetricParam{L};
    GBReport rep;
    rep.mode = "finite-L";
    rep.kind = kind;
    rep.L = L;
    rep.asserted = kind == ConnectionKind::LeviCivita;
    rep.orientation = resolve_orientation(scene, opts, rep.orientation_autodetected);
    const QuadTolerance tol = opts.tolerance.value_or(scene.tolerance);
    const FinitePass fp = finite_pass(kind, L, scene, tol, opts.execution);
    const double sign = orientation_sign(rep.orientation);

    rep.characteristic_points = fp.chars;
    rep.interior = fp.interior.value;
    rep.interior_error = fp.interior.error;
    rep.interior_nodes = fp.interior.evaluations;
    for (double v : fp.boundary.values) rep.boundary.push_back(sign * v);
    rep.boundary_error = fp.boundary.errors;
    rep.boundary_nodes = fp.boundary.nodes;
    rep.target = 2 * kPi * scene.euler_characteristic;
    rep.residual = rep.interior + pairwise_sum(rep.boundary) - rep.target;
    rep.residual_error = rep.interior_error + pairwise_sum(rep.boundary_error);
    return rep;
}

GBReport gb_residual_limit(ConnectionKind kind, const Scene& scene, std::optional<double> rho_excise,
                           const GBOptions& opts) {
    if (kind == ConnectionKind::LeviCivita)
        throw UnsupportedKindError("the limit Gauss-Bonnet identity is available for svk1, svk2 and adapted only");
    const double rho = rho_excise.value_or(scene.rho_excise);
    if (!(rho > 0)) throw InputError("excision radius must be positive");
    GBReport rep;
    rep.mode = "limit";
    rep.kind = kind;
    rep.orientation = resolve_orientation(scene, opts, rep.orientation_autodetected);
    const QuadTolerance tol = opts.tolerance.value_or(scene.tolerance);
    validate_scene(scene);

    rep.characteristic_points = locate_characteristic_points(scene);
    const CharacteristicPoint* cp = single_characteristic(rep.characteristic_points);

    auto interior = [&](double s1, double s2) {
        const Chart::Sample smp = scene.chart.at(s1, s2);
        const SurfaceLocal local(scene.u, smp.pos);
        const double K = local.gauss_curvature_limit(kind);
        return K == 0.0 ? 0.0 : K * std::abs(limit_density(local, smp));
    };

    if (!cp) {
        const QuadResult r = integrate_domain(interior, scene.domain, std::nullopt, 0.0, tol, opts.execution);
        if (!r.converged)
            throw NumericContractError("interior quadrature did not converge (error " + fmt(r.error) + ")");
        rep.interior = r.value;
        rep.interior_error = r.error;
        rep.interior_nodes = r.evaluations;
        rep.extrapolation.push_back({0.0, r.value, r.error, r.evaluations});
    } else {
        const std::array<double, 2> centre{cp->s1, cp->s2};
        for (double rr : {rho, rho / 2, rho / 4}) {
            const QuadResult r = integrate_domain(interior, scene.domain, centre, rr, tol, opts.execution);
            if (!r.converged)
                throw NumericContractError("interior quadrature did not converge at rho = " + fmt(rr));
            rep.extrapolation.push_back({rr, r.value, r.error, r.evaluations});
            rep.interior_nodes += r.evaluations;
        }
        const auto& e = rep.extrapolation;
        const double d1 = e[1].interior - e[0].interior;
        const double d2 = e[2].interior - e[1].interior;
        const double floor = 1e-9 * (1.0 + std::abs(e[2].interior)) + e[1].error + e[2].error;
        if (std::abs(d1) > floor && std::abs(d2) > 0.85 * std::abs(d1))
            throw NonIntegrableError("interior integral does not settle as the excision radius shrinks (" +
                                     fmt(e[0].interior) + ", " + fmt(e[1].interior) + ", " + fmt(e[2].interior) +
                                     "); the curvature is not summable near the characteristic point");
        rep.interior = 2.0 * e[2].interior - e[1].interior;
        const double coarse = 2.0 * e[1].interior - e[0].interior;
        rep.interior_error = 2.0 * e[2].error + e[1].error + std::abs(rep.interior - coarse);
        rep.excised_area_fraction = kPi * rho * rho / scene.domain.area();
    }

    const BoundaryPass bp = integrate_boundary(scene, tol, opts.execution, [&](const ParamCurve& c, double t) {
        const SurfaceCurvePoint s(scene.u, c.at(t));
        const SignedLimitResult k = geodesic_curvature_limit(kind, s, true, std::nullopt, rep.orientation);
        if (k.branch != CurveBranch::NonHorizontal) return 0.0;
        return k.value == 0.0 ? 0.0 : k.value * std::abs(k.omega);
    });
    rep.boundary = bp.values;
    rep.boundary_error = bp.errors;
    rep.boundary_nodes = bp.nodes;
    rep.target = 0.0;
    rep.residual = rep.interior + pairwise_sum(rep.boundary);
    rep.residual_error = rep.interior_error + pairwise_sum(rep.boundary_error);
    return rep;
}

}  // namespace heis
