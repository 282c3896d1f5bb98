#include "heis/surface.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "heis/error.hpp"

namespace heis {

Chart Chart::parse(std::string_view c1, std::string_view c2, std::string_view c3) {
    return Chart{{heis::parse(c1, VariableSet::chart()), heis::parse(c2, VariableSet::chart()),
                  heis::parse(c3, VariableSet::chart())}};
}

Chart::Sample Chart::at(double s1, double s2) const {
    Sample s;
    Vec3 pos{};
    for (std::size_t i = 0; i < 3; ++i) {
        const Jet2 j = map[i].eval_jet({s1, s2, 0.0});
        pos[i] = j.v;
        s.d1[i] = j.d[0];
        s.d2[i] = j.d[1];
    }
    s.pos = Point::from(pos);
    return s;
}

ImplicitSurface ImplicitSurface::parse(std::string_view u) { return ImplicitSurface{heis::parse(u), std::nullopt}; }

namespace {

std::string where(const Point& x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.10g, %.10g, %.10g)", x.x1, x.x2, x.x3);
    return buf;
}

Jet1 coordinate_jet(double value, std::size_t slot) {
    Jet1 j;
    j.v = value;
    j.d[slot] = 1.0;
    return j;
}

// <a, grad_H f>: only horizontal components of `a` pair with grad_H f.
double pair_horizontal(const FrameVector& a, const Point& x, const Jet1& f) {
    const Vec3 xf = frame_derivatives(x, f);
    return a.a1 * xf[0] + a.a2 * xf[1];
}

}  // namespace

SurfaceLocal::SurfaceLocal(const Expr& u, const Point& x, SurfaceChecks checks) : x_(x) {
    u_ = u.eval_jet(x.coords());
    const double gnorm = std::sqrt(u_.d[0] * u_.d[0] + u_.d[1] * u_.d[1] + u_.d[2] * u_.d[2]);
    if (!(gnorm > 0.0)) throw SceneError("grad u vanishes at " + where(x) + "; the surface is not regular there");
    if (checks.on_surface && std::abs(u_.v) > kOnSurfaceEps * (1.0 + gnorm))
        throw SceneError("point " + where(x) + " is off the surface: u = " + std::to_string(u_.v));
    const Jet1 x1 = coordinate_jet(x.x1, 0);
    const Jet1 x2 = coordinate_jet(x.x2, 1);
    const Jet1 u3 = partial(u_, 2);
    p_ = partial(u_, 0) - 0.5 * (x2 * u3);
    q_ = partial(u_, 1) + 0.5 * (x1 * u3);
    x3u_ = u3;
    l_ = std::hypot(p_.v, q_.v);
    if (!(l_ > kCharEps * (1.0 + gnorm)))
        throw CharacteristicPointError("characteristic point at " + where(x) + ": |grad_H u| = " + std::to_string(l_),
                                       l_, x.coords());
}

struct SurfaceLocal::FrameJets {
    double L = 1.0, sqrtL = 1.0;
    Jet1 l, lL, r, pb, qb, pbL, qbL, rbL;
    std::array<Jet1, 3> v;
    FrameVector e1, e2;
};

SurfaceLocal::FrameJets SurfaceLocal::frame_jets(double L) const {
    FrameJets f;
    f.L = L;
    f.sqrtL = std::sqrt(L);
    f.r = (1.0 / f.sqrtL) * x3u_;
    f.l = sqrt(p_ * p_ + q_ * q_);
    f.lL = sqrt(p_ * p_ + q_ * q_ + f.r * f.r);
    f.pb = p_ / f.l;
    f.qb = q_ / f.l;
    f.pbL = p_ / f.lL;
    f.qbL = q_ / f.lL;
    f.rbL = f.r / f.lL;
    f.v = {f.pbL, f.qbL, (1.0 / f.sqrtL) * f.rbL};
    f.e1 = {f.qb.v, -f.pb.v, 0.0};
    f.e2 = {f.rbL.v * f.pb.v, f.rbL.v * f.qb.v, -(f.l.v / f.lL.v) / f.sqrtL};
    return f;
}

SurfaceFrame SurfaceLocal::frame(double L) const {
    const FrameJets f = frame_jets(L);
    SurfaceFrame s;
    s.point = x_;
    s.L = L;
    s.p = p_.v;
    s.q = q_.v;
    s.r = f.r.v;
    s.l = f.l.v;
    s.l_L = f.lL.v;
    s.p_bar = f.pb.v;
    s.q_bar = f.qb.v;
    s.p_bar_L = f.pbL.v;
    s.q_bar_L = f.qbL.v;
    s.r_bar_L = f.rbL.v;
    s.v_L = {f.v[0].v, f.v[1].v, f.v[2].v};
    s.e1 = f.e1;
    s.e2 = f.e2;
    return s;
}

Matrix2 SurfaceLocal::second_fundamental_form(const CoeffTable& table) const {
    const FrameJets f = frame_jets(table.L);
    const FrameVector v{f.v[0].v, f.v[1].v, f.v[2].v};
    std::array<Vec3, 3> dv;  // dv[k] = (X1, X2, X3) applied to v^k
    for (std::size_t k = 0; k < 3; ++k) dv[k] = frame_derivatives(x_, f.v[k]);
    const std::array<FrameVector, 2> basis{f.e1, f.e2};
    Matrix2 II{};
    for (std::size_t i = 0; i < 2; ++i) {
        const FrameVector& E = basis[i];
        FrameVector Ev;
        for (std::size_t k = 0; k < 3; ++k) Ev[k] = E.a1 * dv[k][0] + E.a2 * dv[k][1] + E.a3 * dv[k][2];
        const FrameVector nabla = covariant(table, E, v, Ev);
        for (std::size_t j = 0; j < 2; ++j) II[i][j] = inner_L(table.L, nabla, basis[j]);
    }
    return II;
}

std::optional<Matrix2> SurfaceLocal::second_fundamental_form_closed_form(ConnectionKind kind, double L) const {
    if (kind == ConnectionKind::LeviCivita) return std::nullopt;
    const FrameJets f = frame_jets(L);
    const double sL = f.sqrtL;
    const double l = f.l.v, lL = f.lL.v, pb = f.pb.v, qb = f.qb.v, rbL = f.rbL.v, qbL = f.qbL.v;
    const double H = horizontal_mean_curvature();
    const double A = -(lL / l) * pair_horizontal(f.e1, x_, f.rbL);
    const Jet1 r_over_l = f.r / f.l;
    const double X3t_rbL = frame_derivatives(x_, f.rbL)[2] / sL;
    const double h22 = -(l * l) / (lL * lL) * pair_horizontal(f.e2, x_, r_over_l) + X3t_rbL;
    Matrix2 m{};
    switch (kind) {
        case ConnectionKind::SvK1:
            m[0][0] = l / lL * H;
            m[0][1] = A;
            m[1][0] = A - sL / 2.0 - sL / 2.0 * rbL * rbL;
            m[1][1] = h22;
            break;
        case ConnectionKind::SvK2:
            m[0][0] = l / lL * H + sL * pb * qb * rbL / 2.0;
            m[0][1] = A - 0.5 * rbL * rbL * qb * qb * sL - l / (2.0 * lL) * qb * qbL * sL;
            m[1][0] = A - sL / 2.0 + sL / 2.0 * (l * l) / (lL * lL) - sL / 2.0 * rbL * rbL * qb * qb;
            m[1][1] = h22 - sL / 2.0 * (l / lL) * pb * qbL * rbL - sL / 2.0 * pb * qb * rbL * rbL * rbL;
            break;
        case ConnectionKind::Adapted:
            m[0][0] = l / lL * H;
            m[0][1] = A;
            m[1][0] = A - sL / 2.0 + sL / 2.0 * (l * l) / (lL * lL) - sL / 2.0 * rbL * rbL;
            m[1][1] = h22;
            break;
        case ConnectionKind::LeviCivita:
            break;
    }
    return m;
}

double SurfaceLocal::horizontal_mean_curvature() const noexcept {
    const Jet1 l = sqrt(p_ * p_ + q_ * q_);
    const Jet1 pb = p_ / l;
    const Jet1 qb = q_ / l;
    return frame_derivatives(x_, pb)[0] + frame_derivatives(x_, qb)[1];
}

ShapeOperatorReport SurfaceLocal::gauss_curvature(const CoeffTable& table) const {
    const SurfaceFrame fr = frame(table.L);
    ShapeOperatorReport r;
    r.II = second_fundamental_form(table);
    r.H_L = trace(r.II);
    r.K_amb = sectional(table, fr.e1, fr.e2);
    r.K_surf = r.K_amb + det(r.II);
    return r;
}

double SurfaceLocal::gauss_curvature_limit(ConnectionKind kind) const {
    const Jet1 l = sqrt(p_ * p_ + q_ * q_);
    const double pb = p_.v / l.v, qb = q_.v / l.v;
    const FrameVector e1{qb, -pb, 0.0};
    const double X3u = x3u_.v;
    const double bracket = pair_horizontal(e1, x_, x3u_ / l);
    const double ratio2 = X3u * X3u / (l.v * l.v);
    switch (kind) {
        case ConnectionKind::SvK1:
            return -0.5 * bracket - 0.5 * ratio2;
        case ConnectionKind::SvK2:
            return -pb * qb * X3u / (2.0 * l.v) * horizontal_mean_curvature() - 0.5 * qb * qb * (bracket + ratio2);
        case ConnectionKind::Adapted:
            return 0.0;
        case ConnectionKind::LeviCivita:
            break;
    }
    throw UnsupportedKindError("limit Gauss curvature is available for svk1, svk2 and adapted only");
}

SurfaceFrame surface_frame(const Expr& u, const Point& x, double L) { return SurfaceLocal(u, x).frame(L); }

Matrix2 second_fundamental_form(ConnectionKind kind, double L, const Expr& u, const Point& x) {
    return SurfaceLocal(u, x).second_fundamental_form(coeff_table(kind, L));
}

double mean_curvature_L(ConnectionKind kind, double L, const Expr& u, const Point& x) {
    return trace(second_fundamental_form(kind, L, u, x));
}

double mean_curvature_limit(ConnectionKind, const Expr& u, const Point& x) {
    return SurfaceLocal(u, x).horizontal_mean_curvature();
}

ShapeOperatorReport gauss_curvature_L(ConnectionKind kind, double L, const Expr& u, const Point& x) {
    return SurfaceLocal(u, x).gauss_curvature(coeff_table(kind, L));
}

double gauss_curvature_limit(ConnectionKind kind, const Expr& u, const Point& x) {
    return SurfaceLocal(u, x).gauss_curvature_limit(kind);
}

}  // namespace heis
