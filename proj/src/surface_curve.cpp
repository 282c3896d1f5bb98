#include "heis/surface_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heis/error.hpp"

namespace heis {

std::string_view to_string(Orientation o) noexcept {
    return o == Orientation::Flipped ? "flipped" : "as-authored";
}

SurfaceCurvePoint::SurfaceCurvePoint(const Expr& u, const CurveJet& c)
    : jet_(c), local_(u, Point::from(c.pos)) {
    require_regular(c);
    const Vec3& g = local_.u_jet().d;
    const double du = g[0] * c.vel[0] + g[1] * c.vel[1] + g[2] * c.vel[2];
    const double gnorm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    const double speed = std::sqrt(c.vel[0] * c.vel[0] + c.vel[1] * c.vel[1] + c.vel[2] * c.vel[2]);
    if (std::abs(du) > kTangencyEps * gnorm * speed)
        throw SceneError("curve is not tangent to the surface at (" + std::to_string(c.pos[0]) + ", " +
                         std::to_string(c.pos[1]) + ", " + std::to_string(c.pos[2]) +
                         "): du(gamma') = " + std::to_string(du));
}

ProjectedAcceleration projected_acceleration(const CoeffTable& table, const SurfaceCurvePoint& s) {
    const FrameVector A = covariant_acceleration(table, s.jet());
    const SurfaceFrame f = s.surface().frame(table.L);
    return {inner_L(table.L, A, f.e1), inner_L(table.L, A, f.e2)};
}

std::optional<ProjectedAcceleration> projected_acceleration_expansion(ConnectionKind kind, double L,
                                                                      const SurfaceCurvePoint& s) {
    const CurveJet& c = s.jet();
    const double g1 = c.vel[0], g2 = c.vel[1];
    const double w = omega(Point::from(c.pos), c.vel);
    const double wd = omega_dot(c);
    double B1 = 0, B2 = 0, B3 = 0;
    switch (kind) {
        case ConnectionKind::SvK1:
            B1 = c.acc[0] + L * w * g2 / 2.0;
            B2 = c.acc[1] - L * w * g1 / 2.0;
            B3 = wd;
            break;
        case ConnectionKind::SvK2:
            B1 = c.acc[0];
            B2 = c.acc[1] - L * w * g1 / 2.0;
            B3 = wd + 0.5 * g1 * g2;
            break;
        case ConnectionKind::Adapted:
            B1 = c.acc[0];
            B2 = c.acc[1];
            B3 = wd;
            break;
        case ConnectionKind::LeviCivita:
            return std::nullopt;
    }
    const SurfaceFrame f = s.surface().frame(L);
    return ProjectedAcceleration{
        f.q_bar * B1 - f.p_bar * B2,
        f.r_bar_L * f.p_bar * B1 + f.r_bar_L * f.q_bar * B2 - (f.l / f.l_L) * std::sqrt(L) * B3};
}

double geodesic_curvature_L(const CoeffTable& table, const SurfaceCurvePoint& s, bool is_signed,
                            Orientation orientation) {
    const double sign = orientation_sign(orientation);
    const SurfaceFrame f = s.surface().frame(table.L);
    const FrameVector V = frame_velocity(s.jet()).value;
    const ProjectedAcceleration pa = projected_acceleration(table, s);
    const double a = inner_L(table.L, V, f.e1);
    const double b = sign * inner_L(table.L, V, f.e2);
    const double c1 = pa.c1, c2 = sign * pa.c2;
    const double vv = a * a + b * b;
    if (is_signed) return (c2 * a - c1 * b) / std::pow(vv, 1.5);
    const double first = (c1 * c1 + c2 * c2) / (vv * vv);
    const double cross = c1 * a + c2 * b;
    const double radicand = first - cross * cross / (vv * vv * vv);
    if (radicand >= 0.0) return std::sqrt(radicand);
    if (radicand >= -1e-12 * std::max(1.0, first)) return 0.0;
    throw NumericContractError("negative geodesic-curvature radicand " + std::to_string(radicand));
}

SignedLimitResult geodesic_curvature_limit(ConnectionKind kind, const SurfaceCurvePoint& s, bool is_signed,
                                           std::optional<double> eps_h, Orientation orientation) {
    if (kind == ConnectionKind::LeviCivita)
        throw UnsupportedKindError("geodesic curvature limit is available for svk1, svk2 and adapted only");
    const CurveJet& c = s.jet();
    const double eps = eps_h.value_or(horizontality_threshold(c));
    const double sign = orientation_sign(orientation);
    const double g1 = c.vel[0], g2 = c.vel[1];
    const double w = omega(Point::from(c.pos), c.vel);
    const double pb = s.surface().p() / s.surface().l();
    const double qb = s.surface().q() / s.surface().l();

    SignedLimitResult r;
    r.omega = w;
    r.discriminator = horizontal_discriminator(kind, c);
    const double aw = std::abs(w);
    r.marginal = aw >= eps && aw <= 1e3 * eps;

    if (aw >= eps) {
        r.branch = CurveBranch::NonHorizontal;
        double numer = 0.0;
        switch (kind) {
            case ConnectionKind::SvK1: numer = pb * g1 + qb * g2; break;
            case ConnectionKind::SvK2: numer = pb * g1; break;
            default: numer = 0.0; break;
        }
        const double v = numer / (2.0 * aw);
        r.value = is_signed ? sign * v : std::abs(v);
        return r;
    }
    const double m = qb * g1 - pb * g2;
    if (std::abs(m) <= eps)
        throw DegenerateDenominatorError("horizontal point with q_bar gamma1' - p_bar gamma2' = " + std::to_string(m) +
                                         "; the limit formula is undefined");
    if (std::abs(r.discriminator) < eps) {
        r.branch = CurveBranch::HorizontalFinite;
        r.value = 0.0;
        return r;
    }
    r.branch = CurveBranch::HorizontalDivergent;
    const double d = r.discriminator;
    r.value = is_signed ? sign * (-m) * d / std::pow(std::abs(m), 3.0) : std::abs(d) / (m * m);
    return r;
}

ProjectedAcceleration projected_acceleration(ConnectionKind kind, double L, const OnSurfaceCurve& onc, double t) {
    return projected_acceleration(coeff_table(kind, L), SurfaceCurvePoint(onc, t));
}

double geodesic_curvature_L(ConnectionKind kind, double L, const OnSurfaceCurve& onc, double t, bool is_signed,
                            Orientation orientation) {
    return geodesic_curvature_L(coeff_table(kind, L), SurfaceCurvePoint(onc, t), is_signed, orientation);
}

SignedLimitResult geodesic_curvature_limit(ConnectionKind kind, const OnSurfaceCurve& onc, double t, bool is_signed,
                                           std::optional<double> eps_h, Orientation orientation) {
    return geodesic_curvature_limit(kind, SurfaceCurvePoint(onc, t), is_signed, eps_h, orientation);
}

}  // namespace heis
