#pragma once
// Geodesic curvature of curves lying on an implicit surface, at finite L and
// in the L -> infinity limit. The surface connection is the g_L-orthogonal
// projection of the ambient one onto span{e1, e2}; J_L rotates e1 to e2.

#include <optional>

#include "heis/curve.hpp"
#include "heis/surface.hpp"

namespace heis {

/// Tangency tolerance: |du(gamma')| <= kTangencyEps |grad u| |gamma'|.
inline constexpr double kTangencyEps = 1e-8;

enum class Orientation { AsAuthored, Flipped };
std::string_view to_string(Orientation o) noexcept;

inline double orientation_sign(Orientation o) noexcept { return o == Orientation::Flipped ? -1.0 : 1.0; }

struct OnSurfaceCurve {
    ParamCurve curve;
    Expr u;
};

/// Everything needed at one curve parameter: the curve jet and the surface data at gamma(t).
/// Construction validates on-surface, tangency and non-characteristic conditions.
class SurfaceCurvePoint {
public:
    SurfaceCurvePoint(const Expr& u, const CurveJet& c);
    SurfaceCurvePoint(const OnSurfaceCurve& onc, double t) : SurfaceCurvePoint(onc.u, onc.curve.at(t)) {}

    const CurveJet& jet() const noexcept { return jet_; }
    const SurfaceLocal& surface() const noexcept { return local_; }

private:
    CurveJet jet_;
    SurfaceLocal local_;
};

/// Components (c1, c2) of the projected covariant acceleration on (e1, e2).
struct ProjectedAcceleration {
    double c1 = 0.0;
    double c2 = 0.0;
};

ProjectedAcceleration projected_acceleration(const CoeffTable& table, const SurfaceCurvePoint& s);
/// Expanded displays for SvK1, SvK2 and Adapted.
std::optional<ProjectedAcceleration> projected_acceleration_expansion(ConnectionKind kind, double L,
                                                                      const SurfaceCurvePoint& s);

double geodesic_curvature_L(const CoeffTable& table, const SurfaceCurvePoint& s, bool is_signed,
                            Orientation orientation = Orientation::AsAuthored);

struct SignedLimitResult {
    CurveBranch branch = CurveBranch::NonHorizontal;
    /// Limit value, or the sqrt(L) coefficient on the divergent branch.
    double value = 0.0;
    bool marginal = false;
    double omega = 0.0;
    double discriminator = 0.0;
};

SignedLimitResult geodesic_curvature_limit(ConnectionKind kind, const SurfaceCurvePoint& s, bool is_signed,
                                           std::optional<double> eps_h = std::nullopt,
                                           Orientation orientation = Orientation::AsAuthored);

// Convenience overloads on (curve, surface, t).
ProjectedAcceleration projected_acceleration(ConnectionKind kind, double L, const OnSurfaceCurve& onc, double t);
double geodesic_curvature_L(ConnectionKind kind, double L, const OnSurfaceCurve& onc, double t, bool is_signed,
                            Orientation orientation = Orientation::AsAuthored);
SignedLimitResult geodesic_curvature_limit(ConnectionKind kind, const OnSurfaceCurve& onc, double t, bool is_signed,
                                           std::optional<double> eps_h = std::nullopt,
                                           Orientation orientation = Orientation::AsAuthored);

}  // namespace heis
