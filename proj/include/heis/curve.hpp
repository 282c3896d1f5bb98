#pragma once
// Curvature of parametrized curves in (H, g_L) with respect to each
// connection, and the L -> infinity trichotomy.

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "heis/connection.hpp"
#include "heis/expr.hpp"

namespace heis {

/// Euclidean speed below which a curve point counts as singular.
inline constexpr double kRegularityEps = 1e-12;

struct ParamCurve {
    std::array<Expr, 3> components;
    double a = 0.0;
    double b = 2.0 * std::numbers::pi;

    static ParamCurve parse(std::string_view c1, std::string_view c2, std::string_view c3,
                            double a = 0.0, double b = 2.0 * std::numbers::pi);
    /// Comma-separated components, e.g. "cos(t),sin(t),0".
    static ParamCurve parse_list(std::string_view components);

    CurveJet at(double t) const { return eval_curve_jet(components, t); }
};

enum class CurveBranch { NonHorizontal, HorizontalFinite, HorizontalDivergent };
std::string_view to_string(CurveBranch b) noexcept;

struct CurveLimitResult {
    CurveBranch branch = CurveBranch::NonHorizontal;
    /// k at infinity, or lim k^L / sqrt(L) on the divergent branch.
    double value = 0.0;
    /// |w(gamma')| fell inside [eps_h, 1e3 eps_h]: the classification is near its boundary.
    bool marginal = false;
    double omega = 0.0;
    double discriminator = 0.0;
};

/// Throws NonRegularCurveError when |gamma'| <= kRegularityEps.
void require_regular(const CurveJet& c);

/// Default horizontality threshold 1e-9 (1 + |gamma'|).
double horizontality_threshold(const CurveJet& c) noexcept;

/// sqrt(|A|^2/|V|^4 - <A,V>^2/|V|^6) in g_L, with the radicand clamped at 0 when
/// within roundoff; a clearly negative radicand raises NumericContractError.
double curvature_from_acceleration(double L, const FrameVector& acceleration, const FrameVector& velocity);

/// Definition path: covariant acceleration from the coefficient table.
double curve_curvature_L(const CoeffTable& table, const CurveJet& c);
double curve_curvature_L(ConnectionKind kind, double L, const CurveJet& c);

/// Closed-form displays for SvK1, SvK2 and Adapted (nullopt for Levi-Civita).
std::optional<double> curve_curvature_closed_form(ConnectionKind kind, double L, const CurveJet& c);
/// The same displays specialized to a horizontal point (w(gamma') = 0).
std::optional<double> curve_curvature_horizontal_closed_form(ConnectionKind kind, double L, const CurveJet& c);

/// Second horizontal test: w' for SvK1/Adapted, w' + gamma1' gamma2' / 2 for SvK2.
double horizontal_discriminator(ConnectionKind kind, const CurveJet& c) noexcept;

/// Limit L -> infinity. eps_h defaults to horizontality_threshold(c).
CurveLimitResult curve_curvature_limit(ConnectionKind kind, const CurveJet& c,
                                       std::optional<double> eps_h = std::nullopt);

}  // namespace heis
