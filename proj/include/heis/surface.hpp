#pragma once
// Implicit surfaces {u = 0}: the adapted orthonormal frame (v_L, e1, e2),
// second fundamental forms, mean curvature and Gauss curvature for each
// connection, plus their L -> infinity limits.

#include <array>
#include <optional>
#include <string_view>

#include "heis/connection.hpp"
#include "heis/expr.hpp"

namespace heis {

using Matrix2 = std::array<std::array<double, 2>, 2>;

inline double det(const Matrix2& m) noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
inline double trace(const Matrix2& m) noexcept { return m[0][0] + m[1][1]; }

/// Chart (s1, s2) -> (x1, x2, x3); expressions use VariableSet::chart().
struct Chart {
    std::array<Expr, 3> map;

    static Chart parse(std::string_view c1, std::string_view c2, std::string_view c3);

    struct Sample {
        Point pos;
        Vec3 d1;  // d chart / d s1
        Vec3 d2;  // d chart / d s2
    };
    Sample at(double s1, double s2) const;
};

struct ImplicitSurface {
    Expr u;
    std::optional<Chart> chart;

    static ImplicitSurface parse(std::string_view u);
};

/// |u| allowed at a point declared to lie on the surface, relative to 1 + |grad u|.
inline constexpr double kOnSurfaceEps = 1e-8;
/// Characteristic threshold on l, relative to 1 + |grad u|.
inline constexpr double kCharEps = 1e-8;

struct SurfaceFrame {
    Point point;
    double L = 1.0;
    double p = 0, q = 0, r = 0, l = 0, l_L = 0;
    double p_bar = 0, q_bar = 0, p_bar_L = 0, q_bar_L = 0, r_bar_L = 0;
    FrameVector v_L, e1, e2;
};

struct ShapeOperatorReport {
    Matrix2 II{};
    double H_L = 0.0;
    double K_amb = 0.0;
    double K_surf = 0.0;
};

struct SurfaceChecks {
    bool on_surface = true;
};

/// Local differential data of u at one surface point: value, gradient and
/// Hessian of u, and first-order jets of X1 u, X2 u, X3 u.
class SurfaceLocal {
public:
    SurfaceLocal(const Expr& u, const Point& x, SurfaceChecks checks = {});

    const Point& point() const noexcept { return x_; }
    const Jet2& u_jet() const noexcept { return u_; }
    double p() const noexcept { return p_.v; }
    double q() const noexcept { return q_.v; }
    double x3u() const noexcept { return x3u_.v; }
    double l() const noexcept { return l_; }

    SurfaceFrame frame(double L) const;

    /// Definition: <nabla_{e_i} v_L, e_j>_L with v_L differentiated through u's Hessian.
    Matrix2 second_fundamental_form(const CoeffTable& table) const;
    /// Closed-form tables for SvK1, SvK2 and Adapted.
    std::optional<Matrix2> second_fundamental_form_closed_form(ConnectionKind kind, double L) const;

    /// X1(p_bar) + X2(q_bar): the L -> infinity mean curvature for every kind.
    double horizontal_mean_curvature() const noexcept;

    ShapeOperatorReport gauss_curvature(const CoeffTable& table) const;
    /// Limit Gauss curvature; LeviCivita raises UnsupportedKindError.
    double gauss_curvature_limit(ConnectionKind kind) const;

private:
    struct FrameJets;
    FrameJets frame_jets(double L) const;

    Point x_;
    Jet2 u_;
    Jet1 p_, q_, x3u_;
    double l_ = 0.0;
};

SurfaceFrame surface_frame(const Expr& u, const Point& x, double L);
Matrix2 second_fundamental_form(ConnectionKind kind, double L, const Expr& u, const Point& x);
double mean_curvature_L(ConnectionKind kind, double L, const Expr& u, const Point& x);
double mean_curvature_limit(ConnectionKind kind, const Expr& u, const Point& x);
ShapeOperatorReport gauss_curvature_L(ConnectionKind kind, double L, const Expr& u, const Point& x);
double gauss_curvature_limit(ConnectionKind kind, const Expr& u, const Point& x);

}  // namespace heis
