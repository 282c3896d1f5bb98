#pragma once
// Limit measures, integration over a chart domain with characteristic-point
// excision, and the Gauss-Bonnet residuals (limit and finite L).

#include <optional>
#include <string>
#include <vector>

#include "heis/quadrature.hpp"
#include "heis/surface.hpp"
#include "heis/surface_curve.hpp"

namespace heis {

/// Parameter-space region of the chart.
struct Domain {
    enum class Shape { Rectangle, Disk };
    Shape shape = Shape::Rectangle;
    double a = 0, b = 1, c = 0, d = 1;      // rectangle [a,b] x [c,d]
    double c1 = 0, c2 = 0, R = 1;           // disk centre and radius

    static Domain rectangle(double a, double b, double c, double d);
    static Domain disk(double c1, double c2, double R);

    bool contains(double s1, double s2) const noexcept;
    double area() const noexcept;
    /// Distance from an interior point to the domain boundary.
    double distance_to_boundary(double s1, double s2) const noexcept;
    Box bounding_box() const noexcept;
    std::string describe() const;
};

enum class OrientationMode { Auto, AsAuthored, Flipped };

struct Scene {
    std::string name;
    Expr u;
    Chart chart;
    Domain domain;
    std::vector<ParamCurve> boundary;
    int euler_characteristic = 1;
    OrientationMode orientation = OrientationMode::Auto;
    double rho_excise = 1e-2;
    QuadTolerance tolerance;
    std::vector<double> L_grid{0.25, 1.0, 4.0};
};

/// Samples the chart and each boundary curve at 64 nodes against {u = 0}; throws SceneError.
void validate_scene(const Scene& scene);

/// ds/dt = |w(gamma')|.
double limit_length_element(const CurveJet& c) noexcept;
double limit_length_element(const ParamCurve& g, double t);
/// Pullback of p_bar w2^w3 - q_bar w1^w3 on (d chart/ds1, d chart/ds2). Signed.
double limit_area_element(const Expr& u, const Chart& chart, double s1, double s2);
/// Riemannian area density sqrt(det Gram_L(T1, T2)).
double area_element_L(double L, const Chart& chart, double s1, double s2);

struct CharacteristicPoint {
    double s1 = 0, s2 = 0;
    Point x;
    double l = 0;
};

/// Grid scan (64 x 64) for local minima of l followed by damped Newton on (X1 u, X2 u) = 0.
std::vector<CharacteristicPoint> locate_characteristic_points(const Scene& scene);

struct ExcisionSample {
    double rho = 0;
    double interior = 0;
    double error = 0;
    std::size_t nodes = 0;
};

struct GBReport {
    std::string mode;  // "limit" or "finite-L"
    ConnectionKind kind = ConnectionKind::SvK1;
    std::optional<double> L;
    Orientation orientation = Orientation::AsAuthored;
    bool orientation_autodetected = false;

    double interior = 0;
    double interior_error = 0;
    std::vector<double> boundary;
    std::vector<double> boundary_error;
    /// 2 pi chi for finite L, 0 in the limit.
    double target = 0;
    double residual = 0;
    double residual_error = 0;
    /// False for the torsionful kinds at finite L: the residual is a diagnostic only.
    bool asserted = true;

    std::vector<CharacteristicPoint> characteristic_points;
    std::vector<ExcisionSample> extrapolation;
    double excised_area_fraction = 0;
    std::size_t interior_nodes = 0;
    std::vector<std::size_t> boundary_nodes;
};

struct GBOptions {
    Execution execution = Execution::Parallel;
    /// Overrides scene.tolerance when set.
    std::optional<QuadTolerance> tolerance;
    /// Overrides scene.orientation when set.
    std::optional<OrientationMode> orientation;
};

GBReport gb_residual_limit(ConnectionKind kind, const Scene& scene, std::optional<double> rho_excise = std::nullopt,
                           const GBOptions& opts = {});
GBReport gb_check_finite_L(ConnectionKind kind, double L, const Scene& scene, const GBOptions& opts = {});
Orientation orientation_autodetect(const Scene& scene, const GBOptions& opts = {});

/// Integral of f(s1, s2) ds1 ds2 over the domain minus a parameter disk of radius rho around `centre`.
QuadResult integrate_domain(const std::function<double(double, double)>& f, const Domain& domain,
                            const std::optional<std::array<double, 2>>& centre, double rho,
                            const QuadTolerance& tol, Execution exec);

}  // namespace heis
