#pragma once
// The property suite behind `heis verify`: two-path agreement between closed
// forms and definition oracles, limit consistency, metric compatibility and
// jet correctness, over seeded random samples.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "heis/connection.hpp"
#include "heis/curve.hpp"
#include "heis/surface.hpp"

namespace heis {

struct PropertyResult {
    std::string name;
    std::string description;
    std::size_t samples = 0;
    /// Largest observed deviation in the property's own measure (see description).
    double worst = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    /// Per-kind sample count; jets use twice this, metric compatibility half.
    std::size_t samples = 100;
    /// Fault injection: applied to every coefficient table the suite builds.
    std::function<void(CoeffTable&)> corrupt_table;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::vector<PropertyResult> properties;
    double seconds = 0.0;

    bool all_passed() const noexcept;
    const PropertyResult* find(std::string_view name) const noexcept;
};

VerifyReport run_verify(const VerifyOptions& opts);

// Groups, exposed for the unit tests and the acceptance binary.
std::vector<PropertyResult> verify_expr(const VerifyOptions& opts);
std::vector<PropertyResult> verify_core(const VerifyOptions& opts);
std::vector<PropertyResult> verify_connections(const VerifyOptions& opts);
std::vector<PropertyResult> verify_curves(const VerifyOptions& opts);
std::vector<PropertyResult> verify_surfaces(const VerifyOptions& opts);
std::vector<PropertyResult> verify_surface_curves(const VerifyOptions& opts);
std::vector<PropertyResult> verify_measures(const VerifyOptions& opts);

/// Least-squares alpha in |f(L) - limit| ~ c L^-alpha.
double fit_decay_exponent(const std::vector<double>& Ls, const std::vector<double>& deviations);

namespace gen {

/// Deterministic sampler; every draw goes through the one engine.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double log_uniform(double a, double b);
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    double sign() { return pick(2) == 0 ? -1.0 : 1.0; }

private:
    std::mt19937_64 rng_;
};

/// "(v)" with round-trip precision, safe to splice into any expression.
std::string num(double v);

/// Random smooth expression in x1, x2, x3 (or t when `curve` is set).
struct RandomExpr {
    std::string source;
    /// Arguments of abs(...) calls; callers keep them away from zero.
    std::vector<std::string> abs_args;
};
RandomExpr random_expr(Sampler& s, int depth, bool curve = false);

/// Random smooth curve component list in t.
std::array<std::string, 3> random_curve(Sampler& s);

/// A random surface with a curve on it passing through a non-characteristic point at t0.
struct SurfaceCase {
    std::string u_source;
    Expr u;
    std::array<std::string, 3> curve_source;
    ParamCurve curve;
    /// Same curve traversed backwards: gamma(-t).
    ParamCurve reversed;
    double t0 = 0.0;
    Point x;
    /// Chart (s1, s2) -> x for graph cases, empty otherwise.
    std::optional<Chart> chart;
    double s1 = 0.0, s2 = 0.0;
};
SurfaceCase random_surface_case(Sampler& s, bool need_graph_chart = false, double min_omega = 0.0);

}  // namespace gen

}  // namespace heis
