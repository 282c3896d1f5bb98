#pragma once
// Adaptive Gauss-Kronrod (7/15) quadrature in 1D and a tensor-product quadtree
// version in 2D. Cells are refined level by level; every cell is an independent
// work item, so the OpenMP path and the serial reference produce identical sums.

#include <cstddef>
#include <functional>
#include <span>

namespace heis {

enum class Execution { Serial, Parallel };

struct QuadTolerance {
    double abs = 1e-8;
    double rel = 1e-8;
    std::size_t max_cells = std::size_t{1} << 20;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t cells = 0;
    bool converged = false;
};

struct Box {
    double a, b;  // first variable
    double c, d;  // second variable
};

/// Pairwise (cascade) summation; fixed association order for a given length.
double pairwise_sum(std::span<const double> xs) noexcept;

namespace gk15 {
inline constexpr int kNodes = 8;  // non-negative abscissae, descending; the last is 0
extern const double xgk[kNodes];
extern const double wgk[kNodes];
extern const double wg[4];  // Gauss weights for xgk[1], xgk[3], xgk[5], xgk[7]
}  // namespace gk15

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b, const QuadTolerance& tol = {},
                        Execution exec = Execution::Parallel, int initial_cells = 8);

QuadResult integrate_2d(const std::function<double(double, double)>& f, const Box& box,
                        const QuadTolerance& tol = {}, Execution exec = Execution::Parallel, int initial_split = 4);

}  // namespace heis
