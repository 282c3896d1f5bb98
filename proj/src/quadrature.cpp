#include "heis/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

namespace heis {

namespace gk15 {
const double xgk[kNodes] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[kNodes] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

double pairwise_sum(std::span<const double> xs) noexcept {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

namespace {

// 15 abscissae on [-1,1] in a fixed order, with Kronrod and Gauss weights (0 where not a Gauss node).
struct Rule {
    double x[15], wk[15], wg[15];
    Rule() {
        int n = 0;
        for (int i = 0; i < gk15::kNodes; ++i) {
            const double g = (i % 2 == 1) ? gk15::wg[i / 2] : 0.0;
            x[n] = -gk15::xgk[i];
            wk[n] = gk15::wgk[i];
            wg[n] = g;
            ++n;
            if (i + 1 < gk15::kNodes) {
                x[n] = gk15::xgk[i];
                wk[n] = gk15::wgk[i];
                wg[n] = g;
                ++n;
            }
        }
    }
};
const Rule& rule() {
    static const Rule r;
    return r;
}

struct CellResult {
    double value = 0.0;
    double error = 0.0;
};

// Runs `eval(i)` for every index, in parallel when requested. The first exception is rethrown.
template <class F>
void for_each_index(std::size_t n, Execution exec, F&& eval) {
    if (exec == Execution::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) eval(i);
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            eval(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(heis_quadrature_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

template <class Cell, class Eval, class Split>
QuadResult refine(std::vector<Cell> cells, const QuadTolerance& tol, Execution exec, std::size_t evals_per_cell,
                  Eval&& eval, Split&& split) {
    std::vector<CellResult> done_results;
    std::vector<Cell> pending = std::move(cells);
    QuadResult out;
    std::vector<double> vals, errs;
    for (;;) {
        std::vector<CellResult> res(pending.size());
        for_each_index(pending.size(), exec, [&](std::size_t i) { res[i] = eval(pending[i]); });
        out.evaluations += pending.size() * evals_per_cell;

        vals.clear();
        errs.clear();
        for (const auto& r : done_results) vals.push_back(r.value), errs.push_back(r.error);
        for (const auto& r : res) vals.push_back(r.value), errs.push_back(r.error);
        out.value = pairwise_sum(vals);
        out.error = pairwise_sum(errs);
        out.cells = vals.size();

        const double target = std::max(tol.abs, tol.rel * std::abs(out.value));
        if (out.error <= target) {
            out.converged = true;
            return out;
        }
        const double per_cell = target / static_cast<double>(vals.size());
        std::vector<Cell> next;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (res[i].error > per_cell) {
                split(pending[i], next);
            } else {
                done_results.push_back(res[i]);
            }
        }
        if (next.empty() || done_results.size() + next.size() > tol.max_cells) {
            out.converged = false;
            return out;
        }
        pending = std::move(next);
    }
}

struct Interval {
    double a, b;
};

struct Cell2 {
    Box box;
};

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b, const QuadTolerance& tol,
                        Execution exec, int initial_cells) {
    if (a == b) return {0.0, 0.0, 0, 0, true};
    const int n0 = std::max(1, initial_cells);
    std::vector<Interval> cells;
    for (int i = 0; i < n0; ++i) {
        cells.push_back({a + (b - a) * i / n0, i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0});
    }
    const Rule& R = rule();
    auto eval = [&](const Interval& iv) {
        const double c = 0.5 * (iv.a + iv.b), h = 0.5 * (iv.b - iv.a);
        double k = 0.0, g = 0.0;
        for (int i = 0; i < 15; ++i) {
            const double y = f(c + h * R.x[i]);
            k += R.wk[i] * y;
            g += R.wg[i] * y;
        }
        return CellResult{k * h, std::abs((k - g) * h)};
    };
    auto split = [](const Interval& iv, std::vector<Interval>& out) {
        const double m = 0.5 * (iv.a + iv.b);
        out.push_back({iv.a, m});
        out.push_back({m, iv.b});
    };
    return refine(std::move(cells), tol, exec, 15, eval, split);
}

QuadResult integrate_2d(const std::function<double(double, double)>& f, const Box& box, const QuadTolerance& tol,
                        Execution exec, int initial_split) {
    if (box.a == box.b || box.c == box.d) return {0.0, 0.0, 0, 0, true};
    const int n0 = std::max(1, initial_split);
    std::vector<Cell2> cells;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n0; ++j) {
            const double a = box.a + (box.b - box.a) * i / n0;
            const double b = i + 1 == n0 ? box.b : box.a + (box.b - box.a) * (i + 1) / n0;
            const double c = box.c + (box.d - box.c) * j / n0;
            const double d = j + 1 == n0 ? box.d : box.c + (box.d - box.c) * (j + 1) / n0;
            cells.push_back({{a, b, c, d}});
        }
    }
    const Rule& R = rule();
    auto eval = [&](const Cell2& cell) {
        const Box& bx = cell.box;
        const double c1 = 0.5 * (bx.a + bx.b), h1 = 0.5 * (bx.b - bx.a);
        const double c2 = 0.5 * (bx.c + bx.d), h2 = 0.5 * (bx.d - bx.c);
        double k = 0.0, g = 0.0;
        for (int i = 0; i < 15; ++i) {
            double rk = 0.0, rg = 0.0;
            const double s1 = c1 + h1 * R.x[i];
            for (int j = 0; j < 15; ++j) {
                const double y = f(s1, c2 + h2 * R.x[j]);
                rk += R.wk[j] * y;
                rg += R.wg[j] * y;
            }
            k += R.wk[i] * rk;
            g += R.wg[i] * rg;
        }
        const double area = h1 * h2;
        return CellResult{k * area, std::abs((k - g) * area)};
    };
    auto split = [](const Cell2& cell, std::vector<Cell2>& out) {
        const Box& bx = cell.box;
        const double m1 = 0.5 * (bx.a + bx.b), m2 = 0.5 * (bx.c + bx.d);
        out.push_back({{bx.a, m1, bx.c, m2}});
        out.push_back({{bx.a, m1, m2, bx.d}});
        out.push_back({{m1, bx.b, bx.c, m2}});
        out.push_back({{m1, bx.b, m2, bx.d}});
    };
    return refine(std::move(cells), tol, exec, 225, eval, split);
}

}  // namespace heis
