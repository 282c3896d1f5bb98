#pragma once
// Forward-mode jets over three independent variables.
//
// Jet2 carries a value, its gradient and its (symmetric) Hessian; Jet1 drops
// the Hessian. Both are closed under the arithmetic and elementary functions
// the expression evaluator needs. Curve evaluation reuses slot 0 for t.

#include <array>
#include <cmath>
#include <cstddef>

namespace heis {

inline constexpr std::size_t kJetVars = 3;

/// Index of (i,j) in the packed upper triangle {00,01,02,11,12,22}.
constexpr std::size_t sym_index(std::size_t i, std::size_t j) noexcept {
    if (i > j) { const std::size_t k = i; i = j; j = k; }
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

struct Jet2 {
    double v = 0.0;
    std::array<double, 3> d{};
    std::array<double, 6> h{};

    static Jet2 constant(double c) noexcept { Jet2 r; r.v = c; return r; }
    static Jet2 variable(double x, std::size_t slot) noexcept {
        Jet2 r; r.v = x; r.d[slot] = 1.0; return r;
    }

    double hess(std::size_t i, std::size_t j) const noexcept { return h[sym_index(i, j)]; }

    /// Applies a scalar function with derivatives f1 = f'(v), f2 = f''(v).
    Jet2 chain(double f0, double f1, double f2) const noexcept {
        Jet2 r;
        r.v = f0;
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = f1 * d[i];
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = i; j < 3; ++j)
                r.h[sym_index(i, j)] = f1 * h[sym_index(i, j)] + f2 * d[i] * d[j];
        return r;
    }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) noexcept {
    Jet2 r;
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.d[i] + b.d[i];
    for (std::size_t k = 0; k < 6; ++k) r.h[k] = a.h[k] + b.h[k];
    return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) noexcept {
    Jet2 r;
    r.v = a.v - b.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.d[i] - b.d[i];
    for (std::size_t k = 0; k < 6; ++k) r.h[k] = a.h[k] - b.h[k];
    return r;
}

inline Jet2 operator-(const Jet2& a) noexcept {
    Jet2 r;
    r.v = -a.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = -a.d[i];
    for (std::size_t k = 0; k < 6; ++k) r.h[k] = -a.h[k];
    return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) noexcept {
    Jet2 r;
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.v * b.d[i] + b.v * a.d[i];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            const std::size_t k = sym_index(i, j);
            r.h[k] = a.v * b.h[k] + b.v * a.h[k] + a.d[i] * b.d[j] + a.d[j] * b.d[i];
        }
    return r;
}

inline Jet2 operator*(double c, const Jet2& a) noexcept {
    Jet2 r;
    r.v = c * a.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = c * a.d[i];
    for (std::size_t k = 0; k < 6; ++k) r.h[k] = c * a.h[k];
    return r;
}

/// Caller guarantees b.v != 0.
inline Jet2 reciprocal(const Jet2& b) noexcept {
    const double inv = 1.0 / b.v;
    return b.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) noexcept { return a * reciprocal(b); }

/// First-order jet: value and gradient over the same three slots.
struct Jet1 {
    double v = 0.0;
    std::array<double, 3> d{};

    static Jet1 constant(double c) noexcept { Jet1 r; r.v = c; return r; }

    Jet1 chain(double f0, double f1) const noexcept {
        Jet1 r;
        r.v = f0;
        for (std::size_t i = 0; i < 3; ++i) r.d[i] = f1 * d[i];
        return r;
    }
};

inline Jet1 operator+(const Jet1& a, const Jet1& b) noexcept {
    Jet1 r; r.v = a.v + b.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
}
inline Jet1 operator-(const Jet1& a, const Jet1& b) noexcept {
    Jet1 r; r.v = a.v - b.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
}
inline Jet1 operator-(const Jet1& a) noexcept {
    Jet1 r; r.v = -a.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = -a.d[i];
    return r;
}
inline Jet1 operator*(const Jet1& a, const Jet1& b) noexcept {
    Jet1 r; r.v = a.v * b.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = a.v * b.d[i] + b.v * a.d[i];
    return r;
}
inline Jet1 operator*(double c, const Jet1& a) noexcept {
    Jet1 r; r.v = c * a.v;
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = c * a.d[i];
    return r;
}
inline Jet1 operator/(const Jet1& a, const Jet1& b) noexcept {
    const double inv = 1.0 / b.v;
    return a * b.chain(inv, -inv * inv);
}
inline Jet1 sqrt(const Jet1& a) noexcept {
    const double s = std::sqrt(a.v);
    return a.chain(s, 0.5 / s);
}

/// Gradient of the j-th first partial of a Jet2, as a Jet1 (value d[j], gradient row j of h).
inline Jet1 partial(const Jet2& f, std::size_t j) noexcept {
    Jet1 r;
    r.v = f.d[j];
    for (std::size_t i = 0; i < 3; ++i) r.d[i] = f.hess(j, i);
    return r;
}

inline Jet1 lower(const Jet2& f) noexcept {
    Jet1 r; r.v = f.v; r.d = f.d;
    return r;
}

}  // namespace heis
