#pragma once
// Heisenberg group: left-invariant frame X1 = d1 - (x2/2) d3, X2 = d2 + (x1/2) d3,
// X3 = d3, the contact form w = dx3 + (x2 dx1 - x1 dx2)/2 and the metric
// family g_L making {X1, X2, L^{-1/2} X3} orthonormal.
//
// Tangent vectors cross module boundaries as FrameVector (coefficients on
// X1, X2, X3); coordinate vectors are converted once, at ingestion.

#include <array>
#include <cmath>

#include "heis/expr.hpp"
#include "heis/jet.hpp"

namespace heis {

using Vec3 = std::array<double, 3>;

struct Point {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    Vec3 coords() const noexcept { return {x1, x2, x3}; }
    static Point from(const Vec3& v) noexcept { return {v[0], v[1], v[2]}; }
};

struct FrameVector {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;

    double operator[](std::size_t i) const noexcept { return i == 0 ? a1 : (i == 1 ? a2 : a3); }
    double& operator[](std::size_t i) noexcept { return i == 0 ? a1 : (i == 1 ? a2 : a3); }

    friend FrameVector operator+(FrameVector a, const FrameVector& b) noexcept {
        a.a1 += b.a1; a.a2 += b.a2; a.a3 += b.a3;
        return a;
    }
    friend FrameVector operator-(FrameVector a, const FrameVector& b) noexcept {
        a.a1 -= b.a1; a.a2 -= b.a2; a.a3 -= b.a3;
        return a;
    }
    friend FrameVector operator*(double c, FrameVector a) noexcept {
        a.a1 *= c; a.a2 *= c; a.a3 *= c;
        return a;
    }
    friend FrameVector operator-(FrameVector a) noexcept { return -1.0 * a; }
    friend bool operator==(const FrameVector&, const FrameVector&) = default;
};

/// Positive metric parameter L.
class MetricParam {
public:
    explicit MetricParam(double L);
    double value() const noexcept { return L_; }
    double sqrt() const noexcept { return std::sqrt(L_); }

private:
    double L_;
};

/// w(v) at p.
constexpr double omega(const Point& p, const Vec3& v) noexcept {
    return v[2] + 0.5 * (p.x2 * v[0] - p.x1 * v[1]);
}

constexpr FrameVector frame_from_coordinate(const Point& p, const Vec3& v) noexcept {
    return {v[0], v[1], omega(p, v)};
}

/// Coordinate components of a frame vector at p.
constexpr Vec3 coordinate_from_frame(const Point& p, const FrameVector& f) noexcept {
    return {f.a1, f.a2, f.a3 - 0.5 * (p.x2 * f.a1 - p.x1 * f.a2)};
}

/// d/dt w(gamma'(t)); the gamma'-cross terms cancel.
constexpr double omega_dot(const CurveJet& c) noexcept {
    return c.acc[2] + 0.5 * (c.pos[1] * c.acc[0] - c.pos[0] * c.acc[1]);
}

inline double inner_L(double L, const FrameVector& u, const FrameVector& v) noexcept {
    return u.a1 * v.a1 + u.a2 * v.a2 + L * u.a3 * v.a3;
}

inline double norm_L(double L, const FrameVector& v) noexcept { return std::sqrt(inner_L(L, v, v)); }

/// Velocity (gamma1', gamma2', w(gamma')) and its t-derivative (gamma1'', gamma2'', w').
struct FrameVelocity {
    FrameVector value;
    FrameVector rate;
};

inline FrameVelocity frame_velocity(const CurveJet& c) noexcept {
    const Point p = Point::from(c.pos);
    return {frame_from_coordinate(p, c.vel), {c.acc[0], c.acc[1], omega_dot(c)}};
}

/// X1 f, X2 f, X3 f from a coordinate gradient at p.
constexpr Vec3 frame_derivatives(const Point& p, const Vec3& grad) noexcept {
    return {grad[0] - 0.5 * p.x2 * grad[2], grad[1] + 0.5 * p.x1 * grad[2], grad[2]};
}

inline Vec3 frame_derivatives(const Point& p, const Jet1& f) noexcept { return frame_derivatives(p, f.d); }

}  // namespace heis
