#include <doctest.h>

#include <cmath>

#include "heis/curve.hpp"
#include "heis/group.hpp"

using namespace heis;

TEST_CASE("frame_from_coordinate") {
    auto f = [](Point p, Vec3 v) { return frame_from_coordinate(p, v); };
    auto eq = [](FrameVector a, FrameVector b) { return a.a1 == b.a1 && a.a2 == b.a2 && a.a3 == b.a3; };
    CHECK(eq(f({0, 0, 0}, {1, 0, 0}), {1, 0, 0}));
    CHECK(eq(f({1, 0, 0}, {0, 1, 0}), {0, 1, -0.5}));
    CHECK(eq(f({0, 1, 0}, {1, 0, 0}), {1, 0, 0.5}));
}

TEST_CASE("coordinate_from_frame inverts") {
    const Point p{0.3, -1.2, 4.0};
    const Vec3 v{0.7, 0.1, -2.0};
    const Vec3 back = coordinate_from_frame(p, frame_from_coordinate(p, v));
    for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-15));
}

TEST_CASE("contact form along curves") {
    const auto line = ParamCurve::parse_list("t,0,0");
    const auto circle = ParamCurve::parse_list("cos(t),sin(t),0");
    const auto tilted = ParamCurve::parse_list("t,0,t^2/2");
    for (double t : {-1.0, 0.0, 0.4, 2.5}) {
        const CurveJet a = line.at(t), b = circle.at(t), c = tilted.at(t);
        CHECK(omega(Point::from(a.pos), a.vel) == 0.0);
        CHECK(omega(Point::from(b.pos), b.vel) == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(omega(Point::from(c.pos), c.vel) == doctest::Approx(t));
        CHECK(omega_dot(b) == doctest::Approx(0.0).epsilon(1e-15));
    }
    CHECK(omega_dot(tilted.at(0.0)) == 1.0);
    CHECK(omega_dot(ParamCurve::parse_list("t,t^2/2,0").at(0.0)) == 0.0);
}

TEST_CASE("metric g_L") {
    CHECK(inner_L(4.0, {0, 0, 1}, {0, 0, 1}) == 4.0);
    CHECK(inner_L(7.0, {1, 0, 0}, {0, 1, 0}) == 0.0);
    CHECK(inner_L(1.0, {1, 1, 1}, {1, 1, 1}) == 3.0);
    for (double L = 1.0; L <= 1e8; L *= 10) CHECK(norm_L(L, {0, 0, 1 / std::sqrt(L)}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("metric parameter must be positive") {
    CHECK_THROWS((void)MetricParam(0.0));
    CHECK_THROWS((void)MetricParam(-1.0));
    CHECK(MetricParam(9.0).sqrt() == 3.0);
}
