#include <doctest.h>

#include <cmath>

#include "heis/error.hpp"
#include "heis/surface_curve.hpp"

using namespace heis;
using doctest::Approx;

namespace {
OnSurfaceCurve on_plane(const char* g) { return {ParamCurve::parse_list(g), parse("x3")}; }
}

TEST_CASE("adapted projected acceleration on the unit circle") {
    const auto onc = on_plane("cos(t),sin(t),0");
    for (double t : {0.0, 0.8, 2.0, 5.5}) {
        const auto pa = projected_acceleration(ConnectionKind::Adapted, 2.0, onc, t);
        CHECK(pa.c1 == Approx(-1.0));
    }
}

TEST_CASE("projected acceleration: expansions vs generic projection") {
    const auto onc = on_plane("cos(t),sin(t),0");
    for (auto k : {ConnectionKind::SvK1, ConnectionKind::SvK2, ConnectionKind::Adapted})
        for (double L : {0.5, 7.0}) {
            const SurfaceCurvePoint s(onc, 0.0);
            const auto g = projected_acceleration(coeff_table(k, L), s);
            const auto e = projected_acceleration_expansion(k, L, s);
            REQUIRE(e.has_value());
            CHECK(std::abs(g.c1 - e->c1) <= 1e-10 * std::max(1.0, std::abs(g.c1)));
            CHECK(std::abs(g.c2 - e->c2) <= 1e-10 * std::max(1.0, std::abs(g.c2)));
        }
}

TEST_CASE("curve leaving the surface is rejected") {
    const auto onc = on_plane("cos(t),sin(t),t");
    CHECK_THROWS_AS((void)projected_acceleration(ConnectionKind::SvK1, 1.0, onc, 0.5), SceneError);
}

TEST_CASE("signed limits on circles of radius R") {
    for (double R : {0.5, 1.0, 2.0}) {
        const std::string g = std::to_string(R) + "*cos(t)," + std::to_string(R) + "*sin(t),0";
        const auto onc = on_plane(g.c_str());
        for (double t : {0.3, 1.7, 4.0}) {
            const auto a = geodesic_curvature_limit(ConnectionKind::SvK1, onc, t, true);
            CHECK(a.branch == CurveBranch::NonHorizontal);
            CHECK(a.value == Approx(1 / R));
            const auto b = geodesic_curvature_limit(ConnectionKind::SvK2, onc, t, true);
            CHECK(b.value == Approx(std::sin(t) * std::sin(t) / R));
            const auto c = geodesic_curvature_limit(ConnectionKind::Adapted, onc, t, true);
            CHECK(c.value == 0.0);
        }
    }
}

TEST_CASE("finite-L signed curvature approaches 1/R") {
    const auto onc = on_plane("cos(t),sin(t),0");
    CHECK(std::abs(geodesic_curvature_L(ConnectionKind::SvK1, 1e6, onc, 0.4, true) - 1.0) < 1e-3);
}

TEST_CASE("flipping the orientation negates the signed value") {
    const auto onc = on_plane("cos(t),sin(t),0");
    const double a = geodesic_curvature_L(ConnectionKind::SvK1, 3.0, onc, 0.4, true);
    const double b = geodesic_curvature_L(ConnectionKind::SvK1, 3.0, onc, 0.4, true, Orientation::Flipped);
    CHECK(a == -b);
    const double u = geodesic_curvature_L(ConnectionKind::SvK1, 3.0, onc, 0.4, false);
    CHECK(u >= std::abs(a) - 1e-12);
}

TEST_CASE("reversing the curve flips the signed limit, keeps the unsigned one") {
    const auto fwd = on_plane("cos(t),sin(t),0");
    const auto rev = on_plane("cos(-t),sin(-t),0");
    for (auto k : {ConnectionKind::SvK1, ConnectionKind::SvK2})
        for (double t : {0.4, 1.3}) {
            const double s = geodesic_curvature_limit(k, fwd, t, true).value;
            CHECK(geodesic_curvature_limit(k, rev, -t, true).value == Approx(-s));
            CHECK(geodesic_curvature_limit(k, rev, -t, false).value ==
                  Approx(geodesic_curvature_limit(k, fwd, t, false).value));
        }
}

TEST_CASE("levi-civita limit is unsupported") {
    CHECK_THROWS_AS((void)geodesic_curvature_limit(ConnectionKind::LeviCivita, on_plane("cos(t),sin(t),0"), 0.0, true),
                    UnsupportedKindError);
}
