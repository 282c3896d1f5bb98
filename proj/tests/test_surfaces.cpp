#include <doctest.h>

#include <cmath>

#include "heis/error.hpp"
#include "heis/surface.hpp"

using namespace heis;
using doctest::Approx;

TEST_CASE("plane frame at (1,0,0)") {
    for (double L : {0.5, 4.0, 1e6}) {
        const SurfaceFrame f = surface_frame(parse("x3"), {1, 0, 0}, L);
        CHECK(f.p == 0.0);
        CHECK(f.q == 0.5);
        CHECK(f.l == 0.5);
        CHECK(f.r == Approx(1 / std::sqrt(L)));
        CHECK(f.p_bar == 0.0);
        CHECK(f.q_bar == 1.0);
        CHECK(f.e1.a1 == 1.0);
        CHECK(f.e1.a2 == 0.0);
        CHECK(f.e1.a3 == 0.0);
        CHECK(f.e2.a3 == Approx(-(f.l / f.l_L) / std::sqrt(L)));

        const SurfaceFrame g = surface_frame(parse("x3 - 1"), {1, 0, 1}, L);
        CHECK(g.e2.a3 == f.e2.a3);
        CHECK(g.v_L.a1 == f.v_L.a1);
        CHECK(g.v_L.a3 == f.v_L.a3);
    }
}

TEST_CASE("characteristic and off-surface points") {
    CHECK_THROWS_AS((void)surface_frame(parse("x3"), {0, 0, 0}, 1.0), CharacteristicPointError);
    CHECK_THROWS_AS((void)surface_frame(parse("x3"), {1, 0, 0.1}, 1.0), SceneError);
}

TEST_CASE("characteristic error fires exactly at the threshold") {
    // On u = x3, l = rho/2 and |grad u| = 1, so the threshold is rho = 4e-8.
    const Expr u = parse("x3");
    CHECK_NOTHROW((void)surface_frame(u, {5e-8, 0, 0}, 1.0));
    CHECK_THROWS_AS((void)surface_frame(u, {3e-8, 0, 0}, 1.0), CharacteristicPointError);
}

TEST_CASE("svk1 h11 vanishes on the plane") {
    CHECK(std::abs(second_fundamental_form(ConnectionKind::SvK1, 4.0, parse("x3"), {1, 0, 0})[0][0]) < 1e-14);
}

TEST_CASE("svk1 and adapted h11 agree on the paraboloid") {
    const Expr u = parse("x3 - (x1^2+x2^2)/2");
    for (auto [x1, x2] : {std::pair{1.0, 0.0}, {0.3, -0.8}, {-0.5, 0.5}}) {
        const Point p{x1, x2, (x1 * x1 + x2 * x2) / 2};
        const double a = second_fundamental_form(ConnectionKind::SvK1, 3.0, u, p)[0][0];
        const double b = second_fundamental_form(ConnectionKind::Adapted, 3.0, u, p)[0][0];
        CHECK(a == Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("levi-civita offsets from svk1") {
    const Expr u = parse("x3 - (x1^2+x2^2)/2");
    const Point p{0.4, 0.7, (0.16 + 0.49) / 2};
    const double L = 9.0;
    const Matrix2 lc = second_fundamental_form(ConnectionKind::LeviCivita, L, u, p);
    const Matrix2 s1 = second_fundamental_form(ConnectionKind::SvK1, L, u, p);
    const double rL = surface_frame(u, p, L).r_bar_L;
    CHECK(s1[0][0] - lc[0][0] == Approx(0.0).epsilon(1e-12));
    CHECK(s1[0][1] - lc[0][1] == Approx(std::sqrt(L) / 2));
    CHECK(s1[1][0] - lc[1][0] == Approx(-std::sqrt(L) / 2 * rL * rL));
    CHECK(s1[1][1] - lc[1][1] == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mean curvature limits") {
    const Expr plane = parse("x3");
    for (auto k : {ConnectionKind::SvK1, ConnectionKind::SvK2, ConnectionKind::Adapted})
        CHECK(std::abs(mean_curvature_limit(k, plane, {0.3, 0.9, 0})) < 1e-14);
    const Expr par = parse("x3 - (x1^2+x2^2)/2");
    const Point p{1, 0, 0.5};
    const double h = mean_curvature_limit(ConnectionKind::SvK1, par, p);
    CHECK(h == mean_curvature_limit(ConnectionKind::SvK2, par, p));
    CHECK(h == mean_curvature_limit(ConnectionKind::Adapted, par, p));
    CHECK(std::abs(mean_curvature_L(ConnectionKind::SvK1, 1e8, par, p) - h) <= 1e-3 * (1 + std::abs(h)));
}

TEST_CASE("ambient sectional terms") {
    const Expr u = parse("x3 - x1*x2");
    const Point p{0.7, -0.2, -0.14};
    for (double L : {0.3, 2.0, 40.0}) {
        const auto s1 = gauss_curvature_L(ConnectionKind::SvK1, L, u, p);
        const double rL = surface_frame(u, p, L).r_bar_L;
        CHECK(s1.K_amb == Approx(-L / 2 * rL * rL).epsilon(1e-14));
        CHECK(s1.K_surf == s1.K_amb + det(s1.II));
        CHECK(s1.H_L == trace(s1.II));
        CHECK(gauss_curvature_L(ConnectionKind::SvK2, L, u, p).K_amb == 0.0);
        CHECK(gauss_curvature_L(ConnectionKind::Adapted, L, u, p).K_amb == 0.0);
    }
}

TEST_CASE("gauss curvature limits on the plane") {
    const Expr u = parse("x3");
    CHECK(std::abs(gauss_curvature_L(ConnectionKind::SvK1, 1e8, u, {1, 0, 0}).K_surf + 1) < 1e-3);
    for (double rho : {0.5, 1.0, 2.0, 3.0}) {
        const double th = 0.4;
        const Point p{rho * std::cos(th), rho * std::sin(th), 0};
        CHECK(gauss_curvature_limit(ConnectionKind::SvK1, u, p) == Approx(-1 / (rho * rho)));
        CHECK(gauss_curvature_limit(ConnectionKind::SvK2, u, p) ==
              Approx(-std::cos(th) * std::cos(th) / (rho * rho)));
        CHECK(gauss_curvature_limit(ConnectionKind::Adapted, u, p) == 0.0);
    }
    CHECK(gauss_curvature_limit(ConnectionKind::SvK2, u, {1, 0, 0}) == Approx(-1.0));
    CHECK_THROWS_AS((void)gauss_curvature_limit(ConnectionKind::LeviCivita, u, {1, 0, 0}), UnsupportedKindError);
}

TEST_CASE("svk1 limit blows up like rho^-2 toward the characteristic point") {
    const Expr u = parse("x3");
    const double r1 = 1e-3, r2 = 1e-5;
    const double k1 = gauss_curvature_limit(ConnectionKind::SvK1, u, {r1, 0, 0});
    const double k2 = gauss_curvature_limit(ConnectionKind::SvK1, u, {r2, 0, 0});
    const double slope = std::log(std::abs(k2) / std::abs(k1)) / std::log(r2 / r1);
    CHECK(std::abs(slope + 2) <= 0.05);
}

TEST_CASE("closed-form tables match the definition") {
    const Expr u = parse("x3 - (x1^2+x2^2)/2 + x1*x2/3");
    const Point p{0.6, -0.3, 0.225 + 0.06};
    for (auto k : {ConnectionKind::SvK1, ConnectionKind::SvK2, ConnectionKind::Adapted})
        for (double L : {0.5, 3.0, 1e4}) {
            const SurfaceLocal loc(u, p);
            const Matrix2 def = loc.second_fundamental_form(coeff_table(k, L));
            const auto cf = loc.second_fundamental_form_closed_form(k, L);
            REQUIRE(cf.has_value());
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(std::abs(def[i][j] - (*cf)[i][j]) <= 1e-9 * std::max(1.0, std::abs(def[i][j])));
        }
}
