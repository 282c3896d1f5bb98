#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heis/error.hpp"
#include "heis/gauss_bonnet.hpp"
#include "heis/scene_file.hpp"

using namespace heis;
using doctest::Approx;
using std::numbers::pi;

namespace {

Scene scene(const char* name) { return load_scene(std::string(HEIS_SCENES_DIR) + "/" + name + ".scene"); }

// Exact integral of x^n over [-1, 1].
double moment(int n) { return n % 2 ? 0.0 : 2.0 / (n + 1); }

double kronrod(int n) {
    double s = gk15::wgk[gk15::kNodes - 1] * (n == 0 ? 1.0 : 0.0);
    for (int i = 0; i < gk15::kNodes - 1; ++i) s += gk15::wgk[i] * 2 * (n % 2 ? 0.0 : std::pow(gk15::xgk[i], n));
    return s;
}

double gauss(int n) {
    double s = gk15::wg[3] * (n == 0 ? 1.0 : 0.0);
    for (int i = 0; i < 3; ++i) s += gk15::wg[i] * 2 * (n % 2 ? 0.0 : std::pow(gk15::xgk[2 * i + 1], n));
    return s;
}

}  // namespace

TEST_CASE("rule constants integrate polynomials exactly") {
    for (int n = 0; n <= 23; ++n) CHECK(kronrod(n) == Approx(moment(n)).epsilon(1e-14));
    for (int n = 0; n <= 13; ++n) CHECK(gauss(n) == Approx(moment(n)).epsilon(1e-14));
    CHECK(gk15::xgk[gk15::kNodes - 1] == 0.0);
}

TEST_CASE("pairwise sum") {
    std::vector<double> xs(1000, 0.1);
    CHECK(pairwise_sum(xs) == Approx(100.0).epsilon(1e-15));
    CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("1d adaptive quadrature") {
    const auto r = integrate_1d([](double x) { return std::exp(x) * std::cos(5 * x); }, 0, 2, {1e-12, 1e-12});
    const double exact = (std::exp(2.0) * (std::cos(10.0) + 5 * std::sin(10.0)) - 1) / 26;
    CHECK(r.converged);
    CHECK(r.value == Approx(exact).epsilon(1e-12));
    const auto s = integrate_1d([](double x) { return std::sqrt(x); }, 0, 1, {1e-10, 1e-10});
    CHECK(s.value == Approx(2.0 / 3).epsilon(1e-9));
}

TEST_CASE("2d adaptive quadrature") {
    const auto r = integrate_2d([](double x, double y) { return std::sin(x) * std::exp(y); }, {0, pi, 0, 1});
    CHECK(r.value == Approx(2 * (std::exp(1.0) - 1)).epsilon(1e-10));
}

TEST_CASE("serial and parallel quadrature are bitwise identical") {
    auto f = [](double x, double y) { return 1 / (0.01 + x * x + y * y); };
    const auto s = integrate_2d(f, {-1, 1, -1, 1}, {1e-10, 1e-10}, Execution::Serial);
    const auto p = integrate_2d(f, {-1, 1, -1, 1}, {1e-10, 1e-10}, Execution::Parallel);
    CHECK(s.value == p.value);
    CHECK(s.error == p.error);
    CHECK(s.cells == p.cells);
    auto g = [](double x) { return std::abs(std::sin(30 * x)); };
    CHECK(integrate_1d(g, 0, 3, {}, Execution::Serial).value == integrate_1d(g, 0, 3, {}, Execution::Parallel).value);
}

TEST_CASE("limit length element") {
    for (double R : {0.5, 2.0}) {
        const auto c = ParamCurve::parse_list(std::to_string(R) + "*cos(t)," + std::to_string(R) + "*sin(t),0");
        for (double t : {0.0, 1.0, 3.0}) CHECK(limit_length_element(c, t) == Approx(R * R / 2));
    }
    CHECK(limit_length_element(ParamCurve::parse_list("t,0,0"), 0.4) == 0.0);
    CHECK(limit_length_element(ParamCurve::parse_list("0,0,t"), 0.4) == 1.0);
}

TEST_CASE("limit area element") {
    const Expr u = parse("x3");
    const Chart cart = Chart::parse("s1", "s2", "0");
    const Chart polar = Chart::parse("s1*cos(s2)", "s1*sin(s2)", "0");
    const Chart degenerate = Chart::parse("s1+s2", "s1+s2", "0");
    for (auto [a, b] : {std::pair{0.3, 0.4}, {-1.0, 0.5}, {0.0, 2.0}}) {
        CHECK(std::abs(limit_area_element(u, cart, a, b)) == Approx(std::hypot(a, b) / 2));
        CHECK(limit_area_element(u, degenerate, a, b) == Approx(0.0).epsilon(1e-15));
    }
    CHECK(std::abs(limit_area_element(u, polar, 0.7, 1.1)) == Approx(0.49 / 2));
}

TEST_CASE("scene files") {
    const Scene s = scene("plane-disk");
    CHECK(s.name == "plane-disk");
    CHECK(s.boundary.size() == 1);
    CHECK(s.euler_characteristic == 1);
    CHECK(s.domain.shape == Domain::Shape::Disk);
    CHECK_NOTHROW(validate_scene(s));
    CHECK(scene("cylinder-band").euler_characteristic == 0);

    const char* base = "[surface]\nu = \"x3\"\nchart = \"s1\", \"s2\", \"0\"\ndomain = disk(0, 0, 1)\n";
    const std::string ok = std::string(base) + "[boundary.1]\ngamma = \"cos(t)\", \"sin(t)\", \"0\"\n";
    CHECK_NOTHROW((void)parse_scene(ok));
    CHECK_THROWS_AS((void)parse_scene(base), SceneError);
    CHECK_THROWS_AS((void)parse_scene(ok + "[options]\nrho_excise = 2\n"), SceneError);
    CHECK_THROWS_AS((void)parse_scene(ok + "[options]\nbogus = 1\n"), SceneError);
    CHECK_THROWS_AS((void)parse_scene(ok + "[surface]\n"), SceneError);
    CHECK_THROWS_AS(validate_scene(parse_scene(std::string(base) +
                                               "[boundary.1]\ngamma = \"cos(t)\", \"sin(t)\", \"0.1\"\n")),
                    SceneError);
    CHECK_THROWS_AS((void)load_scene("/nonexistent.scene"), InputError);
    CHECK(split_top_level("\"a, b\", f(1, 2) , c") == std::vector<std::string>{"\"a, b\"", "f(1, 2)", "c"});
}

TEST_CASE("characteristic point location") {
    const auto cps = locate_characteristic_points(scene("paraboloid-cap"));
    REQUIRE(cps.size() == 1);
    CHECK(std::abs(cps[0].s1) < 1e-8);
    CHECK(std::abs(cps[0].s2) < 1e-8);
    CHECK(locate_characteristic_points(scene("cylinder-band")).empty());
}

TEST_CASE("plane disk, limit Gauss-Bonnet") {
    const Scene s = scene("plane-disk");
    const auto a = gb_residual_limit(ConnectionKind::SvK1, s);
    CHECK(a.interior == Approx(-pi).epsilon(1e-10));
    CHECK(a.boundary[0] == Approx(pi).epsilon(1e-12));
    CHECK(std::abs(a.residual) <= 1e-6);
    CHECK(a.orientation == Orientation::AsAuthored);
    CHECK(a.extrapolation.size() == 3);
    const auto b = gb_residual_limit(ConnectionKind::SvK2, s);
    CHECK(b.interior == Approx(-pi / 2).epsilon(1e-10));
    CHECK(b.boundary[0] == Approx(pi / 2).epsilon(1e-12));
    CHECK_THROWS_AS((void)gb_residual_limit(ConnectionKind::LeviCivita, s), UnsupportedKindError);
}

TEST_CASE("excision deficit is affine in rho") {
    // interior(rho) = -pi + pi * rho on the plane disk for svk1.
    const auto r = gb_residual_limit(ConnectionKind::SvK1, scene("plane-disk"));
    REQUIRE(r.extrapolation.size() == 3);
    const auto& e = r.extrapolation;
    const double slope1 = (e[0].interior - e[1].interior) / (e[0].rho - e[1].rho);
    const double slope2 = (e[1].interior - e[2].interior) / (e[1].rho - e[2].rho);
    CHECK(std::abs(slope1 - slope2) * e[0].rho <= 1e-4);
    CHECK(slope1 == Approx(pi).epsilon(1e-6));
}

TEST_CASE("finite-L classical Gauss-Bonnet") {
    for (const char* name : {"plane-disk", "paraboloid-cap"})
        for (double L : {0.25, 1.0, 4.0}) {
            const auto r = gb_check_finite_L(ConnectionKind::LeviCivita, L, scene(name));
            CHECK(r.asserted);
            CHECK(r.target == Approx(2 * pi));
            CHECK(std::abs(r.residual) <= 1e-6);
        }
    CHECK_FALSE(gb_check_finite_L(ConnectionKind::SvK1, 1.0, scene("plane-disk")).asserted);
}

TEST_CASE("orientation autodetect") {
    Scene s = scene("plane-disk");
    CHECK(orientation_autodetect(s) == Orientation::AsAuthored);
    s.boundary[0] = ParamCurve::parse_list("cos(-t),sin(-t),0");
    CHECK(orientation_autodetect(s) == Orientation::Flipped);
    const auto r = gb_residual_limit(ConnectionKind::SvK1, s);
    CHECK(r.orientation == Orientation::Flipped);
    CHECK(r.orientation_autodetected);
    CHECK(std::abs(r.residual) <= 1e-6);
    // A wrong Euler characteristic closes under neither orientation.
    s.euler_characteristic = 3;
    CHECK_THROWS_AS((void)orientation_autodetect(s), OrientationError);
}

TEST_CASE("broken scene reports the surface error, not an orientation") {
    Scene s = scene("plane-disk");
    s.boundary[0] = ParamCurve::parse_list("cos(t),sin(t),0.2");
    CHECK_THROWS_AS((void)orientation_autodetect(s), SceneError);
}

TEST_CASE("residual stability under halved tolerances") {
    const Scene s = scene("paraboloid-cap");
    for (auto k : {ConnectionKind::SvK1, ConnectionKind::SvK2}) {
        GBOptions o;
        const auto a = gb_residual_limit(k, s, std::nullopt, o);
        QuadTolerance t = s.tolerance;
        t.abs /= 2;
        t.rel /= 2;
        o.tolerance = t;
        const auto b = gb_residual_limit(k, s, std::nullopt, o);
        CHECK(std::abs(a.residual - b.residual) <= std::max(a.residual_error, 1e-14));
    }
}

TEST_CASE("gauss-bonnet is deterministic across execution modes") {
    for (const char* name : {"plane-disk", "paraboloid-cap", "cylinder-band"}) {
        const Scene s = scene(name);
        GBOptions ser, par;
        ser.execution = Execution::Serial;
        const auto a = gb_residual_limit(ConnectionKind::SvK1, s, std::nullopt, ser);
        const auto b = gb_residual_limit(ConnectionKind::SvK1, s, std::nullopt, par);
        CHECK(a.interior == b.interior);
        CHECK(a.boundary == b.boundary);
        CHECK(a.residual == b.residual);
        const auto c = gb_check_finite_L(ConnectionKind::LeviCivita, 1.0, s, ser);
        const auto d = gb_check_finite_L(ConnectionKind::LeviCivita, 1.0, s, par);
        CHECK(c.residual == d.residual);
    }
}

TEST_CASE("excised domain integral of 1/rho^2 grows like log") {
    const Scene s = scene("plane-disk");
    auto f = [](double a, double b) { return 1 / (a * a + b * b); };
    const auto r1 = integrate_domain(f, s.domain, std::array{0.0, 0.0}, 1e-2, s.tolerance, Execution::Parallel);
    const auto r2 = integrate_domain(f, s.domain, std::array{0.0, 0.0}, 5e-3, s.tolerance, Execution::Parallel);
    CHECK(r1.value == Approx(-2 * pi * std::log(1e-2)).epsilon(1e-8));
    CHECK(r2.value - r1.value == Approx(2 * pi * std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("rectangle domain with the excision centre inside") {
    const Domain d = Domain::rectangle(-1, 2, -0.5, 1);
    auto one = [](double, double) { return 1.0; };
    const auto r = integrate_domain(one, d, std::array{0.3, 0.1}, 0.05, {}, Execution::Parallel);
    CHECK(r.value == Approx(4.5 - pi * 0.0025).epsilon(1e-10));
    const auto full = integrate_domain(one, d, std::nullopt, 0.0, {}, Execution::Parallel);
    CHECK(full.value == Approx(4.5).epsilon(1e-12));
}
