#include <doctest.h>

#include <cmath>

#include "heis/curve.hpp"
#include "heis/error.hpp"

using namespace heis;
using doctest::Approx;

namespace {
CurveJet at(const char* g, double t) { return ParamCurve::parse_list(g).at(t); }
}

TEST_CASE("svk1 circle: both paths agree and approach 1") {
    const CurveJet c = at("cos(t),sin(t),0", 0.0);
    const double k = curve_curvature_L(ConnectionKind::SvK1, 100.0, c);
    const auto cf = curve_curvature_closed_form(ConnectionKind::SvK1, 100.0, c);
    REQUIRE(cf.has_value());
    CHECK(std::abs(k - *cf) <= 1e-12 * k);
    CHECK(std::abs(curve_curvature_L(ConnectionKind::SvK1, 1e8, c) - 1.0) < 1e-6);
}

TEST_CASE("straight horizontal line has zero curvature") {
    const CurveJet c = at("t,0,0", 0.3);
    for (double L : {0.5, 100.0, 1e6}) {
        CHECK(curve_curvature_L(ConnectionKind::Adapted, L, c) == 0.0);
        CHECK(curve_curvature_L(ConnectionKind::SvK2, L, c) == 0.0);
    }
}

TEST_CASE("limit trichotomy") {
    auto lim = [](ConnectionKind k, const char* g, double t) { return curve_curvature_limit(k, at(g, t)); };
    for (double t : {0.0, 1.0, 4.0}) {
        const auto r = lim(ConnectionKind::SvK1, "cos(t),sin(t),0", t);
        CHECK(r.branch == CurveBranch::NonHorizontal);
        CHECK(r.value == Approx(1.0));
    }
    const auto hf = lim(ConnectionKind::SvK1, "t,t^2/2,0", 0.0);
    CHECK(hf.branch == CurveBranch::HorizontalFinite);
    CHECK(hf.value == Approx(1.0));
    const auto hd = lim(ConnectionKind::SvK1, "t,0,t^2/2", 0.0);
    CHECK(hd.branch == CurveBranch::HorizontalDivergent);
    CHECK(hd.value == Approx(1.0));
    const auto ad = lim(ConnectionKind::Adapted, "cos(t),sin(t),0", 0.5);
    CHECK(ad.branch == CurveBranch::NonHorizontal);
    CHECK(ad.value == 0.0);
    const auto s2 = lim(ConnectionKind::SvK2, "t,0,t^2/2", 0.0);
    CHECK(s2.branch == CurveBranch::HorizontalDivergent);
    CHECK(s2.discriminator == 1.0);
}

TEST_CASE("horizontal-finite displays for svk1 and adapted coincide") {
    for (const char* g : {"t,t^2/2,0", "sin(t),t^3+t,0", "cos(t),2*sin(t),0"}) {
        const CurveJet c = at(g, 0.0);
        const auto a = curve_curvature_limit(ConnectionKind::SvK1, c);
        const auto b = curve_curvature_limit(ConnectionKind::Adapted, c);
        if (a.branch == CurveBranch::HorizontalFinite && b.branch == CurveBranch::HorizontalFinite)
            CHECK(a.value == b.value);
    }
}

TEST_CASE("divergent coefficient matches k^L / sqrt(L)") {
    const CurveJet c = at("t,0,t^2/2", 0.0);
    const double L = 1e8;
    CHECK(std::abs(curve_curvature_L(ConnectionKind::SvK1, L, c) / std::sqrt(L) - 1.0) < 1e-3);
}

TEST_CASE("marginal classification is flagged") {
    // w(gamma') = 1e-7 sits inside [eps_h, 1e3 eps_h].
    const auto r = curve_curvature_limit(ConnectionKind::SvK1, at("cos(t),sin(t),t*(0.5+1e-7)", 0.0));
    CHECK(r.branch == CurveBranch::NonHorizontal);
    CHECK(r.marginal);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS((void)curve_curvature_L(ConnectionKind::SvK1, 1.0, at("0,0,0", 0.0)), NonRegularCurveError);
    CHECK_THROWS_AS((void)curve_curvature_limit(ConnectionKind::LeviCivita, at("t,0,0", 0.0)), UnsupportedKindError);
}
