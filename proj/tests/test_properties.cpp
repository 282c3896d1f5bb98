// The seeded property suite, across several seeds.
#include <doctest.h>

#include "heis/verify.hpp"

using namespace heis;

TEST_CASE("property suite passes on several seeds") {
    for (std::uint64_t seed : {1u, 7u, 42u, 2024u}) {
        VerifyOptions o;
        o.seed = seed;
        o.samples = 100;
        const VerifyReport r = run_verify(o);
        for (const auto& p : r.properties) {
            INFO(p.name, " seed ", seed, ": worst ", p.worst, " tol ", p.tolerance, " ", p.detail);
            CHECK(p.passed);
        }
    }
}

TEST_CASE("suite is deterministic for a seed") {
    VerifyOptions o;
    o.samples = 30;
    const auto a = run_verify(o), b = run_verify(o);
    REQUIRE(a.properties.size() == b.properties.size());
    for (std::size_t i = 0; i < a.properties.size(); ++i) CHECK(a.properties[i].worst == b.properties[i].worst);
}

TEST_CASE("corrupted table is caught") {
    VerifyOptions o;
    o.samples = 20;
    o.corrupt_table = [](CoeffTable& t) { t.gamma[2][0].a3 += 1e-3; };
    const auto r = verify_connections(o);
    bool failed = false;
    for (const auto& p : r)
        if (p.name == "connections.metric-compatibility") failed = !p.passed;
    CHECK(failed);
}

TEST_CASE("decay exponent fit") {
    std::vector<double> Ls{1e2, 1e3, 1e4}, devs{3e-2, 3e-3, 3e-4};
    CHECK(fit_decay_exponent(Ls, devs) == doctest::Approx(1.0));
}
