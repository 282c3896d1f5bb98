// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "heis/error.hpp"
#include "heis/gauss_bonnet.hpp"
#include "heis/scene_file.hpp"
#include "heis/surface.hpp"
#include "heis/surface_curve.hpp"
#include "heis/verify.hpp"

using namespace heis;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    Outcome() { detail.precision(12); }

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

Scene scene(const std::string& name) { return load_scene(std::string(HEIS_SCENES_DIR) + "/" + name + ".scene"); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Checks the named properties of a verify run; appends worst/tolerance for each.
void require_properties(Outcome& o, const VerifyReport& r, const std::vector<std::string>& names) {
    for (const auto& n : names) {
        const PropertyResult* p = r.find(n);
        if (!p) {
            o.require(false, n + " missing");
            continue;
        }
        o.detail << " " << n << "(n=" << p->samples << ", worst=" << p->worst;
        if (!p->detail.empty() && p->detail.starts_with("alpha")) o.detail << ", " << p->detail;
        o.detail << ")";
        o.require(p->passed, n);
    }
}

void limit_gb(Outcome& o, ConnectionKind kind, double interior, double boundary) {
    const auto t0 = std::chrono::steady_clock::now();
    const GBReport r = gb_residual_limit(kind, scene("plane-disk"));
    const double dt = seconds_since(t0);
    o.detail << " interior=" << r.interior << " boundary=" << r.boundary.at(0) << " residual=" << r.residual
             << " time=" << dt << "s";
    o.require(std::abs(r.interior - interior) <= 1e-4, "interior");
    o.require(std::abs(r.boundary.at(0) - boundary) <= 1e-6, "boundary");
    o.require(std::abs(r.residual) <= 1e-6, "residual");
    o.require(dt <= 10.0, "runtime");
}

void criterion_3(Outcome& o) {
    std::size_t checked = 0;
    double worst_value = 0;
    for (const char* name : {"plane-disk", "paraboloid-cap", "cylinder-band"}) {
        const Scene s = scene(name);
        const Box bb = s.domain.bounding_box();
        const int n = 24;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double s1 = bb.a + (bb.b - bb.a) * (i + 0.5) / n, s2 = bb.c + (bb.d - bb.c) * (j + 0.5) / n;
                if (!s.domain.contains(s1, s2)) continue;
                try {
                    const double k = gauss_curvature_limit(ConnectionKind::Adapted, s.u, s.chart.at(s1, s2).pos);
                    worst_value = std::max(worst_value, std::abs(k));
                    ++checked;
                } catch (const CharacteristicPointError&) {
                }
            }
        for (const auto& g : s.boundary)
            for (int i = 0; i < 64; ++i) {
                const double t = g.a + (g.b - g.a) * i / 64;
                const auto r = geodesic_curvature_limit(ConnectionKind::Adapted, OnSurfaceCurve{g, s.u}, t, true);
                worst_value = std::max(worst_value, std::abs(r.value));
                ++checked;
            }
        const GBReport r = gb_residual_limit(ConnectionKind::Adapted, s);
        std::size_t nodes = r.interior_nodes;
        for (auto b : r.boundary_nodes) nodes += b;
        o.detail << " " << name << ": residual=" << r.residual << " (bound " << 1e-14 * nodes << ")";
        o.require(std::abs(r.residual) <= 1e-14 * static_cast<double>(nodes), std::string(name) + " residual");
    }
    o.detail << " pointwise samples=" << checked << " max|value|=" << worst_value;
    o.require(worst_value == 0.0, "pointwise zero");
}

void criterion_4(Outcome& o) {
    for (const char* name : {"plane-disk", "paraboloid-cap"}) {
        const auto t0 = std::chrono::steady_clock::now();
        const Scene s = scene(name);
        double worst = 0;
        for (double L : {0.25, 1.0, 4.0}) {
            const GBReport r = gb_check_finite_L(ConnectionKind::LeviCivita, L, s);
            worst = std::max(worst, std::abs(r.residual));
            o.require(std::abs(r.target - 2 * pi) <= 1e-15, std::string(name) + " target");
        }
        const double dt = seconds_since(t0);
        o.detail << " " << name << ": max|residual|=" << worst << " time=" << dt << "s";
        o.require(worst <= 1e-6, std::string(name) + " residual");
        o.require(dt <= 30.0, std::string(name) + " runtime");
    }
}

}  // namespace

int main() {
    VerifyOptions vo;
    vo.seed = 42;
    vo.samples = 100;
    const VerifyReport suite = run_verify(vo);

    struct Criterion {
        int id;
        const char* title;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "plane-disk limit Gauss-Bonnet, svk1",
         [](Outcome& o) { limit_gb(o, ConnectionKind::SvK1, -pi, pi); }},
        {2, "plane-disk limit Gauss-Bonnet, svk2",
         [](Outcome& o) { limit_gb(o, ConnectionKind::SvK2, -pi / 2, pi / 2); }},
        {3, "adapted connection vanishes on shipped scenes", criterion_3},
        {4, "classical Gauss-Bonnet at finite L (levi-civita)", criterion_4},
        {5, "two-path equivalence",
         [&](Outcome& o) { require_properties(o, suite, {"curves.two-path", "surfaces.two-path", "surface-curves.two-path"}); }},
        {6, "limit consistency at L = 1e8",
         [&](Outcome& o) {
             require_properties(o, suite,
                                {"curves.limit-consistency", "surface-curves.limit-consistency",
                                 "surfaces.mean-limit-consistency", "surfaces.gauss-limit-consistency",
                                 "surfaces.gauss-limit-rate"});
         }},
        {7, "metric connections and curvature tensors",
         [&](Outcome& o) {
             require_properties(o, suite,
                                {"connections.metric-compatibility", "connections.curvature-antisymmetry",
                                 "connections.svk1-curvature-table", "connections.svk2-adapted-flat",
                                 "surfaces.svk1-sectional"});
         }},
        {8, "jet correctness",
         [&](Outcome& o) { require_properties(o, suite, {"expr.jet-gradient", "expr.jet-hessian", "expr.product-rule"}); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s %d %s:%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str());
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
