// Serial vs OpenMP timing of the Gauss-Bonnet integrals on the shipped scenes.
// Usage: heis_bench [scenes-dir] [repeats]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "heis/gauss_bonnet.hpp"
#include "heis/scene_file.hpp"

using namespace heis;

namespace {

double best_of(int repeats, const std::function<double()>& run, double& value) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        value = run();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "scenes";
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-16s %-11s %-10s %12s %12s %8s %s\n", "scene", "kind", "mode", "serial [s]", "parallel [s]",
                "speedup", "identical");

    QuadTolerance tight;
    tight.abs = 1e-11;
    tight.rel = 1e-11;
    bool all_identical = true;
    for (const char* name : {"plane-disk", "paraboloid-cap", "cylinder-band"}) {
        const Scene scene = load_scene(dir + "/" + name + ".scene");
        struct Case {
            const char* mode;
            ConnectionKind kind;
        };
        for (const Case c : {Case{"limit", ConnectionKind::SvK1}, Case{"finite-L", ConnectionKind::LeviCivita}}) {
            auto run = [&](Execution e) {
                GBOptions o;
                o.execution = e;
                o.tolerance = tight;
                o.orientation = OrientationMode::AsAuthored;
                const GBReport r = std::string(c.mode) == "limit" ? gb_residual_limit(c.kind, scene, std::nullopt, o)
                                                                  : gb_check_finite_L(c.kind, 1.0, scene, o);
                return r.residual;
            };
            double vs = 0, vp = 0;
            const double ts = best_of(repeats, [&] { return run(Execution::Serial); }, vs);
            const double tp = best_of(repeats, [&] { return run(Execution::Parallel); }, vp);
            const bool same = vs == vp;
            all_identical = all_identical && same;
            std::printf("%-16s %-11s %-10s %12.4f %12.4f %8.2f %s\n", name, std::string(to_string(c.kind)).c_str(),
                        c.mode, ts, tp, ts / tp, same ? "yes" : "NO");
        }
    }
    return all_identical ? 0 : 1;
}
