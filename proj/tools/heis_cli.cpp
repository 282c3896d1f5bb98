// heis: curvature quantities on the Heisenberg group from the command line.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heis/commands.hpp"
#include "heis/error.hpp"
#include "heis/scene_file.hpp"

namespace {

using namespace heis;

void emit(const Report& r, const std::string& format) {
    if (format == "csv")
        std::cout << r.to_csv();
    else if (format == "table")
        std::cout << r.to_table();
    else
        std::cout << r.to_json().dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature, Gauss-Bonnet and L -> infinity checks for the Heisenberg group"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();

    std::string kind = "svk1";
    auto add_kind = [&](CLI::App* sub) {
        sub->add_option("--kind", kind, "levi-civita | svk1 | svk2 | adapted")->capture_default_str();
    };

    // curve
    auto* curve = app.add_subcommand("curve", "curvature of an ambient curve, finite L or the limit");
    add_kind(curve);
    std::string gamma, gamma_file, tgrid = "0";
    std::optional<double> L, eps_h;
    bool limit = false;
    auto* g_opt = curve->add_option("--gamma", gamma, "components in t, e.g. \"cos(t),sin(t),0\"");
    curve->add_option("--file", gamma_file, "file holding the three components")->excludes(g_opt);
    curve->add_option("--t", tgrid, "a:b:n, a list, or one value")->capture_default_str();
    curve->add_option("--L", L, "metric parameter");
    curve->add_flag("--limit", limit, "L -> infinity");
    curve->add_option("--eps-h", eps_h, "horizontality threshold (default 1e-9 (1 + |gamma'|))");

    // surface
    auto* surface = app.add_subcommand("surface", "second fundamental form, mean and Gauss curvature");
    add_kind(surface);
    std::string scene_path, u;
    std::vector<std::string> points;
    std::optional<int> grid;
    bool serial = false;
    auto* sc_opt = surface->add_option("--scene", scene_path, "scene file");
    surface->add_option("--u", u, "defining function in x1, x2, x3")->excludes(sc_opt);
    surface->add_option("--point", points, "x1,x2,x3 (repeatable)")->allow_extra_args(false);
    surface->add_option("--grid", grid, "n x n grid over the scene chart");
    surface->add_option("--L", L, "metric parameter");
    surface->add_flag("--limit", limit, "L -> infinity");
    surface->add_flag("--serial", serial, "evaluate the grid on one thread");

    // gauss-bonnet
    auto* gb = app.add_subcommand("gauss-bonnet", "Gauss-Bonnet residual over a scene");
    add_kind(gb);
    std::string mode = "limit", orientation;
    std::vector<double> Ls;
    std::optional<double> rho, abs_tol, rel_tol;
    double tolerance = 1e-6;
    gb->add_option("--scene", scene_path, "scene file")->required();
    gb->add_option("--mode", mode, "limit | finite-L")->capture_default_str();
    gb->add_option("--L", Ls, "finite-L values (default: the scene's L_grid)");
    gb->add_option("--rho", rho, "excision radius (default: the scene's rho_excise)");
    gb->add_option("--orientation", orientation, "auto | as-authored | flip");
    gb->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
    gb->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    gb->add_option("--tolerance", tolerance, "asserted residual bound (exit 4 above it)")->capture_default_str();
    gb->add_flag("--serial", serial, "serial quadrature");

    // verify
    auto* verify = app.add_subcommand("verify", "seeded property suite");
    std::uint64_t seed = 42;
    std::size_t samples = 100;
    bool corrupt = false;
    verify->add_option("--seed", seed)->capture_default_str();
    verify->add_option("--samples", samples)->capture_default_str();
    verify->add_flag("--corrupt-table", corrupt)->group("");

    // limit-scan
    auto* scan = app.add_subcommand("limit-scan", "sweep L over a log grid and fit the decay exponent");
    add_kind(scan);
    LimitScanArgs la;
    bool unsigned_k = false;
    scan->add_option("--quantity", la.quantity, "curve-curvature | geodesic-curvature | mean-curvature | gauss-curvature")
        ->capture_default_str();
    scan->add_option("--gamma", la.gamma, "curve components in t");
    scan->add_option("--t", la.t, "curve parameter")->capture_default_str();
    scan->add_option("--u", la.u, "defining function in x1, x2, x3");
    scan->add_option("--point", la.point, "x1,x2,x3");
    scan->add_flag("--unsigned", unsigned_k, "unsigned geodesic curvature");
    scan->add_option("--L-min", la.L_min)->capture_default_str();
    scan->add_option("--L-max", la.L_max)->capture_default_str();
    scan->add_option("--per-decade", la.per_decade)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    const Execution exec = serial ? Execution::Serial : Execution::Parallel;
    CommandResult res;
    Json echo = Json::object();
    std::string command = app.get_subcommands().front()->get_name();
    try {
        const ConnectionKind k = parse_kind(kind);
        if (curve->parsed()) {
            CurveArgs a{k, gamma_file.empty() ? gamma : read_curve_file(gamma_file), tgrid, L, limit, eps_h};
            if (a.gamma.empty()) throw InputError("curve needs --gamma or --file");
            res = cmd_curve(a);
        } else if (surface->parsed()) {
            SurfaceArgs a;
            a.kind = k;
            if (!scene_path.empty()) a.scene = load_scene(scene_path);
            else if (u.empty()) throw InputError("surface needs --scene or --u");
            a.u = u;
            a.points = points;
            a.grid = grid;
            a.L = L;
            a.limit = limit;
            a.execution = exec;
            res = cmd_surface(a);
        } else if (gb->parsed()) {
            GaussBonnetArgs a;
            a.kind = k;
            a.scene = load_scene(scene_path);
            a.mode = mode;
            a.L = Ls;
            a.rho = rho;
            if (!orientation.empty()) a.orientation = parse_orientation(orientation);
            a.abs_tol = abs_tol;
            a.rel_tol = rel_tol;
            a.execution = exec;
            a.tolerance = tolerance;
            res = cmd_gauss_bonnet(a);
        } else if (verify->parsed()) {
            res = cmd_verify({seed, samples, corrupt});
        } else {
            la.kind = k;
            la.is_signed = !unsigned_k;
            res = cmd_limit_scan(la);
        }
    } catch (...) {
        res = error_result(command, echo);
    }
    emit(res.report, format);
    if (res.report.error) std::cerr << "heis: " << res.report.error->type << ": " << res.report.error->message << "\n";
    return res.exit_code;
}
