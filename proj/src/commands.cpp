#include "heis/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "heis/curve.hpp"
#include "heis/error.hpp"
#include "heis/expr.hpp"
#include "heis/scene_file.hpp"
#include "heis/surface.hpp"
#include "heis/surface_curve.hpp"
#include "heis/verify.hpp"

namespace heis {

namespace {

Json point_json(const std::array<double, 3>& x) { return Json::array({x[0], x[1], x[2]}); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

void require_mode(const std::optional<double>& L, bool limit) {
    if (L.has_value() == limit) throw InputError("give exactly one of --L and --limit");
    if (L && !(*L > 0)) throw InputError("L must be positive");
}

Json scene_json(const Scene& s) {
    Json j;
    j["name"] = s.name;
    j["u"] = s.u.print();
    j["domain"] = s.domain.describe();
    j["boundary_components"] = s.boundary.size();
    j["euler_characteristic"] = s.euler_characteristic;
    return j;
}

}  // namespace

ConnectionKind parse_kind(std::string_view name) {
    if (auto k = kind_from_string(name)) return *k;
    throw InputError("unknown connection kind '" + std::string(name) + "' (levi-civita, svk1, svk2, adapted)");
}

OrientationMode parse_orientation(std::string_view s) {
    if (s == "auto") return OrientationMode::Auto;
    if (s == "as-authored") return OrientationMode::AsAuthored;
    if (s == "flip" || s == "flipped") return OrientationMode::Flipped;
    throw InputError("orientation must be auto, as-authored or flip");
}

std::vector<double> parse_t_grid(std::string_view spec) {
    const std::string s = trim(spec);
    if (s.empty()) throw InputError("empty parameter grid");
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::string part;
        std::istringstream in(s);
        while (std::getline(in, part, ':')) parts.push_back(part);
        if (parts.size() != 3) throw InputError("grid '" + s + "' is not of the form a:b:n");
        const double a = parse_constant(parts[0]);
        const double b = parse_constant(parts[1]);
        const double nd = parse_constant(parts[2]);
        if (!(nd >= 1) || nd != std::floor(nd) || nd > 1e7) throw InputError("grid node count must be a positive integer");
        const auto n = static_cast<std::size_t>(nd);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split_top_level(s)) out.push_back(parse_constant(item));
    return out;
}

Point parse_point(std::string_view spec) {
    const auto items = split_top_level(spec);
    if (items.size() != 3) throw InputError("point '" + std::string(spec) + "' needs three coordinates");
    return {parse_constant(items[0]), parse_constant(items[1]), parse_constant(items[2])};
}

std::string read_curve_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open curve file '" + path + "'");
    std::string line, joined;
    while (std::getline(f, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        if (!joined.empty()) joined += ',';
        joined += line;
    }
    return joined;
}

ErrorRecord classify_current_exception() {
    ErrorRecord e;
    try {
        throw;
    } catch (const UnknownIdentifierError& x) {
        e = {"UnknownIdentifierError", x.what(), kExitInput,
             {{"offset", x.offset()}, {"expected", x.expected()}, {"annotated", x.annotated()}}};
    } catch (const ParseError& x) {
        e = {"ParseError", x.what(), kExitInput,
             {{"offset", x.offset()}, {"expected", x.expected()}, {"annotated", x.annotated()}}};
    } catch (const SceneError& x) {
        e = {"SceneError", x.what(), kExitInput, Json::object()};
    } catch (const UnsupportedKindError& x) {
        e = {"UnsupportedKindError", x.what(), kExitInput, Json::object()};
    } catch (const InputError& x) {
        e = {"InputError", x.what(), kExitInput, Json::object()};
    } catch (const DomainError& x) {
        e = {"DomainError", x.what(), kExitInput,
             {{"subexpression", x.subexpression()}, {"point", point_json(x.point())}}};
    } catch (const CharacteristicPointError& x) {
        e = {"CharacteristicPointError", x.what(), kExitInput,
             {{"l", number_or_null(x.l())}, {"point", point_json(x.point())}}};
    } catch (const NonRegularCurveError& x) {
        e = {"NonRegularCurveError", x.what(), kExitInput, Json::object()};
    } catch (const OrientationError& x) {
        e = {"OrientationError", x.what(), kExitInput, Json::object()};
    } catch (const NumericContractError& x) {
        e = {"NumericContractError", x.what(), kExitNumeric, Json::object()};
    } catch (const NonIntegrableError& x) {
        e = {"NonIntegrableError", x.what(), kExitNumeric, Json::object()};
    } catch (const DegenerateDenominatorError& x) {
        e = {"DegenerateDenominatorError", x.what(), kExitNumeric, Json::object()};
    } catch (const std::exception& x) {
        e = {"InternalError", x.what(), kExitNumeric, Json::object()};
    }
    return e;
}

CommandResult error_result(const std::string& command, Json parameters) {
    CommandResult r;
    r.report.command = command;
    r.report.parameters = std::move(parameters);
    r.report.error = classify_current_exception();
    r.exit_code = r.report.error->exit_code;
    return r;
}

// ---------------------------------------------------------------- curve

CommandResult cmd_curve(const CurveArgs& args) {
    Json params;
    params["kind"] = std::string(to_string(args.kind));
    params["gamma"] = args.gamma;
    params["t"] = args.t;
    if (args.L) params["L"] = *args.L; else params["L"] = nullptr;
    params["limit"] = args.limit;
    if (args.eps_h) params["eps_h"] = *args.eps_h;
    try {
        require_mode(args.L, args.limit);
        const ParamCurve g = ParamCurve::parse_list(args.gamma);
        const auto ts = parse_t_grid(args.t);
        CommandResult res;
        Report& r = res.report;
        r.command = "curve";
        r.parameters = params;
        if (args.limit) {
            r.columns = {"t", "omega", "omega_dot", "branch", "value", "discriminator", "marginal"};
            std::size_t marginal = 0;
            for (double t : ts) {
                const CurveJet c = g.at(t);
                const auto lim = curve_curvature_limit(args.kind, c, args.eps_h);
                if (lim.marginal) {
                    ++marginal;
                    r.warnings.push_back("t = " + format_number(t) + ": |omega| is near the horizontality threshold");
                }
                r.add_row({t, lim.omega, omega_dot(c), std::string(to_string(lim.branch)), lim.value,
                           lim.discriminator, lim.marginal});
            }
            r.summary["marginal_points"] = marginal;
        } else {
            r.columns = {"t", "omega", "omega_dot", "value", "closed_form"};
            double worst = 0.0;
            for (double t : ts) {
                const CurveJet c = g.at(t);
                const double k = curve_curvature_L(args.kind, *args.L, c);
                const auto cf = curve_curvature_closed_form(args.kind, *args.L, c);
                if (cf) worst = std::max(worst, std::abs(k - *cf) / std::max(1.0, std::abs(k)));
                r.add_row({t, omega(Point::from(c.pos), c.vel), omega_dot(c), k, opt_cell(cf)});
            }
            r.summary["two_path_max_rel_deviation"] = worst;
        }
        r.summary["points"] = ts.size();
        return res;
    } catch (...) {
        return error_result("curve", params);
    }
}

// ---------------------------------------------------------------- surface

CommandResult cmd_surface(const SurfaceArgs& args) {
    Json params;
    params["kind"] = std::string(to_string(args.kind));
    if (args.scene) params["scene"] = args.scene->name; else params["u"] = args.u;
    params["points"] = args.points;
    if (args.grid) params["grid"] = *args.grid; else params["grid"] = nullptr;
    if (args.L) params["L"] = *args.L; else params["L"] = nullptr;
    params["limit"] = args.limit;
    try {
        require_mode(args.L, args.limit);
        const Expr u = args.scene ? args.scene->u : parse(args.u);
        if (args.points.empty() == !args.grid.has_value())
            throw InputError("give --point (repeatable) or --grid, not both");

        struct Site {
            std::optional<std::array<double, 2>> s;
            Point x;
        };
        std::vector<Site> sites;
        if (args.grid) {
            if (!args.scene) throw InputError("--grid needs a scene with a chart");
            const int n = *args.grid;
            if (n < 1 || n > 1024) throw InputError("--grid must lie in [1, 1024]");
            const Box bb = args.scene->domain.bounding_box();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double s1 = bb.a + (bb.b - bb.a) * (i + 0.5) / n;
                    const double s2 = bb.c + (bb.d - bb.c) * (j + 0.5) / n;
                    if (!args.scene->domain.contains(s1, s2)) continue;
                    sites.push_back({std::array{s1, s2}, args.scene->chart.at(s1, s2).pos});
                }
        } else {
            for (const auto& p : args.points) sites.push_back({std::nullopt, parse_point(p)});
        }

        // A single requested point reports its failure as the command's error record.
        if (sites.size() == 1 && !args.grid) {
            SurfaceLocal probe(u, sites[0].x);
            (void)probe;
        }

        CommandResult res;
        Report& r = res.report;
        r.command = "surface";
        r.parameters = params;
        const bool lc_limit = args.limit && args.kind == ConnectionKind::LeviCivita;
        if (args.limit)
            r.columns = {"s1", "s2", "x1", "x2", "x3", "status", "l", "H_inf", "K_inf"};
        else
            r.columns = {"s1", "s2", "x1", "x2", "x3", "status", "l", "h11", "h12", "h21", "h22", "H_L", "K_amb", "K_surf"};
        if (lc_limit) r.warnings.push_back("the limit Gauss curvature is not defined for levi-civita; K_inf is null");

        std::vector<std::vector<Cell>> rows(sites.size());
        const CoeffTable table = coeff_table(args.kind, args.L.value_or(1.0));
        const auto n = static_cast<std::ptrdiff_t>(sites.size());
#pragma omp parallel for schedule(dynamic, 8) if (args.execution == Execution::Parallel)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const Site& site = sites[static_cast<std::size_t>(i)];
            std::vector<Cell> row;
            row.push_back(site.s ? Cell((*site.s)[0]) : Cell());
            row.push_back(site.s ? Cell((*site.s)[1]) : Cell());
            row.push_back(site.x.x1);
            row.push_back(site.x.x2);
            row.push_back(site.x.x3);
            try {
                SurfaceLocal loc(u, site.x, SurfaceChecks{!args.grid.has_value()});
                row.push_back(std::string("ok"));
                row.push_back(loc.l());
                if (args.limit) {
                    row.push_back(loc.horizontal_mean_curvature());
                    row.push_back(lc_limit ? Cell() : Cell(loc.gauss_curvature_limit(args.kind)));
                } else {
                    const auto rep = loc.gauss_curvature(table);
                    for (const auto& rr : rep.II)
                        for (double h : rr) row.push_back(h);
                    row.push_back(rep.H_L);
                    row.push_back(rep.K_amb);
                    row.push_back(rep.K_surf);
                }
            } catch (const CharacteristicPointError& e) {
                row.push_back(std::string("characteristic"));
                row.push_back(e.l());
            } catch (const SceneError&) {
                row.push_back(std::string("off-surface"));
            } catch (const Error&) {
                row.push_back(std::string("error"));
            }
            row.resize(r.columns.size());
            rows[static_cast<std::size_t>(i)] = std::move(row);
        }
        std::size_t failed = 0;
        for (auto& row : rows) {
            if (std::get<std::string>(row[5]) != "ok") ++failed;
            r.add_row(std::move(row));
        }
        r.summary["points"] = sites.size();
        r.summary["skipped"] = failed;
        if (failed) r.warnings.push_back(std::to_string(failed) + " point(s) skipped; see the status column");
        return res;
    } catch (...) {
        return error_result("surface", params);
    }
}

// ---------------------------------------------------------------- gauss-bonnet

CommandResult cmd_gauss_bonnet(const GaussBonnetArgs& args) {
    Json params;
    params["kind"] = std::string(to_string(args.kind));
    params["scene"] = scene_json(args.scene);
    params["mode"] = args.mode;
    params["L"] = args.L;
    params["rho"] = args.rho ? Json(*args.rho) : Json(nullptr);
    params["tolerance"] = args.tolerance;
    params["execution"] = args.execution == Execution::Serial ? "serial" : "parallel";
    try {
        if (args.mode != "limit" && args.mode != "finite-L") throw InputError("mode must be limit or finite-L");
        if (args.rho && !(*args.rho > 0 && *args.rho < 1)) throw InputError("rho must lie in (0, 1)");
        GBOptions opts;
        opts.execution = args.execution;
        opts.orientation = args.orientation;
        if (args.abs_tol || args.rel_tol) {
            QuadTolerance tol = args.scene.tolerance;
            if (args.abs_tol) tol.abs = *args.abs_tol;
            if (args.rel_tol) tol.rel = *args.rel_tol;
            if (!(tol.abs > 0) || !(tol.rel >= 0)) throw InputError("quadrature tolerances must be positive");
            opts.tolerance = tol;
        }
        std::vector<GBReport> runs;
        if (args.mode == "limit") {
            if (!args.L.empty()) throw InputError("--L applies to finite-L mode only");
            runs.push_back(gb_residual_limit(args.kind, args.scene, args.rho, opts));
        } else {
            const auto Ls = args.L.empty() ? args.scene.L_grid : args.L;
            for (double L : Ls) {
                if (!(L > 0)) throw InputError("L must be positive");
                runs.push_back(gb_check_finite_L(args.kind, L, args.scene, opts));
            }
        }

        CommandResult res;
        Report& r = res.report;
        r.command = "gauss-bonnet";
        r.parameters = params;
        r.columns = {"L", "quantity", "value", "error"};
        bool passed = true;
        Json jruns = Json::array();
        for (const auto& g : runs) {
            const Cell Lc = g.L ? Cell(*g.L) : Cell();
            r.add_row({Lc, std::string("interior"), g.interior, g.interior_error});
            for (std::size_t i = 0; i < g.boundary.size(); ++i)
                r.add_row({Lc, "boundary." + std::to_string(i + 1), g.boundary[i], g.boundary_error[i]});
            r.add_row({Lc, std::string("target"), g.target, 0.0});
            r.add_row({Lc, std::string("residual"), g.residual, g.residual_error});

            const bool ok = !g.asserted || std::abs(g.residual) <= args.tolerance;
            passed = passed && ok;
            Json j;
            j["L"] = g.L ? Json(*g.L) : Json(nullptr);
            j["orientation"] = std::string(to_string(g.orientation));
            j["orientation_autodetected"] = g.orientation_autodetected;
            j["asserted"] = g.asserted;
            j["passed"] = g.asserted ? Json(ok) : Json(nullptr);
            j["residual"] = g.residual;
            j["residual_error"] = g.residual_error;
            Json cps = Json::array();
            for (const auto& c : g.characteristic_points)
                cps.push_back({{"s1", c.s1}, {"s2", c.s2}, {"x", point_json(c.x.coords())}, {"l", c.l}});
            j["characteristic_points"] = std::move(cps);
            Json ex = Json::array();
            for (const auto& e : g.extrapolation)
                ex.push_back({{"rho", e.rho}, {"interior", e.interior}, {"error", e.error}, {"nodes", e.nodes}});
            j["extrapolation"] = std::move(ex);
            j["excised_area_fraction"] = g.excised_area_fraction;
            j["interior_nodes"] = g.interior_nodes;
            j["boundary_nodes"] = g.boundary_nodes;
            jruns.push_back(std::move(j));
            if (!g.asserted)
                r.warnings.push_back("finite-L residual for " + std::string(to_string(g.kind)) +
                                     " is a diagnostic; it is reported, not asserted");
        }
        r.summary["passed"] = passed;
        r.summary["runs"] = std::move(jruns);
        res.exit_code = passed ? kExitOk : kExitProperty;
        return res;
    } catch (...) {
        return error_result("gauss-bonnet", params);
    }
}

// ---------------------------------------------------------------- verify

CommandResult cmd_verify(const VerifyArgs& args) {
    Json params;
    params["seed"] = args.seed;
    params["samples"] = args.samples;
    if (args.corrupt_table) params["corrupt_table"] = true;
    try {
        if (args.samples < 1 || args.samples > 1000000) throw InputError("--samples must lie in [1, 1e6]");
        VerifyOptions vo;
        vo.seed = args.seed;
        vo.samples = args.samples;
        if (args.corrupt_table) vo.corrupt_table = [](CoeffTable& t) { t.gamma[0][1].a1 += 0.25; };
        const VerifyReport rep = run_verify(vo);

        CommandResult res;
        Report& r = res.report;
        r.command = "verify";
        r.parameters = params;
        r.columns = {"property", "samples", "worst", "tolerance", "passed", "detail"};
        Json failed = Json::array();
        for (const auto& p : rep.properties) {
            r.add_row({p.name, static_cast<std::int64_t>(p.samples), p.worst, p.tolerance, p.passed, p.detail});
            if (!p.passed) failed.push_back(p.name);
        }
        r.summary["properties"] = rep.properties.size();
        r.summary["failed"] = std::move(failed);
        r.summary["all_passed"] = rep.all_passed();
        res.exit_code = rep.all_passed() ? kExitOk : kExitProperty;
        return res;
    } catch (...) {
        return error_result("verify", params);
    }
}

// ---------------------------------------------------------------- limit-scan

CommandResult cmd_limit_scan(const LimitScanArgs& a) {
    Json params;
    params["quantity"] = a.quantity;
    params["kind"] = std::string(to_string(a.kind));
    if (!a.gamma.empty()) params["gamma"] = a.gamma;
    if (!a.u.empty()) params["u"] = a.u;
    if (!a.point.empty()) params["point"] = a.point;
    params["t"] = a.t;
    params["signed"] = a.is_signed;
    params["L_min"] = a.L_min;
    params["L_max"] = a.L_max;
    params["per_decade"] = a.per_decade;
    try {
        if (!(a.L_min > 0) || !(a.L_max >= a.L_min)) throw InputError("need 0 < L_min <= L_max");
        if (a.per_decade < 1 || a.per_decade > 100) throw InputError("--per-decade must lie in [1, 100]");

        std::function<double(double)> value;
        double limit = 0.0;
        bool divergent = false;
        std::string branch;
        if (a.quantity == "curve-curvature") {
            if (a.gamma.empty()) throw InputError("curve-curvature needs --gamma");
            const CurveJet c = ParamCurve::parse_list(a.gamma).at(a.t);
            const auto lim = curve_curvature_limit(a.kind, c);
            limit = lim.value;
            divergent = lim.branch == CurveBranch::HorizontalDivergent;
            branch = std::string(to_string(lim.branch));
            value = [kind = a.kind, c](double L) { return curve_curvature_L(kind, L, c); };
        } else if (a.quantity == "geodesic-curvature") {
            if (a.gamma.empty() || a.u.empty()) throw InputError("geodesic-curvature needs --gamma and --u");
            const SurfaceCurvePoint s(parse(a.u), ParamCurve::parse_list(a.gamma).at(a.t));
            const auto lim = geodesic_curvature_limit(a.kind, s, a.is_signed);
            limit = lim.value;
            divergent = lim.branch == CurveBranch::HorizontalDivergent;
            branch = std::string(to_string(lim.branch));
            value = [kind = a.kind, s, sg = a.is_signed](double L) {
                return geodesic_curvature_L(coeff_table(kind, L), s, sg);
            };
        } else if (a.quantity == "mean-curvature" || a.quantity == "gauss-curvature") {
            if (a.u.empty() || a.point.empty()) throw InputError(a.quantity + " needs --u and --point");
            const SurfaceLocal loc(parse(a.u), parse_point(a.point));
            const bool mean = a.quantity == "mean-curvature";
            limit = mean ? loc.horizontal_mean_curvature() : loc.gauss_curvature_limit(a.kind);
            value = [kind = a.kind, loc, mean](double L) {
                const auto rep = loc.gauss_curvature(coeff_table(kind, L));
                return mean ? rep.H_L : rep.K_surf;
            };
        } else {
            throw InputError("unknown quantity '" + a.quantity +
                             "' (curve-curvature, geodesic-curvature, mean-curvature, gauss-curvature)");
        }

        const double d0 = std::log10(a.L_min), d1 = std::log10(a.L_max);
        const int steps = static_cast<int>(std::ceil((d1 - d0) * a.per_decade - 1e-9));
        CommandResult res;
        Report& r = res.report;
        r.command = "limit-scan";
        r.parameters = params;
        r.columns = {"L", "value", "scaled", "deviation"};
        std::vector<double> Ls, devs;
        for (int i = 0; i <= steps; ++i) {
            const double L = steps == 0 ? a.L_min : std::pow(10.0, d0 + (d1 - d0) * i / steps);
            const double v = value(L);
            const double scaled = divergent ? v / std::sqrt(L) : v;
            const double dev = std::abs(scaled - limit);
            r.add_row({L, v, scaled, dev});
            if (dev > 0) {
                Ls.push_back(L);
                devs.push_back(dev);
            }
        }
        r.summary["limit"] = limit;
        r.summary["scaled_by_sqrt_L"] = divergent;
        if (!branch.empty()) r.summary["branch"] = branch;
        if (Ls.size() >= 2) {
            r.summary["fitted_exponent"] = number_or_null(fit_decay_exponent(Ls, devs));
        } else {
            r.summary["fitted_exponent"] = nullptr;
            r.warnings.push_back("deviation from the limit is zero on the grid; no exponent fitted");
        }
        return res;
    } catch (...) {
        return error_result("limit-scan", params);
    }
}

}  // namespace heis
