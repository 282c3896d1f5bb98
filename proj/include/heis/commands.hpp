#pragma once
// The CLI subcommands as library calls. Each returns a Report and the process
// exit status it maps to; tools/heis_cli.cpp only parses arguments.
//
// Exit codes: 0 ok, 2 input error, 3 numeric contract broken, 4 property failure.

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "heis/connection.hpp"
#include "heis/gauss_bonnet.hpp"
#include "heis/report.hpp"

namespace heis {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitProperty = 4;

struct CommandResult {
    Report report;
    int exit_code = kExitOk;
};

ConnectionKind parse_kind(std::string_view name);
/// "a:b:n" (inclusive, n nodes), a comma list, or one value. Entries are constant expressions.
std::vector<double> parse_t_grid(std::string_view spec);
/// "x1,x2,x3".
Point parse_point(std::string_view spec);
/// Curve file: the three components, comma-separated or one per line; '#' starts a comment.
std::string read_curve_file(const std::string& path);

/// Error record for the exception currently in flight (call from a catch block).
ErrorRecord classify_current_exception();
CommandResult error_result(const std::string& command, Json parameters);

struct CurveArgs {
    ConnectionKind kind = ConnectionKind::SvK1;
    std::string gamma;
    std::string t = "0";
    std::optional<double> L;
    bool limit = false;
    std::optional<double> eps_h;
};
CommandResult cmd_curve(const CurveArgs& args);

struct SurfaceArgs {
    ConnectionKind kind = ConnectionKind::SvK1;
    std::optional<Scene> scene;
    std::string u;  // used when no scene is given
    std::vector<std::string> points;
    std::optional<int> grid;
    std::optional<double> L;
    bool limit = false;
    Execution execution = Execution::Parallel;
};
CommandResult cmd_surface(const SurfaceArgs& args);

struct GaussBonnetArgs {
    ConnectionKind kind = ConnectionKind::SvK1;
    Scene scene;
    std::string mode = "limit";
    std::vector<double> L;  // finite-L mode; empty means the scene grid
    std::optional<double> rho;
    std::optional<OrientationMode> orientation;
    std::optional<double> abs_tol, rel_tol;
    Execution execution = Execution::Parallel;
    /// Asserted residuals above this exit with 4.
    double tolerance = 1e-6;
};
CommandResult cmd_gauss_bonnet(const GaussBonnetArgs& args);

struct VerifyArgs {
    std::uint64_t seed = 42;
    std::size_t samples = 100;
    /// Test fixture: perturbs one coefficient of every table the suite builds.
    bool corrupt_table = false;
};
CommandResult cmd_verify(const VerifyArgs& args);

struct LimitScanArgs {
    std::string quantity = "curve-curvature";  // curve-curvature | geodesic-curvature | mean-curvature | gauss-curvature
    ConnectionKind kind = ConnectionKind::SvK1;
    std::string gamma;
    double t = 0.0;
    std::string u;
    std::string point;
    bool is_signed = true;
    double L_min = 1e2, L_max = 1e8;
    int per_decade = 1;
};
CommandResult cmd_limit_scan(const LimitScanArgs& args);

OrientationMode parse_orientation(std::string_view s);

}  // namespace heis
