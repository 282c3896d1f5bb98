// Runs the heis binary and checks exit codes, report contents and schema validity.
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "heis/report.hpp"

using heis::Json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HEIS_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scene(const char* name) { return std::string(HEIS_SCENES_DIR) + "/" + name + ".scene"; }

bool schema_valid(const std::string& json) {
    const std::string path = "cli_report_check.json";
    std::ofstream(path) << json;
    const std::string cmd = "python3 -c \"import json,jsonschema; jsonschema.validate(json.load(open('" + path +
                            "')), json.load(open('" + std::string(HEIS_SCHEMA) + "')))\"";
    return std::system(cmd.c_str()) == 0;
}

}  // namespace

TEST_CASE("curve: circle limit") {
    const Run r = run("curve --kind svk1 --gamma \"cos(t),sin(t),0\" --limit --t 0:6.283:64");
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    REQUIRE(j["rows"].size() == 64);
    for (const auto& row : j["rows"]) {
        CHECK(row["branch"] == "NonHorizontal");
        CHECK(row["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(schema_valid(r.out));
}

TEST_CASE("curve: finite L and divergent branch") {
    const Run a = run("curve --kind adapted --gamma \"t,0,0\" --L 100 --t 0");
    CHECK(a.code == 0);
    CHECK(Json::parse(a.out)["rows"][0]["value"] == 0.0);
    const Run b = run("curve --kind svk2 --gamma \"t,0,t^2/2\" --limit --t 0");
    const Json j = Json::parse(b.out);
    CHECK(j["rows"][0]["branch"] == "HorizontalDivergent");
    CHECK(j["rows"][0]["discriminator"] == 1.0);
}

TEST_CASE("curve from a file") {
    const std::string path = "cli_curve.txt";
    std::ofstream(path) << "# unit circle\ncos(t)\nsin(t)\n0\n";
    const Run r = run("curve --kind svk1 --file " + path + " --limit --t 0");
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["rows"][0]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("surface: plane limits and characteristic error") {
    const Run a = run("surface --kind svk1 --scene " + scene("plane-disk") + " --limit --point 1,0,0");
    CHECK(a.code == 0);
    CHECK(Json::parse(a.out)["rows"][0]["K_inf"].get<double>() == doctest::Approx(-1.0));
    const Run b = run("surface --kind adapted --scene " + scene("paraboloid-cap") + " --limit --grid 6");
    CHECK(b.code == 0);
    for (const auto& row : Json::parse(b.out)["rows"])
        if (row["status"] == "ok") CHECK(row["K_inf"] == 0.0);
    const Run c = run("surface --kind svk1 --u x3 --limit --point 0,0,0");
    CHECK(c.code == 2);
    const Json e = Json::parse(c.out);
    CHECK(e["status"] == "error");
    CHECK(e["error"]["type"] == "CharacteristicPointError");
    CHECK(schema_valid(c.out));
}

TEST_CASE("gauss-bonnet commands") {
    const Run a = run("gauss-bonnet --kind svk1 --mode limit --scene " + scene("plane-disk"));
    CHECK(a.code == 0);
    const Json j = Json::parse(a.out);
    CHECK(j["summary"]["passed"] == true);
    CHECK(j["summary"]["runs"][0]["extrapolation"].size() == 3);
    CHECK(schema_valid(a.out));
    CHECK(run("gauss-bonnet --kind levi-civita --mode finite-L --L 1 --scene " + scene("paraboloid-cap")).code == 0);
    CHECK(run("gauss-bonnet --kind svk2 --mode limit --scene " + scene("plane-disk")).code == 0);
    // Forcing the wrong orientation breaks the asserted identity.
    CHECK(run("gauss-bonnet --kind levi-civita --mode finite-L --L 1 --orientation flip --scene " +
              scene("plane-disk"))
              .code == 4);
    CHECK(run("gauss-bonnet --kind levi-civita --mode limit --scene " + scene("plane-disk")).code == 2);
}

TEST_CASE("verify and fault injection") {
    const Run a = run("verify --seed 42 --samples 100");
    CHECK(a.code == 0);
    CHECK(Json::parse(a.out)["summary"]["all_passed"] == true);
    CHECK(schema_valid(a.out));
    const Run b = run("verify --seed 42 --samples 20 --corrupt-table");
    CHECK(b.code == 4);
    const Json j = Json::parse(b.out);
    bool named = false;
    for (const auto& f : j["summary"]["failed"]) named = named || f == "connections.metric-compatibility";
    CHECK(named);
}

TEST_CASE("limit-scan") {
    const Run r = run("limit-scan --quantity gauss-curvature --kind svk1 --u \"x3 - (x1^2+x2^2)/2\" --point 0.5,0.2,0.145 "
                      "--L-min 1e4 --L-max 1e8");
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["rows"].size() == 5);
    const double alpha = j["summary"]["fitted_exponent"].get<double>();
    CHECK(alpha >= 0.4);
    CHECK(alpha <= 1.1);
    CHECK(schema_valid(r.out));
}

TEST_CASE("input errors exit with 2") {
    CHECK(run("curve --kind svk1 --gamma \"cos(t),sin(t\" --limit").code == 2);
    CHECK(run("curve --kind nope --gamma \"t,0,0\" --limit").code == 2);
    CHECK(run("curve --kind svk1 --gamma \"t,0,0\"").code == 2);
    CHECK(run("gauss-bonnet --scene /nonexistent.scene").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("curve --kind svk1 --gamma \"0,0,0\" --L 1").code == 2);
}

TEST_CASE("formats") {
    const std::string args = "curve --kind svk1 --gamma \"cos(t),sin(t),0\" --L 3 --t 0,0.5";
    const Run csv = run(args + " --format csv");
    CHECK(csv.out.starts_with("t,omega,omega_dot,value,closed_form\r\n"));
    const Run table = run(args + " --format table");
    const Json j = Json::parse(run(args).out);
    CHECK(table.out.find(heis::format_number(j["rows"][1]["value"].get<double>())) != std::string::npos);
    CHECK(run(args).out == run(args).out);
}
