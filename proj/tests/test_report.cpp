#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "heis/commands.hpp"
#include "heis/error.hpp"
#include "heis/report.hpp"

using namespace heis;

namespace {

Report sample() {
    Report r;
    r.command = "curve";
    r.parameters = {{"kind", "svk1"}, {"L", 0.1}};
    r.columns = {"t", "label", "n", "flag", "missing"};
    r.add_row({0.1, std::string("a,b"), std::int64_t{3}, true, Cell()});
    r.add_row({1e-300, std::string("say \"hi\"\nthere"), std::int64_t{-2}, false, 2.0 / 3});
    r.summary = {{"worst", 1.0 / 3}, {"nested", {{"xs", {1.5, 2.25}}}}};
    r.warnings = {"careful"};
    return r;
}

// Parses "name: value" lines of the table header back into a map.
std::map<std::string, std::string> header_fields(const std::string& table) {
    std::map<std::string, std::string> out;
    std::istringstream in(table);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line) && !line.empty()) {
        const auto c = line.find(": ");
        out[line.substr(2, c - 2)] = line.substr(c + 2);
    }
    return out;
}

}  // namespace

TEST_CASE("shortest round-trip numbers") {
    for (double v : {0.1, 1.0 / 3, 1e-300, 6.02214076e23, -0.0, 5e-324})
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    const std::string csv = sample().to_csv();
    CHECK(csv.starts_with("t,label,n,flag,missing\r\n"));
    CHECK(csv.find("0.1,\"a,b\",3,true,\r\n") != std::string::npos);
    CHECK(csv.find("\"say \"\"hi\"\"\nthere\"") != std::string::npos);
}

TEST_CASE("json round trip") {
    const Report a = sample();
    const Json j = a.to_json();
    CHECK(j["schema_version"] == "1.0");
    CHECK(j["status"] == "ok");
    CHECK(j["rows"][0]["missing"].is_null());
    const Report b = Report::from_json(Json::parse(j.dump()));
    CHECK(b.to_json() == j);
    CHECK(std::get<double>(b.rows[1][0]) == 1e-300);
    CHECK(std::get<std::int64_t>(b.rows[1][2]) == -2);
}

TEST_CASE("non-finite values serialize as null") {
    Report r;
    r.command = "curve";
    r.columns = {"v"};
    r.add_row({std::numeric_limits<double>::infinity()});
    CHECK(r.to_json()["rows"][0]["v"].is_null());
}

TEST_CASE("row width is enforced") {
    Report r;
    r.columns = {"a", "b"};
    CHECK_THROWS(r.add_row({1.0}));
}

TEST_CASE("table agrees with json field for field") {
    const Report r = sample();
    const Json j = r.to_json();
    const std::string table = r.to_table();
    const auto fields = header_fields(table);
    CHECK(fields.at("parameters.kind") == "svk1");
    CHECK(std::stod(fields.at("parameters.L")) == j["parameters"]["L"].get<double>());
    CHECK(std::stod(fields.at("summary.worst")) == j["summary"]["worst"].get<double>());
    CHECK(std::stod(fields.at("summary.nested.xs.1")) == 2.25);
    // Row cells print with the same shortest round-trip text.
    CHECK(table.find(format_number(2.0 / 3)) != std::string::npos);
    CHECK(table.find("1e-300") != std::string::npos);
    CHECK(table.find("warning: careful") != std::string::npos);
}

TEST_CASE("error records") {
    CommandResult res;
    try {
        throw CharacteristicPointError("at origin", 0.0, {0, 0, 0});
    } catch (...) {
        res = error_result("surface", {{"u", "x3"}});
    }
    CHECK(res.exit_code == kExitInput);
    const Json j = res.report.to_json();
    CHECK(j["status"] == "error");
    CHECK(j["error"]["type"] == "CharacteristicPointError");
    CHECK(j["error"]["details"]["l"] == 0.0);
    CHECK(Report::from_json(j).to_json() == j);

    auto code = [](auto&& thrower) {
        try {
            thrower();
        } catch (...) {
            return classify_current_exception().exit_code;
        }
        return -1;
    };
    CHECK(code([] { throw NumericContractError("x"); }) == kExitNumeric);
    CHECK(code([] { throw NonIntegrableError("x"); }) == kExitNumeric);
    CHECK(code([] { throw DegenerateDenominatorError("x"); }) == kExitNumeric);
    CHECK(code([] { (void)parse("x1^"); }) == kExitInput);
    CHECK(code([] { throw OrientationError("x"); }) == kExitInput);
    CHECK(code([] { throw SceneError("x"); }) == kExitInput);
}

TEST_CASE("grids and points") {
    const auto g = parse_t_grid("0:2*pi:5");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(2 * std::numbers::pi));
    CHECK(parse_t_grid("0.5") == std::vector<double>{0.5});
    CHECK(parse_t_grid("1, 2, 3").size() == 3);
    CHECK_THROWS_AS((void)parse_t_grid("0:1"), InputError);
    CHECK_THROWS_AS((void)parse_t_grid("0:1:0"), InputError);
    const Point p = parse_point("1, 0, 1/2");
    CHECK(p.x3 == 0.5);
    CHECK_THROWS_AS((void)parse_point("1,2"), InputError);
}
