#include "heis/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace heis {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& c) {
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double d) const { return format_number(d); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const std::string& s) const { return s; }
    };
    return std::visit(V{}, c);
}

namespace {

Json cell_json(const Cell& c) {
    struct V {
        Json operator()(std::monostate) const { return nullptr; }
        Json operator()(double d) const { return std::isfinite(d) ? Json(d) : Json(nullptr); }
        Json operator()(std::int64_t i) const { return i; }
        Json operator()(bool b) const { return b; }
        Json operator()(const std::string& s) const { return s; }
    };
    return std::visit(V{}, c);
}

Cell json_cell(const Json& j) {
    if (j.is_null()) return std::monostate{};
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    throw std::invalid_argument("report cells hold scalars only");
}

std::string json_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) return format_number(j.get<double>());
    return j.dump();
}

// One "path: value" line per scalar leaf; empty containers print as [] or {}.
void flatten(std::ostringstream& out, const std::string& path, const Json& j) {
    if (j.is_structured() && !j.empty()) {
        std::size_t i = 0;
        for (const auto& [k, v] : j.items()) flatten(out, path + "." + (j.is_array() ? std::to_string(i++) : k), v);
        return;
    }
    out << "  " << path << ": " << json_text(j) << "\n";
}

}  // namespace

void Report::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size()) throw std::logic_error("row width does not match the column list");
    rows.push_back(std::move(cells));
}

Json Report::to_json() const {
    Json j;
    j["schema_version"] = std::string(kSchemaVersion);
    j["command"] = command;
    j["status"] = error ? "error" : "ok";
    j["parameters"] = parameters;
    j["columns"] = columns;
    Json rs = Json::array();
    for (const auto& r : rows) {
        Json o = Json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = cell_json(r[i]);
        rs.push_back(std::move(o));
    }
    j["rows"] = std::move(rs);
    j["summary"] = summary;
    j["warnings"] = warnings;
    if (error) {
        Json e;
        e["type"] = error->type;
        e["message"] = error->message;
        e["exit_code"] = error->exit_code;
        e["details"] = error->details;
        j["error"] = std::move(e);
    }
    return j;
}

Report Report::from_json(const Json& j) {
    if (j.at("schema_version").get<std::string>() != kSchemaVersion)
        throw std::invalid_argument("unsupported report schema version");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.parameters = j.at("parameters");
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
        std::vector<Cell> cells;
        for (const auto& c : r.columns) cells.push_back(json_cell(row.at(c)));
        r.rows.push_back(std::move(cells));
    }
    r.summary = j.at("summary");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("error")) {
        const Json& e = j.at("error");
        r.error = ErrorRecord{e.at("type").get<std::string>(), e.at("message").get<std::string>(),
                              e.at("exit_code").get<int>(), e.at("details")};
    }
    return r;
}

std::string Report::to_csv() const {
    std::ostringstream out;
    if (error) {
        out << "error_type,message\r\n" << csv_field(error->type) << ',' << csv_field(error->message) << "\r\n";
        return out.str();
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
    out << "\r\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(r[i]));
        out << "\r\n";
    }
    return out.str();
}

std::string Report::to_table() const {
    std::ostringstream out;
    out << command << " (schema " << kSchemaVersion << ")\n";
    if (error) {
        out << "error: " << error->type << "\n  " << error->message << "\n";
        flatten(out, "error.details", error->details);
        return out.str();
    }
    flatten(out, "parameters", parameters);
    flatten(out, "summary", summary);
    if (!columns.empty()) {
        std::vector<std::size_t> w(columns.size());
        std::vector<std::vector<std::string>> text;
        for (std::size_t i = 0; i < columns.size(); ++i) w[i] = columns[i].size();
        for (const auto& r : rows) {
            std::vector<std::string> line;
            for (std::size_t i = 0; i < r.size(); ++i) {
                line.push_back(cell_text(r[i]));
                if (std::holds_alternative<std::monostate>(r[i])) line.back() = "-";
                w[i] = std::max(w[i], line.back().size());
            }
            text.push_back(std::move(line));
        }
        out << "\n";
        auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const std::string& c = cells[i];
                out << (i ? "  " : "") << c << std::string(w[i] - c.size(), ' ');
            }
            out << "\n";
        };
        emit(columns);
        std::vector<std::string> rule;
        for (std::size_t x : w) rule.push_back(std::string(x, '-'));
        emit(rule);
        for (const auto& line : text) emit(line);
    }
    for (const auto& wmsg : warnings) out << "warning: " << wmsg << "\n";
    return out.str();
}

}  // namespace heis
