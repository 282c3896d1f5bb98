#pragma once
// Command reports: one record serialized three ways (JSON, CSV, aligned table).
// Rows are keyed by column name; the table and CSV print the same fields in
// column order.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace heis {

inline constexpr std::string_view kSchemaVersion = "1.0";

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct ErrorRecord {
    std::string type;
    std::string message;
    int exit_code = 2;
    Json details = Json::object();
};

struct Report {
    std::string command;
    Json parameters = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json summary = Json::object();
    std::vector<std::string> warnings;
    std::optional<ErrorRecord> error;

    /// Appends a row; `cells` must match `columns` in length.
    void add_row(std::vector<Cell> cells);

    Json to_json() const;
    static Report from_json(const Json& j);
    std::string to_csv() const;
    std::string to_table() const;
};

/// Shortest decimal text that reads back to the same double; "nan"/"inf" for non-finite values.
std::string format_number(double v);
/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF; quotes doubled.
std::string csv_field(std::string_view s);
std::string cell_text(const Cell& c);

}  // namespace heis
