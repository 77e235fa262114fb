#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace wkbq {

/// Empty, integer, real or text value of one report field.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

Cell cell(std::optional<double> v);

/// A flat table plus per-report fields. CSV repeats the fields as leading
/// columns on every row; JSON nests the rows under "rows".
struct Report {
    std::vector<std::pair<std::string, Cell>> fields;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// %.12g; infinities as "inf" / "-inf", NaN as "nan".
std::string format_number(double v);

void write_csv(const Report& report, std::ostream& out);
void write_json(const Report& report, std::ostream& out);

/// The JSON document write_json emits. Reals are rounded to 12 significant
/// digits; non-finite reals become the strings of format_number.
nlohmann::ordered_json to_json(const Report& report);

/// Reads CSV produced by write_csv (RFC 4180 quoting). The first
/// `field_names.size()` columns are per-report fields taken from the first
/// row. Numeric text becomes a number, empty text becomes null.
Report parse_csv(std::string_view text, std::span<const std::string> field_names);

}  // namespace wkbq
