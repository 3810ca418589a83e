#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace limlab {

using Json = nlohmann::ordered_json;

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// A rectangular result table: one row per grid point.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

std::string format_cell(const Cell& c);
/// Header line plus one line per row; fields with commas or quotes are quoted.
void write_csv(std::ostream& out, const Table& t);
std::string to_csv(const Table& t);
/// Array of row objects keyed by column name.
Json table_to_json(const Table& t);
/// A number, or its text form ("inf", "nan") when not finite.
Json json_number(double v);
Json cell_to_json(const Cell& c);

}  // namespace limlab
