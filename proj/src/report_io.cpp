#include "limlab/report_io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "limlab/format.hpp"

namespace limlab {

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << quote_csv(t.columns[j]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << quote_csv(format_cell(row[j]));
    out << '\n';
  }
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

Json json_number(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}

Json cell_to_json(const Cell& c) {
  struct Visitor {
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(double v) const { return json_number(v); }
    Json operator()(bool v) const { return v; }
    Json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

Json table_to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t j = 0; j < row.size(); ++j) obj[t.columns[j]] = cell_to_json(row[j]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace limlab
