#include "stein/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "stein/errors.hpp"

#ifndef STEIN_GIT_REVISION
#define STEIN_GIT_REVISION "unknown"
#endif

namespace stein {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ConfigError("report '" + kind + "': row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

struct CellText {
  std::string operator()(const std::string& s) const { return csv_field(s); }
  std::string operator()(double v) const { return format_number(v); }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
};

nlohmann::json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
        }
        return v;
      },
      cell);
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  os << "# stein-be " << table.kind << " csv v" << kReportSchemaVersion << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << csv_field(table.columns[c]);
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << std::visit(CellText{}, row[c]);
    os << '\n';
  }
}

std::string git_revision() { return STEIN_GIT_REVISION; }

nlohmann::json report_json(const Table& table, const nlohmann::json& config, const nlohmann::json& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
    rows.push_back(std::move(obj));
  }
  return {{"schema", kReportSchemaVersion},
          {"tool", "stein-be"},
          {"kind", table.kind},
          {"git_revision", git_revision()},
          {"config", config},
          {"columns", table.columns},
          {"rows", std::move(rows)},
          {"summary", summary.is_null() ? nlohmann::json::object() : summary}};
}

}  // namespace stein
