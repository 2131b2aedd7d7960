#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace stein {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

/// A rectangular report: CSV rows with a versioned header comment, or the
/// same rows as JSON objects next to a metadata block.
struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws ConfigError when the row width differs from the column count.
  void add(std::vector<Cell> row);
};

inline constexpr int kReportSchemaVersion = 1;

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite.
std::string format_number(double v);

/// "# stein-be <kind> csv v1", the column line, then one line per row.
void write_csv(std::ostream& os, const Table& table);

/// Git revision baked in at configure time, or "unknown".
std::string git_revision();

/// {"schema", "tool", "kind", "git_revision", "config", "columns", "rows",
/// "summary"}. Rows are objects keyed by column.
nlohmann::json report_json(const Table& table, const nlohmann::json& config, const nlohmann::json& summary = {});

}  // namespace stein
