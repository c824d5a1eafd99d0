#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace interdiv {

/// Empty cells represent gaps.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const;
};

enum class ExportFormat { csv, json };

/// 12 significant digits, the precision of every exported series.
std::string format_number(double value);

/// CSV with a header row, LF endings; `meta_line` (without '#') is written first when given.
std::string to_csv(const Table& table, const std::optional<std::string>& meta_line = std::nullopt);

/// JSON array of row objects; gaps become null.
std::string to_json(const Table& table);

/// Writes via a temporary sibling file and rename. Throws DataError when the path is not writable.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Serializes a non-empty table to `path` (DataError when empty). For JSON the metadata line
/// goes to a `<path>.meta` sidecar so the document stays a plain array.
void export_table(const Table& table, ExportFormat format, const std::filesystem::path& path,
                  const std::optional<std::string>& meta_line = std::nullopt);

Table parse_csv_table(std::string_view text);
Table read_csv_table(const std::filesystem::path& path);

std::optional<double> cell_as_double(const Cell& cell);

}  // namespace interdiv
