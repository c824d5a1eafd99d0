#include "interdiv/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "csv_util.hpp"
#include "interdiv/error.hpp"
#include "json.hpp"

namespace interdiv {

std::optional<std::size_t> Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[40];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

namespace {

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string to_csv(const Table& table, const std::optional<std::string>& meta_line) {
  std::string out;
  if (meta_line) out += "# " + *meta_line + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json object = ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) {
      const auto& cell = row[i];
      if (std::holds_alternative<std::monostate>(cell)) {
        object[table.columns[i]] = nullptr;
      } else if (const auto* n = std::get_if<std::int64_t>(&cell)) {
        object[table.columns[i]] = *n;
      } else if (const auto* d = std::get_if<double>(&cell)) {
        object[table.columns[i]] = *d;
      } else {
        object[table.columns[i]] = std::get<std::string>(cell);
      }
    }
    doc.push_back(std::move(object));
  }
  return doc.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto temp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw DataError("cannot move output into place at " + path.string());
  }
}

void export_table(const Table& table, ExportFormat format, const std::filesystem::path& path,
                  const std::optional<std::string>& meta_line) {
  if (table.rows.empty()) throw DataError("refusing to export an empty series to " + path.string());
  if (format == ExportFormat::csv) {
    write_file_atomic(path, to_csv(table, meta_line));
    return;
  }
  write_file_atomic(path, to_json(table));
  if (meta_line) write_file_atomic(path.string() + ".meta", *meta_line + "\n");
}

std::optional<double> cell_as_double(const Cell& cell) {
  if (const auto* n = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*n);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::nullopt;
}

Table parse_csv_table(std::string_view text) {
  csv::LineReader reader(text);
  std::string_view line;
  std::vector<std::string_view> cells;
  Table table;
  bool have_header = false;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    csv::split(line, cells);
    if (!have_header) {
      for (auto c : cells) table.columns.emplace_back(c);
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw ParseError("parse error at line " + std::to_string(reader.line_number()) + ": expected " +
                       std::to_string(table.columns.size()) + " cells, got " + std::to_string(cells.size()));
    }
    std::vector<Cell> row;
    row.reserve(cells.size());
    for (auto c : cells) {
      if (c.empty()) {
        row.emplace_back(std::monostate{});
      } else if (const auto n = csv::parse_int(c)) {
        row.emplace_back(*n);
      } else if (const auto d = csv::parse_double(c)) {
        row.emplace_back(*d);
      } else {
        row.emplace_back(std::string(c));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw SchemaError("schema error: table has no header row");
  return table;
}

Table read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv_table(csv::read_all(in));
}

}  // namespace interdiv
