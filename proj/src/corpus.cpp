#include "interdiv/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "csv_util.hpp"
#include "interdiv/error.hpp"

namespace interdiv {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

void check_header(std::span<const std::string_view> got, std::span<const std::string> expected,
                  std::string_view source) {
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= got.size()) {
      throw SchemaError("schema error in " + std::string(source) + ": missing column '" + expected[i] + "'");
    }
    if (got[i] != expected[i]) {
      throw SchemaError("schema error in " + std::string(source) + ": column " + std::to_string(i + 1) +
                        " is '" + std::string(got[i]) + "', expected '" + expected[i] + "'");
    }
  }
  if (got.size() > expected.size()) {
    throw SchemaError("schema error in " + std::string(source) + ": unexpected column '" +
                      std::string(got[expected.size()]) + "'");
  }
}

/// Skips '#' metadata lines and blank lines; returns false at end of input.
bool next_content_line(csv::LineReader& reader, std::string_view& line) {
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    return true;
  }
  return false;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

YearRange YearRange::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto first = csv::parse_int(text.substr(0, colon));
  const auto last = colon == std::string_view::npos ? first : csv::parse_int(text.substr(colon + 1));
  if (!first || !last) throw ConfigError("malformed year range '" + std::string(text) + "' (expected A:B)");
  return YearRange{static_cast<int>(*first), static_cast<int>(*last)};
}

std::string format_shortest(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

std::vector<std::string> corpus_csv_columns() {
  std::vector<std::string> columns{"idwork", "pyear", "citation"};
  for (std::size_t k = 1; k <= kNumFields; ++k) columns.push_back("discip" + std::to_string(k));
  for (std::size_t m = 1; m <= kNumSdgs; ++m) columns.push_back("SDG" + std::to_string(m));
  return columns;
}

std::vector<PublicationRecord> read_corpus_csv(std::istream& in, std::string_view source) {
  const std::string text = csv::read_all(in);
  csv::LineReader reader(text);
  const auto expected = corpus_csv_columns();

  std::string_view line;
  std::vector<std::string_view> cells;
  if (!next_content_line(reader, line)) throw SchemaError("schema error in " + std::string(source) + ": no header");
  csv::split(line, cells);
  check_header(cells, expected, source);

  std::vector<PublicationRecord> records;
  while (next_content_line(reader, line)) {
    csv::split(line, cells);
    const auto at = where(source, reader.line_number());
    if (cells.size() != expected.size()) {
      throw ParseError("parse error at " + at + ": expected " + std::to_string(expected.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    PublicationRecord record;
    if (cells[0].empty()) throw ParseError("parse error at " + at + ": empty idwork");
    record.work_id = std::string(cells[0]);

    const auto year = csv::parse_int(cells[1]);
    if (!year) throw ParseError("parse error at " + at + ": pyear '" + std::string(cells[1]) + "'");
    record.year = static_cast<int>(*year);

    const auto citations = csv::parse_int(cells[2]);
    if (!citations) throw ParseError("parse error at " + at + ": citation '" + std::string(cells[2]) + "'");
    if (*citations < 0) throw RangeError("range error at " + at + ": negative citation count");
    record.citations = *citations;

    auto parse_score = [&](std::size_t column) {
      const auto value = csv::parse_double(cells[column]);
      if (!value) {
        throw ParseError("parse error at " + at + ": " + expected[column] + " '" + std::string(cells[column]) + "'");
      }
      if (!(*value >= 0.0 && *value <= 1.0)) {
        throw RangeError("range error at " + at + ": " + expected[column] + " = " + std::string(cells[column]) +
                         " outside [0,1]");
      }
      return *value;
    };
    record.field_scores.resize(kNumFields);
    for (std::size_t k = 0; k < kNumFields; ++k) record.field_scores[k] = parse_score(3 + k);
    record.sdg_scores.resize(kNumSdgs);
    for (std::size_t m = 0; m < kNumSdgs; ++m) record.sdg_scores[m] = parse_score(3 + kNumFields + m);

    records.push_back(std::move(record));
  }
  return records;
}

std::vector<PublicationRecord> load_corpus_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus_csv(in, path.string());
}

void write_corpus_csv(std::ostream& out, std::span<const PublicationRecord> records) {
  const auto columns = corpus_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& r : records) {
    out << r.work_id << ',' << r.year << ',' << r.citations;
    for (double v : r.field_scores) out << ',' << format_shortest(v);
    for (double v : r.sdg_scores) out << ',' << format_shortest(v);
    out << '\n';
  }
}

DedupResult deduplicate(std::span<const PublicationRecord> records) {
  DedupResult result;
  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (const auto& r : records) {
    if (seen.insert(r.work_id).second) {
      result.records.push_back(r);
    } else {
      ++result.duplicates;
    }
  }
  return result;
}

YearSlice::YearSlice(int year, std::vector<PublicationRecord> records) : year_(year) {
  for (const auto& r : records) {
    if (r.year != year) {
      throw DataError("record " + r.work_id + " from " + std::to_string(r.year) + " placed in slice " +
                      std::to_string(year));
    }
  }
  records_ = deduplicate(records).records;
}

YearSlice slice_by_year(std::span<const PublicationRecord> records, int year) {
  std::vector<PublicationRecord> matching;
  std::copy_if(records.begin(), records.end(), std::back_inserter(matching),
               [year](const PublicationRecord& r) { return r.year == year; });
  return YearSlice(year, std::move(matching));
}

YearPartition partition_by_year(std::span<const PublicationRecord> records, YearRange range) {
  YearPartition partition;
  std::map<int, std::vector<PublicationRecord>> buckets;
  for (const auto& r : records) {
    if (!range.contains(r.year)) {
      ++partition.ignored_out_of_range;
      continue;
    }
    buckets[r.year].push_back(r);
  }
  for (auto& [year, bucket] : buckets) {
    const std::size_t before = bucket.size();
    YearSlice slice(year, std::move(bucket));
    partition.duplicates += before - slice.size();
    partition.slices.emplace(year, std::move(slice));
  }
  return partition;
}

std::vector<PublicationRecord> select_top_cited(std::span<const PublicationRecord> records, std::size_t field,
                                                int year, std::size_t n) {
  if (n == 0) throw ConfigError("select_top_cited needs n >= 1");
  std::vector<const PublicationRecord*> pool;
  for (const auto& r : records) {
    if (r.year == year && field < r.field_scores.size() && r.field_scores[field] > 0.0) pool.push_back(&r);
  }
  const auto ranks_before = [](const PublicationRecord* a, const PublicationRecord* b) {
    if (a->citations != b->citations) return a->citations > b->citations;
    return a->work_id < b->work_id;
  };
  const std::size_t keep = std::min(n, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(), ranks_before);

  std::vector<PublicationRecord> top;
  top.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) top.push_back(*pool[i]);
  return top;
}

MembershipSets membership_sets(const YearSlice& slice, std::size_t num_fields, std::size_t num_sdgs) {
  MembershipSets sets{std::vector<std::set<std::string>>(num_fields), std::vector<std::set<std::string>>(num_sdgs)};
  for (const auto& r : slice.records()) {
    for (std::size_t f = 0; f < std::min(num_fields, r.field_scores.size()); ++f) {
      if (r.field_scores[f] > 0.0) sets.fields[f].insert(r.work_id);
    }
    for (std::size_t m = 0; m < std::min(num_sdgs, r.sdg_scores.size()); ++m) {
      if (r.sdg_scores[m] > 0.0) sets.sdgs[m].insert(r.work_id);
    }
  }
  return sets;
}

std::vector<std::string> term_count_csv_columns() {
  std::vector<std::string> columns{"pyear", "nwork"};
  for (std::size_t d = 1; d <= kNumDomains; ++d) columns.push_back("nwork" + std::to_string(d));
  columns.emplace_back("nIDR");
  for (std::size_t d = 1; d <= kNumDomains; ++d) columns.push_back("nIDR" + std::to_string(d));
  columns.emplace_back("%nIDR");
  for (std::size_t d = 1; d <= kNumDomains; ++d) columns.push_back("%nIDR" + std::to_string(d));
  return columns;
}

std::vector<TermCountRow> read_term_counts_csv(std::istream& in, std::string_view source) {
  const std::string text = csv::read_all(in);
  csv::LineReader reader(text);
  const auto expected = term_count_csv_columns();

  std::string_view line;
  std::vector<std::string_view> cells;
  if (!next_content_line(reader, line)) throw SchemaError("schema error in " + std::string(source) + ": no header");
  csv::split(line, cells);
  check_header(cells, expected, source);

  std::vector<TermCountRow> rows;
  while (next_content_line(reader, line)) {
    csv::split(line, cells);
    const auto at = where(source, reader.line_number());
    if (cells.size() != expected.size()) {
      throw ParseError("parse error at " + at + ": expected " + std::to_string(expected.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    auto count = [&](std::size_t column) {
      const auto v = csv::parse_int(cells[column]);
      if (!v) throw ParseError("parse error at " + at + ": " + expected[column] + " '" + std::string(cells[column]) + "'");
      if (*v < 0) throw RangeError("range error at " + at + ": negative " + expected[column]);
      return *v;
    };
    auto percent = [&](std::size_t column, std::int64_t total) -> std::optional<double> {
      if (total == 0 && csv::is_missing(cells[column])) return std::nullopt;
      const auto v = csv::parse_double(cells[column]);
      if (!v) throw ParseError("parse error at " + at + ": " + expected[column] + " '" + std::string(cells[column]) + "'");
      return *v;
    };

    TermCountRow row;
    row.year = static_cast<int>(count(0));
    row.works = count(1);
    for (std::size_t d = 0; d < kNumDomains; ++d) row.domain_works[d] = count(2 + d);
    row.idr = count(6);
    for (std::size_t d = 0; d < kNumDomains; ++d) row.domain_idr[d] = count(7 + d);
    row.idr_percent = percent(11, row.works);
    for (std::size_t d = 0; d < kNumDomains; ++d) row.domain_idr_percent[d] = percent(12 + d, row.domain_works[d]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TermCountRow> load_term_counts_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_term_counts_csv(in, path.string());
}

void write_term_counts_csv(std::ostream& out, std::span<const TermCountRow> rows) {
  const auto columns = term_count_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  auto pct = [](const std::optional<double>& v) { return v ? format_shortest(*v) : std::string("NA"); };
  for (const auto& r : rows) {
    out << r.year << ',' << r.works;
    for (auto v : r.domain_works) out << ',' << v;
    out << ',' << r.idr;
    for (auto v : r.domain_idr) out << ',' << v;
    out << ',' << pct(r.idr_percent);
    for (const auto& v : r.domain_idr_percent) out << ',' << pct(v);
    out << '\n';
  }
}

}  // namespace interdiv
