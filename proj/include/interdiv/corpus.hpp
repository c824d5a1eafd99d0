#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interdiv/record.hpp"
#include "interdiv/taxonomy.hpp"

namespace interdiv {

/// Inclusive calendar-year range.
struct YearRange {
  int first = 1970;
  int last = 2022;

  [[nodiscard]] bool empty() const noexcept { return first > last; }
  [[nodiscard]] bool contains(int year) const noexcept { return year >= first && year <= last; }

  /// Parses "A:B" (or a single year "A"); throws ConfigError on malformed text.
  static YearRange parse(std::string_view text);

  friend bool operator==(const YearRange&, const YearRange&) = default;
};

// --- publication table (idwork, pyear, citation, discip1..19, SDG1..17) ---

std::vector<std::string> corpus_csv_columns();

/// Reads the publication table. Lines starting with '#' before the header are metadata and skipped.
/// Throws SchemaError, ParseError (with 1-based line number) or RangeError.
std::vector<PublicationRecord> read_corpus_csv(std::istream& in, std::string_view source = "<stream>");
std::vector<PublicationRecord> load_corpus_csv(const std::filesystem::path& path);

/// Writes the header and one row per record; reals use the shortest round-trip representation.
void write_corpus_csv(std::ostream& out, std::span<const PublicationRecord> records);

struct DedupResult {
  std::vector<PublicationRecord> records;
  std::size_t duplicates = 0;
};

/// Keeps the first occurrence of every work id, preserving order.
DedupResult deduplicate(std::span<const PublicationRecord> records);

/// The deduplicated publications of one year.
class YearSlice {
 public:
  YearSlice(int year, std::vector<PublicationRecord> records);

  [[nodiscard]] int year() const noexcept { return year_; }
  [[nodiscard]] std::span<const PublicationRecord> records() const noexcept { return records_; }
  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
  [[nodiscard]] bool empty() const noexcept { return records_.empty(); }

 private:
  int year_;
  std::vector<PublicationRecord> records_;
};

YearSlice slice_by_year(std::span<const PublicationRecord> records, int year);

struct YearPartition {
  std::map<int, YearSlice> slices;  // only non-empty years
  std::size_t ignored_out_of_range = 0;
  std::size_t duplicates = 0;
};

/// Splits records into per-year deduplicated slices, ignoring (and counting) years outside `range`.
YearPartition partition_by_year(std::span<const PublicationRecord> records, YearRange range);

/// The `n` most-cited records of `year` with a strictly positive score for `field`
/// (0-based), ordered by (citations descending, work_id ascending).
std::vector<PublicationRecord> select_top_cited(std::span<const PublicationRecord> records, std::size_t field,
                                                int year, std::size_t n);

struct MembershipSets {
  std::vector<std::set<std::string>> fields;
  std::vector<std::set<std::string>> sdgs;
};

/// Work ids with strictly positive score, per field and per SDG.
MembershipSets membership_sets(const YearSlice& slice, std::size_t num_fields = kNumFields,
                               std::size_t num_sdgs = kNumSdgs);

// --- term-count table (pyear, nwork, nwork1..4, nIDR, nIDR1..4, %nIDR, %nIDR1..4) ---

struct TermCountRow {
  int year = 0;
  std::int64_t works = 0;
  std::array<std::int64_t, kNumDomains> domain_works{};
  std::int64_t idr = 0;
  std::array<std::int64_t, kNumDomains> domain_idr{};
  // Stored percentages; empty when the source cell was blank/NA (only accepted for zero totals).
  std::optional<double> idr_percent;
  std::array<std::optional<double>, kNumDomains> domain_idr_percent{};
};

std::vector<std::string> term_count_csv_columns();

std::vector<TermCountRow> read_term_counts_csv(std::istream& in, std::string_view source = "<stream>");
std::vector<TermCountRow> load_term_counts_csv(const std::filesystem::path& path);
void write_term_counts_csv(std::ostream& out, std::span<const TermCountRow> rows);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_shortest(double value);

}  // namespace interdiv
