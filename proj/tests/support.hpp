#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "interdiv/record.hpp"
#include "interdiv/taxonomy.hpp"

namespace interdiv::testing {

inline PublicationRecord make_record(std::string id, int year, std::int64_t citations,
                                     std::vector<double> fields, std::vector<double> sdgs = {}) {
  if (sdgs.empty()) sdgs.assign(kNumSdgs, 0.0);
  return PublicationRecord{std::move(id), year, citations, std::move(fields), std::move(sdgs)};
}

/// Pads a short score list with zeros up to `width`.
inline std::vector<double> padded(std::vector<double> head, std::size_t width = kNumFields) {
  head.resize(width, 0.0);
  return head;
}

/// The five-publication slice used by several suites, 19 fields wide.
inline std::vector<PublicationRecord> five_publication_slice(int year = 2001) {
  return {
      make_record("P1", year, 10, padded({0.9, 0.2})),
      make_record("P2", year, 5, padded({0.5, 0.0, 0.5})),
      make_record("P3", year, 7, padded({0.0, 0.7, 0.1, 0.3})),
      make_record("P4", year, 1, padded({0.4, 0.4, 0.4})),
      make_record("P5", year, 3, padded({0.0, 0.0, 0.0, 1.0})),
  };
}

// ---- brute-force oracles ----

/// Jaccard distance by explicit set enumeration; empty unions count as fully distant.
inline double oracle_distance(const std::vector<PublicationRecord>& slice, std::size_t a, std::size_t b) {
  std::set<std::string> sa;
  std::set<std::string> sb;
  for (const auto& r : slice) {
    if (r.field_scores[a] > 0.0) sa.insert(r.work_id);
    if (r.field_scores[b] > 0.0) sb.insert(r.work_id);
  }
  std::vector<std::string> both;
  std::vector<std::string> either;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(either));
  if (either.empty()) return 1.0;
  return 1.0 - static_cast<double>(both.size()) / static_cast<double>(either.size());
}

inline std::vector<std::vector<double>> oracle_distances(const std::vector<PublicationRecord>& slice,
                                                         std::size_t num_fields) {
  std::vector<std::vector<double>> d(num_fields, std::vector<double>(num_fields, 0.0));
  for (std::size_t a = 0; a < num_fields; ++a) {
    for (std::size_t b = 0; b < num_fields; ++b) d[a][b] = a == b ? 0.0 : oracle_distance(slice, a, b);
  }
  return d;
}

/// Effective number by a plain double sum in extended precision.
inline double oracle_delta(const std::vector<double>& raw, const std::vector<std::vector<double>>& d) {
  long double total = 0.0L;
  for (double v : raw) total += v;
  long double rs = 0.0L;
  for (std::size_t a = 0; a < raw.size(); ++a) {
    for (std::size_t b = 0; b < raw.size(); ++b) {
      rs += (raw[a] / total) * (raw[b] / total) * static_cast<long double>(d[a][b]);
    }
  }
  return static_cast<double>(1.0L / (1.0L - rs));
}

// ---- random inputs ----

/// Random corpus with sparse field profiles; every record has at least one positive field.
inline std::vector<PublicationRecord> random_corpus(std::mt19937_64& rng, std::size_t n_pubs, std::size_t num_fields,
                                                    std::size_t num_sdgs, int first_year, int last_year) {
  std::uniform_real_distribution<double> score(0.01, 1.0);
  std::bernoulli_distribution present(0.45);
  std::uniform_int_distribution<int> year(first_year, last_year);
  std::uniform_int_distribution<std::int64_t> cites(0, 500);
  std::uniform_int_distribution<std::size_t> pick(0, num_fields - 1);
  std::vector<PublicationRecord> out;
  out.reserve(n_pubs);
  for (std::size_t i = 0; i < n_pubs; ++i) {
    std::vector<double> fields(num_fields, 0.0);
    for (auto& f : fields) f = present(rng) ? score(rng) : 0.0;
    fields[pick(rng)] = score(rng);
    std::vector<double> sdgs(num_sdgs, 0.0);
    for (auto& s : sdgs) s = present(rng) ? score(rng) : 0.0;
    out.push_back(PublicationRecord{"W" + std::to_string(i), year(rng), cites(rng), std::move(fields),
                                    std::move(sdgs)});
  }
  return out;
}

// ---- filesystem ----

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("interdiv-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace interdiv::testing
