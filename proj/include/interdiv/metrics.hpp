#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interdiv/record.hpp"
#include "interdiv/taxonomy.hpp"

namespace interdiv {

/// A publication's disciplinary composition: non-negative weights summing to one.
class AffinityProfile {
 public:
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return weights_[i]; }

 private:
  friend AffinityProfile normalize_affinities(std::span<const double> raw);
  explicit AffinityProfile(std::vector<double> weights) : weights_(std::move(weights)) {}

  std::vector<double> weights_;
};

/// Divides raw scores by their (compensated) sum.
/// Throws EmptyProfileError when every score is zero and RangeError on negative or non-finite input.
AffinityProfile normalize_affinities(std::span<const double> raw);

/// A field pair whose membership union was empty in the year; its distance defaults to 1.
struct EmptyUnionPair {
  std::size_t a;
  std::size_t b;

  friend bool operator==(const EmptyUnionPair&, const EmptyUnionPair&) = default;
};

/// Symmetric field-distance matrix with zero diagonal and entries in [0,1].
class DistanceMatrix {
 public:
  /// All-zero matrix (every field identical to every other).
  static DistanceMatrix zero(int year, std::size_t num_fields);

  /// Validates symmetry, zero diagonal and range; throws InvalidDiversityArgument otherwise.
  static DistanceMatrix from_entries(int year, std::size_t num_fields, std::vector<double> row_major);

  [[nodiscard]] int year() const noexcept { return year_; }
  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double operator()(std::size_t a, std::size_t b) const { return entries_[a * n_ + b]; }
  [[nodiscard]] std::span<const double> row(std::size_t a) const {
    return std::span<const double>(entries_).subspan(a * n_, n_);
  }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
  [[nodiscard]] const std::vector<EmptyUnionPair>& empty_union_pairs() const noexcept { return empty_pairs_; }

 private:
  friend DistanceMatrix build_distance_matrix(int, std::span<const PublicationRecord>, std::size_t);

  DistanceMatrix(int year, std::size_t n, std::vector<double> entries)
      : year_(year), n_(n), entries_(std::move(entries)) {}

  int year_;
  std::size_t n_;
  std::vector<double> entries_;
  std::vector<EmptyUnionPair> empty_pairs_;
};

/// Effective number of disciplines; always within [1, number of fields].
class InterdisciplinarityScore {
 public:
  explicit InterdisciplinarityScore(double value) noexcept : value_(value) {}
  [[nodiscard]] double value() const noexcept { return value_; }

 private:
  double value_;
};

/// 1 - |A ∩ B| / |A ∪ B|. Throws UndefinedDistanceError when both sets are empty.
double jaccard_distance(const std::set<std::string>& members_a, const std::set<std::string>& members_b);

/// Same measure from precomputed counts.
double jaccard_distance(std::size_t n_intersection, std::size_t n_union);

/// Pairwise Jaccard distances over per-field membership sets of the slice, where a
/// publication belongs to a field when its raw score is strictly positive.
/// The slice must be non-empty, deduplicated, and every record must carry `num_fields` scores.
DistanceMatrix build_distance_matrix(int year, std::span<const PublicationRecord> slice,
                                     std::size_t num_fields = kNumFields);

/// Quadratic diversity sum_A sum_B p_A p_B d_AB.
double rao_stirling(const AffinityProfile& profile, const DistanceMatrix& distances);

/// (1 - rao_stirling)^-1.
InterdisciplinarityScore publication_interdisciplinarity(const AffinityProfile& profile,
                                                         const DistanceMatrix& distances);

/// Citation-weighted SDG affinity mass per (field, SDG) cell for one year.
class ContributionAccumulator {
 public:
  ContributionAccumulator(int year, std::size_t num_fields, std::size_t num_sdgs);

  /// Throws RangeError on negative or non-finite cells.
  static ContributionAccumulator from_cells(int year, std::size_t num_fields, std::size_t num_sdgs,
                                            std::vector<double> row_major);

  [[nodiscard]] int year() const noexcept { return year_; }
  [[nodiscard]] std::size_t num_fields() const noexcept { return num_fields_; }
  [[nodiscard]] std::size_t num_sdgs() const noexcept { return num_sdgs_; }
  [[nodiscard]] double operator()(std::size_t field, std::size_t sdg) const {
    return cells_[field * num_sdgs_ + sdg];
  }
  [[nodiscard]] std::span<const double> cells() const noexcept { return cells_; }

 private:
  int year_;
  std::size_t num_fields_;
  std::size_t num_sdgs_;
  std::vector<double> cells_;
};

/// cell[A][m] = sum of c_i * a_i(m) over publications positive in both field A and SDG m.
ContributionAccumulator accumulate_sdg_mass(int year, std::span<const PublicationRecord> slice,
                                            std::size_t num_fields = kNumFields,
                                            std::size_t num_sdgs = kNumSdgs);

enum class ShareAxis {
  per_field,  // each field row sums to one across SDGs
  per_sdg,    // each SDG column sums to one across fields
};

std::string_view to_string(ShareAxis axis) noexcept;
/// Accepts "per-field" / "per-sdg"; throws ConfigError otherwise.
ShareAxis parse_share_axis(std::string_view text);

class ShareMatrix {
 public:
  [[nodiscard]] int year() const noexcept { return year_; }
  [[nodiscard]] ShareAxis axis() const noexcept { return axis_; }
  [[nodiscard]] std::size_t num_fields() const noexcept { return num_fields_; }
  [[nodiscard]] std::size_t num_sdgs() const noexcept { return num_sdgs_; }
  [[nodiscard]] double operator()(std::size_t field, std::size_t sdg) const {
    return shares_[field * num_sdgs_ + sdg];
  }
  /// Rows (per-field) or columns (per-sdg) whose total mass was zero; they are left all-zero.
  [[nodiscard]] const std::vector<std::size_t>& zero_slices() const noexcept { return zero_slices_; }
  [[nodiscard]] bool is_zero_slice(std::size_t index) const;

 private:
  friend ShareMatrix contribution_shares(const ContributionAccumulator&, ShareAxis);
  ShareMatrix(int year, ShareAxis axis, std::size_t nf, std::size_t ns)
      : year_(year), axis_(axis), num_fields_(nf), num_sdgs_(ns), shares_(nf * ns, 0.0) {}

  int year_;
  ShareAxis axis_;
  std::size_t num_fields_;
  std::size_t num_sdgs_;
  std::vector<double> shares_;
  std::vector<std::size_t> zero_slices_;
};

ShareMatrix contribution_shares(const ContributionAccumulator& acc, ShareAxis axis);

}  // namespace interdiv
