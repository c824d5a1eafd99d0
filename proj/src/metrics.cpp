#include "interdiv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_set>

#include "interdiv/error.hpp"
#include "interdiv/summation.hpp"

namespace interdiv {

AffinityProfile normalize_affinities(std::span<const double> raw) {
  // Summing in ascending order makes the result independent of field labelling.
  std::vector<double> ordered(raw.begin(), raw.end());
  for (double v : ordered) {
    if (!std::isfinite(v) || v < 0.0) {
      throw RangeError("affinity score must be finite and non-negative, got " + std::to_string(v));
    }
  }
  std::sort(ordered.begin(), ordered.end());
  const double sum = compensated_sum(ordered);
  if (sum <= 0.0) throw EmptyProfileError();

  std::vector<double> weights(raw.size());
  std::transform(raw.begin(), raw.end(), weights.begin(), [sum](double v) { return v / sum; });
  return AffinityProfile(std::move(weights));
}

DistanceMatrix DistanceMatrix::zero(int year, std::size_t num_fields) {
  return DistanceMatrix(year, num_fields, std::vector<double>(num_fields * num_fields, 0.0));
}

DistanceMatrix DistanceMatrix::from_entries(int year, std::size_t num_fields, std::vector<double> row_major) {
  if (row_major.size() != num_fields * num_fields) {
    throw InvalidDiversityArgument("distance matrix needs " + std::to_string(num_fields * num_fields) +
                                   " entries, got " + std::to_string(row_major.size()));
  }
  for (std::size_t a = 0; a < num_fields; ++a) {
    if (row_major[a * num_fields + a] != 0.0) {
      throw InvalidDiversityArgument("distance matrix diagonal must be exactly 0");
    }
    for (std::size_t b = 0; b < num_fields; ++b) {
      const double d = row_major[a * num_fields + b];
      if (!(d >= 0.0 && d <= 1.0)) throw InvalidDiversityArgument("distance outside [0,1]");
      if (d != row_major[b * num_fields + a]) throw InvalidDiversityArgument("distance matrix is not symmetric");
    }
  }
  return DistanceMatrix(year, num_fields, std::move(row_major));
}

double jaccard_distance(std::size_t n_intersection, std::size_t n_union) {
  if (n_union == 0) throw UndefinedDistanceError();
  if (n_intersection > n_union) {
    throw InvalidDiversityArgument("intersection larger than union");
  }
  return 1.0 - static_cast<double>(n_intersection) / static_cast<double>(n_union);
}

double jaccard_distance(const std::set<std::string>& members_a, const std::set<std::string>& members_b) {
  std::size_t shared = 0;
  auto ia = members_a.begin();
  auto ib = members_b.begin();
  while (ia != members_a.end() && ib != members_b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return jaccard_distance(shared, members_a.size() + members_b.size() - shared);
}

DistanceMatrix build_distance_matrix(int year, std::span<const PublicationRecord> slice, std::size_t num_fields) {
  if (slice.empty()) throw InvalidDiversityArgument("cannot build a distance matrix from an empty slice");

  // Per-field membership counts and pairwise co-membership counts (upper triangle).
  std::vector<std::size_t> members(num_fields, 0);
  std::vector<std::size_t> shared(num_fields * num_fields, 0);
  std::vector<std::size_t> positive;
  positive.reserve(num_fields);
  std::unordered_set<std::string_view> seen;

  for (const auto& record : slice) {
    if (!seen.insert(record.work_id).second) continue;
    if (record.field_scores.size() != num_fields) {
      throw InvalidDiversityArgument("record " + record.work_id + " has " +
                                     std::to_string(record.field_scores.size()) + " field scores, expected " +
                                     std::to_string(num_fields));
    }
    positive.clear();
    for (std::size_t f = 0; f < num_fields; ++f) {
      if (record.field_scores[f] > 0.0) positive.push_back(f);
    }
    for (std::size_t i = 0; i < positive.size(); ++i) {
      ++members[positive[i]];
      for (std::size_t j = i + 1; j < positive.size(); ++j) {
        ++shared[positive[i] * num_fields + positive[j]];
      }
    }
  }

  std::vector<double> entries(num_fields * num_fields, 0.0);
  std::vector<EmptyUnionPair> empty_pairs;
  for (std::size_t a = 0; a < num_fields; ++a) {
    for (std::size_t b = a + 1; b < num_fields; ++b) {
      const std::size_t n_cap = shared[a * num_fields + b];
      const std::size_t n_cup = members[a] + members[b] - n_cap;
      double d = 1.0;
      if (n_cup == 0) {
        empty_pairs.push_back({a, b});
      } else {
        d = jaccard_distance(n_cap, n_cup);
      }
      entries[a * num_fields + b] = d;
      entries[b * num_fields + a] = d;
    }
  }

  DistanceMatrix matrix(year, num_fields, std::move(entries));
  matrix.empty_pairs_ = std::move(empty_pairs);
  return matrix;
}

double rao_stirling(const AffinityProfile& profile, const DistanceMatrix& distances) {
  if (profile.size() != distances.size()) {
    throw InvalidDiversityArgument("profile has " + std::to_string(profile.size()) + " fields, distance matrix " +
                                   std::to_string(distances.size()));
  }
  const auto p = profile.weights();
  std::vector<double> terms;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] == 0.0) continue;
    const auto row = distances.row(a);
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (p[b] == 0.0 || row[b] == 0.0) continue;
      terms.push_back(p[a] * p[b] * row[b]);
    }
  }
  std::sort(terms.begin(), terms.end());
  return compensated_sum(terms);
}

InterdisciplinarityScore publication_interdisciplinarity(const AffinityProfile& profile,
                                                         const DistanceMatrix& distances) {
  const double rs = rao_stirling(profile, distances);
  if (!(rs >= 0.0 && rs < 1.0)) {
    throw InvalidDiversityArgument("invalid diversity argument: quadratic diversity " + std::to_string(rs) +
                                   " outside [0,1)");
  }
  return InterdisciplinarityScore(1.0 / (1.0 - rs));
}

ContributionAccumulator::ContributionAccumulator(int year, std::size_t num_fields, std::size_t num_sdgs)
    : year_(year), num_fields_(num_fields), num_sdgs_(num_sdgs), cells_(num_fields * num_sdgs, 0.0) {}

ContributionAccumulator ContributionAccumulator::from_cells(int year, std::size_t num_fields, std::size_t num_sdgs,
                                                            std::vector<double> row_major) {
  if (row_major.size() != num_fields * num_sdgs) {
    throw RangeError("accumulator needs " + std::to_string(num_fields * num_sdgs) + " cells");
  }
  for (double v : row_major) {
    if (!std::isfinite(v) || v < 0.0) throw RangeError("accumulator cells must be finite and non-negative");
  }
  ContributionAccumulator acc(year, num_fields, num_sdgs);
  acc.cells_ = std::move(row_major);
  return acc;
}

ContributionAccumulator accumulate_sdg_mass(int year, std::span<const PublicationRecord> slice,
                                            std::size_t num_fields, std::size_t num_sdgs) {
  std::vector<CompensatedSum> sums(num_fields * num_sdgs);
  std::vector<std::size_t> fields;
  for (const auto& record : slice) {
    if (record.field_scores.size() != num_fields || record.sdg_scores.size() != num_sdgs) {
      throw InvalidDiversityArgument("record " + record.work_id + " has mismatched score vector sizes");
    }
    if (record.citations < 0) throw RangeError("record " + record.work_id + " has negative citations");
    const auto weight = static_cast<double>(record.citations);
    fields.clear();
    for (std::size_t f = 0; f < num_fields; ++f) {
      if (record.field_scores[f] > 0.0) fields.push_back(f);
    }
    for (std::size_t m = 0; m < num_sdgs; ++m) {
      const double affinity = record.sdg_scores[m];
      if (!(affinity > 0.0)) continue;
      const double mass = weight * affinity;
      for (std::size_t f : fields) sums[f * num_sdgs + m].add(mass);
    }
  }
  std::vector<double> cells(sums.size());
  std::transform(sums.begin(), sums.end(), cells.begin(), [](const CompensatedSum& s) { return s.value(); });
  return ContributionAccumulator::from_cells(year, num_fields, num_sdgs, std::move(cells));
}

std::string_view to_string(ShareAxis axis) noexcept {
  return axis == ShareAxis::per_field ? "per-field" : "per-sdg";
}

ShareAxis parse_share_axis(std::string_view text) {
  if (text == "per-field") return ShareAxis::per_field;
  if (text == "per-sdg") return ShareAxis::per_sdg;
  throw ConfigError("unknown share axis '" + std::string(text) + "' (expected per-field or per-sdg)");
}

bool ShareMatrix::is_zero_slice(std::size_t index) const {
  return std::find(zero_slices_.begin(), zero_slices_.end(), index) != zero_slices_.end();
}

ShareMatrix contribution_shares(const ContributionAccumulator& acc, ShareAxis axis) {
  const std::size_t nf = acc.num_fields();
  const std::size_t ns = acc.num_sdgs();
  ShareMatrix result(acc.year(), axis, nf, ns);

  if (axis == ShareAxis::per_field) {
    for (std::size_t f = 0; f < nf; ++f) {
      CompensatedSum total;
      for (std::size_t m = 0; m < ns; ++m) total.add(acc(f, m));
      const double t = total.value();
      if (t <= 0.0) {
        result.zero_slices_.push_back(f);
        continue;
      }
      for (std::size_t m = 0; m < ns; ++m) result.shares_[f * ns + m] = acc(f, m) / t;
    }
  } else {
    for (std::size_t m = 0; m < ns; ++m) {
      CompensatedSum total;
      for (std::size_t f = 0; f < nf; ++f) total.add(acc(f, m));
      const double t = total.value();
      if (t <= 0.0) {
        result.zero_slices_.push_back(m);
        continue;
      }
      for (std::size_t f = 0; f < nf; ++f) result.shares_[f * ns + m] = acc(f, m) / t;
    }
  }
  return result;
}

}  // namespace interdiv
