#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "interdiv/error.hpp"
#include "interdiv/metrics.hpp"
#include "support.hpp"

using namespace interdiv;
using namespace interdiv::testing;

namespace {

std::vector<double> entries_of(const std::vector<std::vector<double>>& d) {
  std::vector<double> flat;
  for (const auto& row : d) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

DistanceMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) d[a][b] = d[b][a] = u(rng);
  }
  return DistanceMatrix::from_entries(0, n, entries_of(d));
}

std::vector<double> random_profile(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.3);
  std::vector<double> raw(n);
  for (auto& v : raw) v = zero(rng) ? 0.0 : u(rng);
  raw[rng() % n] = 0.5 + u(rng) / 2;
  return raw;
}

double delta(std::span<const double> raw, const DistanceMatrix& d) {
  return publication_interdisciplinarity(normalize_affinities(raw), d).value();
}

}  // namespace

// ---------------------------------------------------------------- normalization

TEST(NormalizeAffinities, ScalesToUnitSum) {
  const std::vector<double> raw{0.6, 0.3, 0.3};
  const auto p = normalize_affinities(raw);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  EXPECT_DOUBLE_EQ(p[2], 0.25);
}

TEST(NormalizeAffinities, RejectsAllZeroAndNegative) {
  const std::vector<double> zeros(5, 0.0);
  EXPECT_THROW(normalize_affinities(zeros), EmptyProfileError);
  const std::vector<double> negative{0.5, -0.1};
  EXPECT_THROW(normalize_affinities(negative), RangeError);
  const std::vector<double> nan{0.5, std::nan("")};
  EXPECT_THROW(normalize_affinities(nan), RangeError);
}

// ---------------------------------------------------------------- Jaccard

TEST(JaccardDistance, SetExamples) {
  EXPECT_DOUBLE_EQ(jaccard_distance({"a", "b"}, {"a", "b"}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard_distance({"a"}, {"b"}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard_distance({"a", "b", "c"}, {"b", "c", "d"}), 0.5);
  EXPECT_THROW(jaccard_distance(std::set<std::string>{}, std::set<std::string>{}), UndefinedDistanceError);
  EXPECT_THROW(jaccard_distance(3, 2), InvalidDiversityArgument);
}

TEST(BuildDistanceMatrix, FivePublicationSlice) {
  const auto slice = five_publication_slice();
  const auto d = build_distance_matrix(2001, slice);
  ASSERT_EQ(d.size(), kNumFields);
  EXPECT_EQ(d.year(), 2001);
  EXPECT_DOUBLE_EQ(d(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(d(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(d(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(d(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(d(1, 3), 0.75);
  EXPECT_DOUBLE_EQ(d(2, 3), 0.75);
  // Fields 4..18 have no members; every pair touching two of them is undefined.
  EXPECT_DOUBLE_EQ(d(0, 10), 1.0);
  EXPECT_DOUBLE_EQ(d(7, 10), 1.0);
  const std::size_t silent = kNumFields - 4;
  EXPECT_EQ(d.empty_union_pairs().size(), silent * (silent - 1) / 2);
}

TEST(BuildDistanceMatrix, DuplicateIdsCountOnce) {
  auto slice = five_publication_slice();
  slice.push_back(slice.front());
  const auto d = build_distance_matrix(2001, slice);
  EXPECT_DOUBLE_EQ(d(0, 1), 0.5);
}

TEST(BuildDistanceMatrix, EmptySliceThrows) {
  EXPECT_THROW(build_distance_matrix(2001, std::span<const PublicationRecord>{}), InvalidDiversityArgument);
}

TEST(DistanceMatrix, FromEntriesValidates) {
  EXPECT_THROW(DistanceMatrix::from_entries(0, 2, {0.0, 0.5, 0.4, 0.0}), InvalidDiversityArgument);
  EXPECT_THROW(DistanceMatrix::from_entries(0, 2, {0.1, 0.5, 0.5, 0.0}), InvalidDiversityArgument);
  EXPECT_THROW(DistanceMatrix::from_entries(0, 2, {0.0, 1.5, 1.5, 0.0}), InvalidDiversityArgument);
  EXPECT_THROW(DistanceMatrix::from_entries(0, 2, {0.0, 0.5}), InvalidDiversityArgument);
  EXPECT_NO_THROW(DistanceMatrix::from_entries(0, 2, {0.0, 0.5, 0.5, 0.0}));
}

// ---------------------------------------------------------------- effective number

TEST(PublicationInterdisciplinarity, SingleFieldIsOne) {
  std::mt19937_64 rng(7);
  const auto d = random_matrix(rng, kNumFields);
  const auto raw = padded({1.0});
  EXPECT_NEAR(delta(raw, d), 1.0, 1e-12);
}

TEST(PublicationInterdisciplinarity, TwoDisjointFieldsIsTwo) {
  const auto d = DistanceMatrix::from_entries(0, 2, {0.0, 1.0, 1.0, 0.0});
  const std::vector<double> raw{0.5, 0.5};
  EXPECT_NEAR(delta(raw, d), 2.0, 1e-12);
}

TEST(PublicationInterdisciplinarity, ThreeFieldHandExample) {
  const auto d = DistanceMatrix::from_entries(0, 3, {0.0, 0.9, 0.8, 0.9, 0.0, 0.4, 0.8, 0.4, 0.0});
  const std::vector<double> raw{0.5, 0.3, 0.2};
  const auto p = normalize_affinities(raw);
  EXPECT_NEAR(rao_stirling(p, d), 0.478, 1e-15);
  EXPECT_NEAR(publication_interdisciplinarity(p, d).value(), 1.9157088122605364, 1e-12);
}

TEST(PublicationInterdisciplinarity, FivePublicationOracleValues) {
  const auto slice = five_publication_slice();
  const auto d = build_distance_matrix(2001, slice);
  // Exact rational values: 121/103, 4/3, 121/78, 3/2, 1.
  const std::vector<double> expected{121.0 / 103.0, 4.0 / 3.0, 121.0 / 78.0, 1.5, 1.0};
  for (std::size_t i = 0; i < slice.size(); ++i) {
    EXPECT_NEAR(delta(slice[i].field_scores, d), expected[i], 1e-12) << slice[i].work_id;
  }
}

TEST(PublicationInterdisciplinarity, SizeMismatchThrows) {
  const auto d = DistanceMatrix::zero(0, 3);
  const std::vector<double> raw{1.0, 1.0};
  EXPECT_THROW(delta(raw, d), InvalidDiversityArgument);
}

// ---------------------------------------------------------------- properties

TEST(MetricsProperty, GeneratedMatricesAreSymmetricZeroDiagonalInRange) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nf = 1 + rng() % 6;
    const auto corpus = random_corpus(rng, 1 + rng() % 60, nf, 2, 2000, 2000);
    const auto d = build_distance_matrix(2000, corpus, nf);
    for (std::size_t a = 0; a < nf; ++a) {
      ASSERT_EQ(d(a, a), 0.0);
      for (std::size_t b = 0; b < nf; ++b) {
        ASSERT_EQ(d(a, b), d(b, a));
        ASSERT_GE(d(a, b), 0.0);
        ASSERT_LE(d(a, b), 1.0);
      }
    }
  }
}

TEST(MetricsProperty, DeltaBoundsAndRaoStirlingIdentity) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_matrix(rng, kNumFields);
    const auto raw = random_profile(rng, kNumFields);
    const auto p = normalize_affinities(raw);
    const double rs = rao_stirling(p, d);
    const double value = publication_interdisciplinarity(p, d).value();
    ASSERT_GE(value, 1.0);
    ASSERT_LE(value, static_cast<double>(kNumFields));
    ASSERT_NEAR(value, 1.0 / (1.0 - rs), 1e-12);
  }
}

TEST(MetricsProperty, ZeroMatrixGivesOneAndShrinkingDistancesNeverIncreaseDelta) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 8;
    const auto d = random_matrix(rng, n);
    const auto raw = random_profile(rng, n);
    ASSERT_EQ(delta(raw, DistanceMatrix::zero(0, n)), 1.0);
    const double base = delta(raw, d);
    for (double lambda : {1.0, 0.9, 0.5, 0.1}) {
      std::vector<double> scaled(d.entries().begin(), d.entries().end());
      for (auto& v : scaled) v *= lambda;
      const double shrunk = delta(raw, DistanceMatrix::from_entries(0, n, scaled));
      ASSERT_GE(shrunk, 1.0);
      ASSERT_LE(shrunk, base + 1e-15);
    }
  }
}

TEST(MetricsProperty, SplittingAFieldIntoTwoIdenticalHalvesLeavesDeltaUnchanged) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const auto d = random_matrix(rng, n);
    const auto raw = random_profile(rng, n);
    const std::size_t split = rng() % n;

    // Field `split` becomes fields `split` and `n`, each with half the weight.
    const std::size_t m = n + 1;
    std::vector<double> split_raw(raw);
    split_raw[split] = raw[split] / 2;
    split_raw.push_back(raw[split] / 2);
    std::vector<double> split_d(m * m, 0.0);
    auto origin = [&](std::size_t i) { return i == n ? split : i; };
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) split_d[a * m + b] = d(origin(a), origin(b));
    }
    ASSERT_NEAR(delta(split_raw, DistanceMatrix::from_entries(0, m, split_d)), delta(raw, d), 1e-9);
  }
}

TEST(MetricsProperty, FieldRelabelingLeavesEveryDeltaUnchanged) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nf = 2 + rng() % 4;
    auto corpus = random_corpus(rng, 1 + rng() % 50, nf, 1, 1999, 1999);
    std::vector<std::size_t> perm(nf);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    auto permuted = corpus;
    for (auto& r : permuted) {
      std::vector<double> f(nf);
      for (std::size_t a = 0; a < nf; ++a) f[perm[a]] = r.field_scores[a];
      r.field_scores = f;
    }
    const auto d = build_distance_matrix(1999, corpus, nf);
    const auto dp = build_distance_matrix(1999, permuted, nf);
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < nf; ++b) ASSERT_EQ(dp(perm[a], perm[b]), d(a, b));
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      ASSERT_EQ(delta(permuted[i].field_scores, dp), delta(corpus[i].field_scores, d));
    }
  }
}

TEST(MetricsProperty, BruteForceEquivalenceOnRandomCorpora) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t nf = 1 + rng() % 5;
    const auto corpus = random_corpus(rng, 1 + rng() % 100, nf, 1, 2010, 2010);
    const auto d = build_distance_matrix(2010, corpus, nf);
    const auto oracle = oracle_distances(corpus, nf);
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < nf; ++b) ASSERT_NEAR(d(a, b), oracle[a][b], 1e-12);
    }
    for (const auto& r : corpus) ASSERT_NEAR(delta(r.field_scores, d), oracle_delta(r.field_scores, oracle), 1e-12);
  }
}

// ---------------------------------------------------------------- SDG accumulation and shares

TEST(ContributionShares, TwoByTwoPerSdg) {
  const auto acc = ContributionAccumulator::from_cells(2000, 2, 2, {3.0, 1.0, 1.0, 1.0});
  const auto shares = contribution_shares(acc, ShareAxis::per_sdg);
  EXPECT_DOUBLE_EQ(shares(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(shares(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(shares(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(shares(1, 1), 0.5);
}

TEST(ContributionShares, TwoByTwoPerField) {
  const auto acc = ContributionAccumulator::from_cells(2000, 2, 2, {3.0, 1.0, 1.0, 1.0});
  const auto shares = contribution_shares(acc, ShareAxis::per_field);
  EXPECT_DOUBLE_EQ(shares(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(shares(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(shares(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(shares(1, 1), 0.5);
}

TEST(ContributionShares, ZeroColumnIsFlaggedNotFilled) {
  const auto acc = ContributionAccumulator::from_cells(2000, 2, 3, {1.0, 0.0, 2.0, 1.0, 0.0, 2.0});
  const auto shares = contribution_shares(acc, ShareAxis::per_sdg);
  EXPECT_TRUE(shares.is_zero_slice(1));
  EXPECT_FALSE(shares.is_zero_slice(0));
  EXPECT_EQ(shares(0, 1), 0.0);
  EXPECT_EQ(shares(1, 1), 0.0);
}

TEST(AccumulateSdgMass, CitationWeightedAffinity) {
  // Enumeration oracle: a[A][m] = sum over publications positive in both of c * s_m.
  const std::vector<PublicationRecord> slice{
      make_record("a", 2000, 4, {0.7, 0.0}, {0.5, 0.0}),
      make_record("b", 2000, 2, {0.2, 0.9}, {0.25, 1.0}),
      make_record("c", 2000, 0, {1.0, 1.0}, {1.0, 1.0}),
  };
  const auto acc = accumulate_sdg_mass(2000, slice, 2, 2);
  EXPECT_DOUBLE_EQ(acc(0, 0), 4 * 0.5 + 2 * 0.25);
  EXPECT_DOUBLE_EQ(acc(0, 1), 2 * 1.0);
  EXPECT_DOUBLE_EQ(acc(1, 0), 2 * 0.25);
  EXPECT_DOUBLE_EQ(acc(1, 1), 2 * 1.0);
}

TEST(AccumulateSdgMass, SingleMembershipOwnsTheWholeShare) {
  const std::vector<PublicationRecord> slice{
      make_record("only", 2005, 9, padded({0.0, 0.0, 0.3}), padded({0.0, 0.0, 0.8}, kNumSdgs))};
  const auto shares = contribution_shares(accumulate_sdg_mass(2005, slice), ShareAxis::per_sdg);
  EXPECT_DOUBLE_EQ(shares(2, 2), 1.0);
}

TEST(MetricsProperty, ShareConservation) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nf = 1 + rng() % 6;
    const std::size_t ns = 1 + rng() % 6;
    const auto corpus = random_corpus(rng, 1 + rng() % 40, nf, ns, 2000, 2000);
    const auto acc = accumulate_sdg_mass(2000, corpus, nf, ns);
    for (auto axis : {ShareAxis::per_field, ShareAxis::per_sdg}) {
      const auto shares = contribution_shares(acc, axis);
      const std::size_t outer = axis == ShareAxis::per_field ? nf : ns;
      const std::size_t inner = axis == ShareAxis::per_field ? ns : nf;
      for (std::size_t i = 0; i < outer; ++i) {
        if (shares.is_zero_slice(i)) continue;
        double total = 0.0;
        for (std::size_t j = 0; j < inner; ++j) total += axis == ShareAxis::per_field ? shares(i, j) : shares(j, i);
        ASSERT_NEAR(total, 1.0, 1e-9);
      }
    }
  }
}

TEST(ShareAxis, ParsesBothSpellings) {
  EXPECT_EQ(parse_share_axis("per-field"), ShareAxis::per_field);
  EXPECT_EQ(parse_share_axis("per-sdg"), ShareAxis::per_sdg);
  EXPECT_EQ(to_string(ShareAxis::per_sdg), "per-sdg");
  EXPECT_THROW(parse_share_axis("columns"), ConfigError);
}
