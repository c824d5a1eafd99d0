#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interdiv/corpus.hpp"
#include "interdiv/metrics.hpp"

namespace interdiv {

/// Everything derived from one year's slice: its distance matrix and every publication's
/// effective number (empty for publications whose field scores are all zero).
struct YearAnalysis {
  YearSlice slice;
  DistanceMatrix distances;
  std::vector<std::optional<double>> deltas;
  std::size_t skipped_empty_profiles = 0;
};

YearAnalysis analyze_year(YearSlice slice, std::size_t num_fields = kNumFields);

/// Per-year analyses over a year range, computed in parallel and ordered by year.
class CorpusAnalysis {
 public:
  /// `threads == 0` uses the hardware concurrency.
  static CorpusAnalysis build(std::span<const PublicationRecord> records, YearRange range, unsigned threads = 0);

  [[nodiscard]] YearRange range() const noexcept { return range_; }
  [[nodiscard]] std::size_t num_fields() const noexcept { return num_fields_; }
  [[nodiscard]] std::size_t num_sdgs() const noexcept { return num_sdgs_; }
  [[nodiscard]] const std::map<int, YearAnalysis>& years() const noexcept { return years_; }
  [[nodiscard]] const YearAnalysis* year(int y) const;
  [[nodiscard]] std::size_t ignored_out_of_range() const noexcept { return ignored_; }
  [[nodiscard]] std::size_t duplicates() const noexcept { return duplicates_; }

 private:
  YearRange range_;
  std::size_t num_fields_ = kNumFields;
  std::size_t num_sdgs_ = kNumSdgs;
  std::map<int, YearAnalysis> years_;
  std::size_t ignored_ = 0;
  std::size_t duplicates_ = 0;
};

struct FieldTrendPoint {
  std::size_t field;  // 0-based
  int year;
  double delta;
  std::size_t n_pubs;
};

/// Mean effective number over publications with a strictly positive score for `field`,
/// using the supplied distance matrix. Empty when no publication qualifies.
std::optional<FieldTrendPoint> field_interdisciplinarity(std::span<const PublicationRecord> slice, int year,
                                                         std::size_t field, const DistanceMatrix& distances);

std::vector<FieldTrendPoint> field_trend_series(const CorpusAnalysis& analysis, std::size_t field);
std::vector<FieldTrendPoint> field_trend_series(std::span<const PublicationRecord> records, std::size_t field,
                                                YearRange range);

struct SdgSharePoint {
  int year;
  std::vector<double> shares;  // one per field
};

struct SdgShareSeries {
  std::size_t sdg;  // 0-based
  ShareAxis axis;
  std::vector<SdgSharePoint> points;
  std::vector<int> gap_years;  // years in range with zero mass for the SDG
};

SdgShareSeries sdg_share_series(const CorpusAnalysis& analysis, std::size_t sdg, ShareAxis axis);
SdgShareSeries sdg_share_series(std::span<const PublicationRecord> records, std::size_t sdg, YearRange range,
                                ShareAxis axis);

struct SdgTrendPoint {
  std::size_t sdg;
  int year;
  double weighted_delta;
  double total_weight;
  std::size_t n_pubs;
};

struct SdgTrendSeries {
  std::size_t sdg;
  double threshold;
  std::vector<SdgTrendPoint> points;
  std::vector<int> omitted_years;  // qualifying publications existed but carried zero citation weight
};

inline constexpr double kDefaultSdgThreshold = 0.5;

/// Citation-weighted mean effective number over publications whose raw SDG score is
/// strictly above `threshold`. Throws InvalidThresholdError outside [0,1].
SdgTrendSeries sdg_interdisciplinarity_series(const CorpusAnalysis& analysis, std::size_t sdg,
                                              double threshold = kDefaultSdgThreshold);
SdgTrendSeries sdg_interdisciplinarity_series(std::span<const PublicationRecord> records, std::size_t sdg,
                                              YearRange range, double threshold = kDefaultSdgThreshold);

struct TrendSample {
  double year;
  double value;
};

struct TrendFit {
  double slope = 0.0;
  double intercept = 0.0;
  double p_value = 1.0;
  double r_squared = 0.0;
  double first_year = 0.0;
  double last_year = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares of value on year with a two-sided t-test on the slope (n - 2 dof).
/// Throws DegenerateFitError for fewer than 3 points or a single distinct year.
TrendFit ols_trend(std::span<const TrendSample> points);

enum class TrendGranularity {
  yearly_mean,  // regress the per-year field means
  pooled,       // regress every publication-level value on its year
};

struct FieldTrendDetail {
  std::size_t field;
  std::optional<TrendFit> pre;   // [range.first, split_year)
  std::optional<TrendFit> post;  // [split_year, range.last]
  bool declining_pre = false;
  bool rising_post = false;
};

struct SignificantTrends {
  std::size_t n_declining_pre = 0;
  std::size_t n_rising_post = 0;
  std::vector<FieldTrendDetail> detail;
};

inline constexpr int kDefaultSplitYear = 2000;
inline constexpr double kDefaultTrendAlpha = 0.001;

/// Windows with fewer than three usable points get no fit and never count.
SignificantTrends count_significant_trends(const CorpusAnalysis& analysis, int split_year = kDefaultSplitYear,
                                           double alpha = kDefaultTrendAlpha,
                                           TrendGranularity granularity = TrendGranularity::yearly_mean);

struct IdrSharePoint {
  int year;
  std::optional<double> overall;  // percent; empty when the total is zero
  std::array<std::optional<double>, kNumDomains> domains{};
};

struct IdrShareSeries {
  std::vector<IdrSharePoint> points;
  std::vector<std::string> mismatches;  // stored percentages deviating by more than the tolerance
};

inline constexpr double kPercentTolerance = 1e-6;

/// Recomputes 100 * count / total for the overall and per-domain columns and checks them against
/// the stored percentages. Throws InconsistentRowError when a count exceeds its total.
IdrShareSeries idr_share_series(std::span<const TermCountRow> rows, double tolerance = kPercentTolerance);

}  // namespace interdiv
