#include "interdiv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "interdiv/error.hpp"
#include "interdiv/stats.hpp"
#include "interdiv/summation.hpp"
#include "parallel.hpp"

namespace interdiv {

YearAnalysis analyze_year(YearSlice slice, std::size_t num_fields) {
  DistanceMatrix distances = build_distance_matrix(slice.year(), slice.records(), num_fields);
  std::vector<std::optional<double>> deltas;
  deltas.reserve(slice.size());
  std::size_t skipped = 0;
  for (const auto& record : slice.records()) {
    try {
      const auto profile = normalize_affinities(record.field_scores);
      deltas.emplace_back(publication_interdisciplinarity(profile, distances).value());
    } catch (const EmptyProfileError&) {
      deltas.emplace_back(std::nullopt);
      ++skipped;
    }
  }
  return YearAnalysis{std::move(slice), std::move(distances), std::move(deltas), skipped};
}

CorpusAnalysis CorpusAnalysis::build(std::span<const PublicationRecord> records, YearRange range, unsigned threads) {
  if (range.empty()) throw EmptyRangeError();
  CorpusAnalysis analysis;
  analysis.range_ = range;

  auto partition = partition_by_year(records, range);
  analysis.ignored_ = partition.ignored_out_of_range;
  analysis.duplicates_ = partition.duplicates;
  if (!partition.slices.empty()) {
    const auto& first = partition.slices.begin()->second.records().front();
    analysis.num_fields_ = first.field_scores.size();
    analysis.num_sdgs_ = first.sdg_scores.size();
  }

  std::vector<YearSlice> slices;
  slices.reserve(partition.slices.size());
  for (auto& [year, slice] : partition.slices) slices.push_back(std::move(slice));

  std::vector<std::optional<YearAnalysis>> results(slices.size());
  detail::parallel_for(slices.size(), threads, [&](std::size_t i) {
    results[i].emplace(analyze_year(std::move(slices[i]), analysis.num_fields_));
  });
  for (auto& result : results) {
    const int year = result->slice.year();
    analysis.years_.emplace(year, std::move(*result));
  }
  return analysis;
}

const YearAnalysis* CorpusAnalysis::year(int y) const {
  const auto it = years_.find(y);
  return it == years_.end() ? nullptr : &it->second;
}

namespace {

void check_field(std::size_t field, std::size_t num_fields) {
  if (field >= num_fields) {
    throw ConfigError("field index " + std::to_string(field + 1) + " outside 1.." + std::to_string(num_fields));
  }
}

void check_sdg(std::size_t sdg, std::size_t num_sdgs) {
  if (sdg >= num_sdgs) {
    throw ConfigError("SDG index " + std::to_string(sdg + 1) + " outside 1.." + std::to_string(num_sdgs));
  }
}

std::optional<FieldTrendPoint> mean_for_field(const YearAnalysis& ya, std::size_t field) {
  CompensatedSum total;
  std::size_t n = 0;
  const auto records = ya.slice.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].field_scores[field] > 0.0 && ya.deltas[i]) {
      total.add(*ya.deltas[i]);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return FieldTrendPoint{field, ya.slice.year(), total.value() / static_cast<double>(n), n};
}

}  // namespace

std::optional<FieldTrendPoint> field_interdisciplinarity(std::span<const PublicationRecord> slice, int year,
                                                         std::size_t field, const DistanceMatrix& distances) {
  check_field(field, distances.size());
  CompensatedSum total;
  std::size_t n = 0;
  for (const auto& record : slice) {
    if (record.year != year || record.field_scores.size() != distances.size()) {
      throw InvalidDiversityArgument("record " + record.work_id + " does not belong to this year's matrix");
    }
    if (!(record.field_scores[field] > 0.0)) continue;
    const auto profile = normalize_affinities(record.field_scores);
    total.add(publication_interdisciplinarity(profile, distances).value());
    ++n;
  }
  if (n == 0) return std::nullopt;
  return FieldTrendPoint{field, year, total.value() / static_cast<double>(n), n};
}

std::vector<FieldTrendPoint> field_trend_series(const CorpusAnalysis& analysis, std::size_t field) {
  check_field(field, analysis.num_fields());
  std::vector<FieldTrendPoint> series;
  for (const auto& [year, ya] : analysis.years()) {
    if (auto point = mean_for_field(ya, field)) series.push_back(*point);
  }
  return series;
}

std::vector<FieldTrendPoint> field_trend_series(std::span<const PublicationRecord> records, std::size_t field,
                                                YearRange range) {
  return field_trend_series(CorpusAnalysis::build(records, range), field);
}

SdgShareSeries sdg_share_series(const CorpusAnalysis& analysis, std::size_t sdg, ShareAxis axis) {
  check_sdg(sdg, analysis.num_sdgs());
  SdgShareSeries series{sdg, axis, {}, {}};
  const auto range = analysis.range();
  for (int year = range.first; year <= range.last; ++year) {
    const auto* ya = analysis.year(year);
    if (ya == nullptr) {
      series.gap_years.push_back(year);
      continue;
    }
    const auto acc = accumulate_sdg_mass(year, ya->slice.records(), analysis.num_fields(), analysis.num_sdgs());
    const auto shares = contribution_shares(acc, axis);
    SdgSharePoint point{year, std::vector<double>(analysis.num_fields())};
    bool any = false;
    for (std::size_t f = 0; f < analysis.num_fields(); ++f) {
      point.shares[f] = shares(f, sdg);
      any = any || point.shares[f] > 0.0;
    }
    if (!any) {
      series.gap_years.push_back(year);
      continue;
    }
    series.points.push_back(std::move(point));
  }
  return series;
}

SdgShareSeries sdg_share_series(std::span<const PublicationRecord> records, std::size_t sdg, YearRange range,
                                ShareAxis axis) {
  return sdg_share_series(CorpusAnalysis::build(records, range), sdg, axis);
}

SdgTrendSeries sdg_interdisciplinarity_series(const CorpusAnalysis& analysis, std::size_t sdg, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidThresholdError("invalid threshold " + std::to_string(threshold) + " (must lie in [0,1])");
  }
  check_sdg(sdg, analysis.num_sdgs());
  SdgTrendSeries series{sdg, threshold, {}, {}};
  for (const auto& [year, ya] : analysis.years()) {
    CompensatedSum weighted;
    CompensatedSum weights;
    std::size_t n = 0;
    const auto records = ya.slice.records();
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!(records[i].sdg_scores[sdg] > threshold) || !ya.deltas[i]) continue;
      const auto c = static_cast<double>(records[i].citations);
      weighted.add(c * *ya.deltas[i]);
      weights.add(c);
      ++n;
    }
    if (n == 0) continue;
    const double total = weights.value();
    if (total <= 0.0) {
      series.omitted_years.push_back(year);
      continue;
    }
    series.points.push_back(SdgTrendPoint{sdg, year, weighted.value() / total, total, n});
  }
  return series;
}

SdgTrendSeries sdg_interdisciplinarity_series(std::span<const PublicationRecord> records, std::size_t sdg,
                                              YearRange range, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidThresholdError("invalid threshold " + std::to_string(threshold) + " (must lie in [0,1])");
  }
  return sdg_interdisciplinarity_series(CorpusAnalysis::build(records, range), sdg, threshold);
}

TrendFit ols_trend(std::span<const TrendSample> points) {
  const std::size_t n = points.size();
  if (n < 3) throw DegenerateFitError("degenerate fit: need at least 3 points, got " + std::to_string(n));

  CompensatedSum sum_x;
  CompensatedSum sum_y;
  for (const auto& p : points) {
    if (!std::isfinite(p.year) || !std::isfinite(p.value)) throw DegenerateFitError("degenerate fit: non-finite point");
    sum_x.add(p.year);
    sum_y.add(p.value);
  }
  const double dn = static_cast<double>(n);
  const double mean_x = sum_x.value() / dn;
  const double mean_y = sum_y.value() / dn;

  CompensatedSum sxx;
  CompensatedSum sxy;
  CompensatedSum syy;
  for (const auto& p : points) {
    const double dx = p.year - mean_x;
    const double dy = p.value - mean_y;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() <= 0.0) throw DegenerateFitError("degenerate fit: all years are equal");

  const auto [min_it, max_it] =
      std::minmax_element(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
  TrendFit fit;
  fit.first_year = min_it->year;
  fit.last_year = max_it->year;
  fit.n_points = n;

  const bool constant = std::all_of(points.begin(), points.end(),
                                    [&](const TrendSample& p) { return p.value == points.front().value; });
  if (constant) {
    fit.slope = 0.0;
    fit.intercept = points.front().value;
    fit.p_value = 1.0;
    fit.r_squared = 0.0;
    return fit;
  }

  fit.slope = sxy.value() / sxx.value();
  fit.intercept = mean_y - fit.slope * mean_x;

  CompensatedSum sse;
  for (const auto& p : points) {
    const double residual = (p.value - mean_y) - fit.slope * (p.year - mean_x);
    sse.add(residual * residual);
  }
  const double dof = dn - 2.0;
  const double residual_ss = sse.value();
  fit.r_squared = std::clamp(1.0 - residual_ss / syy.value(), 0.0, 1.0);
  if (residual_ss <= 0.0) {
    fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
    return fit;
  }
  const double standard_error = std::sqrt(residual_ss / dof / sxx.value());
  fit.p_value = std::clamp(stats::student_t_two_sided_p(fit.slope / standard_error, dof), 0.0, 1.0);
  return fit;
}

SignificantTrends count_significant_trends(const CorpusAnalysis& analysis, int split_year, double alpha,
                                           TrendGranularity granularity) {
  SignificantTrends result;
  for (std::size_t field = 0; field < analysis.num_fields(); ++field) {
    std::vector<TrendSample> pre;
    std::vector<TrendSample> post;
    auto add = [&](int year, double value) {
      if (year < split_year) {
        pre.push_back({static_cast<double>(year), value});
      } else {
        post.push_back({static_cast<double>(year), value});
      }
    };

    if (granularity == TrendGranularity::yearly_mean) {
      for (const auto& point : field_trend_series(analysis, field)) add(point.year, point.delta);
    } else {
      for (const auto& [year, ya] : analysis.years()) {
        const auto records = ya.slice.records();
        for (std::size_t i = 0; i < records.size(); ++i) {
          if (records[i].field_scores[field] > 0.0 && ya.deltas[i]) add(year, *ya.deltas[i]);
        }
      }
    }

    auto fit_window = [](const std::vector<TrendSample>& samples) -> std::optional<TrendFit> {
      try {
        return ols_trend(samples);
      } catch (const DegenerateFitError&) {
        return std::nullopt;
      }
    };

    FieldTrendDetail detail{field, fit_window(pre), fit_window(post)};
    detail.declining_pre = detail.pre && detail.pre->slope < 0.0 && detail.pre->p_value < alpha;
    detail.rising_post = detail.post && detail.post->slope > 0.0 && detail.post->p_value < alpha;
    result.n_declining_pre += detail.declining_pre ? 1 : 0;
    result.n_rising_post += detail.rising_post ? 1 : 0;
    result.detail.push_back(detail);
  }
  return result;
}

IdrShareSeries idr_share_series(std::span<const TermCountRow> rows, double tolerance) {
  IdrShareSeries series;
  auto ratio = [](std::int64_t count, std::int64_t total) -> std::optional<double> {
    if (total == 0) return std::nullopt;
    return 100.0 * static_cast<double>(count) / static_cast<double>(total);
  };
  auto verify = [&](int year, const std::string& column, const std::optional<double>& computed,
                    const std::optional<double>& stored) {
    if (!computed || !stored) return;
    if (std::fabs(*computed - *stored) > tolerance) {
      series.mismatches.push_back(std::to_string(year) + " " + column + ": stored " + std::to_string(*stored) +
                                  ", recomputed " + std::to_string(*computed));
    }
  };

  for (const auto& row : rows) {
    if (row.idr > row.works) {
      throw InconsistentRowError("inconsistent row " + std::to_string(row.year) + ": nIDR exceeds nwork");
    }
    IdrSharePoint point{row.year, ratio(row.idr, row.works), {}};
    verify(row.year, "%nIDR", point.overall, row.idr_percent);
    for (std::size_t d = 0; d < kNumDomains; ++d) {
      if (row.domain_idr[d] > row.domain_works[d]) {
        throw InconsistentRowError("inconsistent row " + std::to_string(row.year) + ": nIDR" + std::to_string(d + 1) +
                                   " exceeds nwork" + std::to_string(d + 1));
      }
      point.domains[d] = ratio(row.domain_idr[d], row.domain_works[d]);
      verify(row.year, "%nIDR" + std::to_string(d + 1), point.domains[d], row.domain_idr_percent[d]);
    }
    series.points.push_back(point);
  }
  return series;
}

}  // namespace interdiv
