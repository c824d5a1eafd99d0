#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace interdiv {

enum class ChartKind {
  line,          // one polyline per series, broken at gaps
  stacked_area,  // series stacked in declared order; defined stacks must sum to 1
};

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<std::optional<double>> y;  // empty = gap
};

struct ChartSpec {
  ChartKind kind = ChartKind::line;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  int width = 960;
  int height = 540;
  std::uint32_t palette_seed = 0;
};

inline constexpr double kStackTolerance = 1e-6;

/// Deterministic SVG document. Throws DataError when there is no point to draw, when a value
/// is NaN (naming series and index), or when a stacked column does not sum to one.
std::string render_chart(const ChartSpec& spec);

}  // namespace interdiv
