#include "interdiv/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "interdiv/error.hpp"

namespace interdiv {

namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 220.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  std::string s(buffer);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string tick_label(double v, double step) {
  char buffer[32];
  const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  std::snprintf(buffer, sizeof buffer, "%.*f", std::clamp(decimals, 0, 6), v);
  std::string s(buffer);
  if (s.starts_with("-") && std::stod(s) == 0.0) s.erase(0, 1);
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Evenly spaced hues from a golden-ratio walk starting at the seed.
std::string colour(std::size_t index, std::uint32_t seed) {
  const double hue = std::fmod(static_cast<double>(seed % 360) + 137.508 * static_cast<double>(index), 360.0);
  const double s = 0.55;
  const double l = index % 2 == 0 ? 0.45 : 0.60;
  const double c = (1.0 - std::fabs(2.0 * l - 1.0)) * s;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = l - c / 2.0;
  char buffer[8];
  std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                static_cast<int>(std::lround((g + m) * 255)), static_cast<int>(std::lround((b + m) * 255)));
  return buffer;
}

double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double residual = raw / magnitude;
  const double nice = residual < 1.5 ? 1.0 : residual < 3.0 ? 2.0 : residual < 7.0 ? 5.0 : 10.0;
  return nice * magnitude;
}

struct Axis {
  double lo;
  double hi;
  double step;
};

Axis make_axis(double lo, double hi) {
  if (lo == hi) {
    const double pad = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double step = nice_step(hi - lo);
  return Axis{std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

}  // namespace

std::string render_chart(const ChartSpec& spec) {
  std::size_t defined = 0;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw DataError("series '" + s.name + "' has mismatched x/y lengths");
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      if (std::isnan(s.x[i]) || (s.y[i] && std::isnan(*s.y[i]))) {
        throw DataError("NaN in series '" + s.name + "' at index " + std::to_string(i));
      }
      if (s.y[i]) ++defined;
    }
  }
  if (defined == 0) throw DataError("nothing to plot: every series is empty");

  // Stacked charts: collect per-x totals over the defined values.
  std::map<double, std::vector<double>> stacks;
  if (spec.kind == ChartKind::stacked_area) {
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
      const auto& s = spec.series[k];
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!s.y[i]) continue;
        auto& column = stacks[s.x[i]];
        column.resize(spec.series.size(), 0.0);
        column[k] = *s.y[i];
      }
    }
    for (const auto& [x, column] : stacks) {
      double total = 0.0;
      for (double v : column) total += v;
      if (std::fabs(total - 1.0) > kStackTolerance) {
        throw DataError("stacked values at x=" + num(x) + " sum to " + std::to_string(total) + ", not 1");
      }
    }
  }

  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.y[i]) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, *s.y[i]);
      y_hi = std::max(y_hi, *s.y[i]);
    }
  }
  if (spec.kind == ChartKind::stacked_area) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  const Axis xa = make_axis(x_lo, x_hi);
  const Axis ya = spec.kind == ChartKind::stacked_area ? Axis{0.0, 1.0, 0.2} : make_axis(y_lo, y_hi);

  const double w = spec.width;
  const double h = spec.height;
  const double plot_w = w - kMarginLeft - kMarginRight;
  const double plot_h = h - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - xa.lo) / (xa.hi - xa.lo) * plot_w; };
  auto py = [&](double y) { return kMarginTop + plot_h - (y - ya.lo) / (ya.hi - ya.lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height << "\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    svg << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
        << "</text>\n";
  }

  svg << "<g class=\"axes\" stroke=\"#333\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop + plot_h) << "\" x2=\""
      << num(kMarginLeft + plot_w) << "\" y2=\"" << num(kMarginTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop) << "\" x2=\"" << num(kMarginLeft)
      << "\" y2=\"" << num(kMarginTop + plot_h) << "\"/>\n";
  svg << "</g>\n<g class=\"ticks\" fill=\"#333\">\n";
  const int x_ticks = static_cast<int>(std::lround((xa.hi - xa.lo) / xa.step));
  for (int i = 0; i <= x_ticks; ++i) {
    const double v = xa.lo + i * xa.step;
    svg << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(kMarginTop + plot_h) << "\" x2=\"" << num(px(v))
        << "\" y2=\"" << num(kMarginTop + plot_h + 5) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kMarginTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << tick_label(v, xa.step) << "</text>\n";
  }
  const int y_ticks = static_cast<int>(std::lround((ya.hi - ya.lo) / ya.step));
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = ya.lo + i * ya.step;
    svg << "<line x1=\"" << num(kMarginLeft - 5) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kMarginLeft)
        << "\" y2=\"" << num(py(v)) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << num(kMarginLeft - 8) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
        << tick_label(v, ya.step) << "</text>\n";
  }
  svg << "</g>\n";
  if (!spec.x_label.empty()) {
    svg << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\"" << num(h - 12)
        << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  }
  if (!spec.y_label.empty()) {
    svg << "<text transform=\"translate(16 " << num(kMarginTop + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";
  }

  svg << "<g class=\"series\">\n";
  if (spec.kind == ChartKind::line) {
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
      const auto& s = spec.series[k];
      std::vector<std::size_t> order(s.x.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
      std::string d;
      bool pen_down = false;
      for (std::size_t i : order) {
        if (!s.y[i]) {
          pen_down = false;
          continue;
        }
        d += (pen_down ? " L" : (d.empty() ? "M" : " M")) + num(px(s.x[i])) + ' ' + num(py(*s.y[i]));
        pen_down = true;
      }
      if (d.empty()) continue;
      svg << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << colour(k, spec.palette_seed)
          << "\" stroke-width=\"1.5\"><title>" << escape(s.name) << "</title></path>\n";
    }
  } else {
    // Contiguous runs of defined x positions; each series contributes one band polygon per run.
    std::vector<std::vector<double>> runs;
    std::vector<double> all_x;
    for (const auto& s : spec.series) all_x.insert(all_x.end(), s.x.begin(), s.x.end());
    std::sort(all_x.begin(), all_x.end());
    all_x.erase(std::unique(all_x.begin(), all_x.end()), all_x.end());
    for (double x : all_x) {
      if (stacks.count(x) != 0) {
        if (runs.empty()) runs.emplace_back();
        runs.back().push_back(x);
      } else if (!runs.empty() && !runs.back().empty()) {
        runs.emplace_back();
      }
    }
    for (std::size_t k = 0; k < spec.series.size(); ++k) {
      std::string d;
      for (const auto& run : runs) {
        if (run.empty()) continue;
        std::vector<std::pair<double, double>> lower;
        std::vector<std::pair<double, double>> upper;
        for (double x : run) {
          const auto& column = stacks.at(x);
          double below = 0.0;
          for (std::size_t j = 0; j < k; ++j) below += column[j];
          lower.emplace_back(x, below);
          upper.emplace_back(x, below + column[k]);
        }
        if (run.size() == 1) {
          // A single defined x is drawn as a thin sliver so it stays visible.
          const double half = xa.step * 0.02;
          d += (d.empty() ? "M" : " M") + num(px(run[0] - half)) + ' ' + num(py(lower[0].second)) + " L" +
               num(px(run[0] - half)) + ' ' + num(py(upper[0].second)) + " L" + num(px(run[0] + half)) + ' ' +
               num(py(upper[0].second)) + " L" + num(px(run[0] + half)) + ' ' + num(py(lower[0].second)) + " Z";
          continue;
        }
        d += (d.empty() ? "M" : " M") + num(px(upper[0].first)) + ' ' + num(py(upper[0].second));
        for (std::size_t i = 1; i < upper.size(); ++i) d += " L" + num(px(upper[i].first)) + ' ' + num(py(upper[i].second));
        for (std::size_t i = lower.size(); i-- > 0;) d += " L" + num(px(lower[i].first)) + ' ' + num(py(lower[i].second));
        d += " Z";
      }
      if (d.empty()) continue;
      svg << "<path d=\"" << d << "\" fill=\"" << colour(k, spec.palette_seed) << "\" stroke=\"none\"><title>"
          << escape(spec.series[k].name) << "</title></path>\n";
    }
  }
  svg << "</g>\n";

  svg << "<g class=\"legend\">\n";
  const double lx = kMarginLeft + plot_w + 16;
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const double ly = kMarginTop + 8 + static_cast<double>(k) * 18;
    svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 9) << "\" width=\"12\" height=\"12\" fill=\""
        << colour(k, spec.palette_seed) << "\"/><text x=\"" << num(lx + 18) << "\" y=\"" << num(ly + 1) << "\">"
        << escape(spec.series[k].name) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace interdiv
