#include <gtest/gtest.h>

#include "json.hpp"
#include <random>
#include <regex>

#include "interdiv/chart.hpp"
#include "interdiv/error.hpp"
#include "interdiv/table.hpp"
#include "support.hpp"

using namespace interdiv;
using namespace interdiv::testing;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

ChartSeries series(std::string name, std::vector<double> x, std::vector<std::optional<double>> y) {
  return ChartSeries{std::move(name), std::move(x), std::move(y)};
}

}  // namespace

// ---------------------------------------------------------------- SVG

TEST(RenderChart, FlatSeriesIsOneHorizontalPath) {
  ChartSpec spec;
  spec.series.push_back(series("flat", {2000, 2001, 2002}, {1.5, 1.5, 1.5}));
  const auto svg = render_chart(spec);
  EXPECT_EQ(count_of(svg, "<path"), 1u);
  std::smatch match;
  ASSERT_TRUE(std::regex_search(svg, match, std::regex("<path d=\"([^\"]*)\"")));
  std::regex point("[ML](\\S+) (\\S+)");
  std::set<std::string> ys;
  const std::string d = match[1];
  for (auto it = std::sregex_iterator(d.begin(), d.end(), point); it != std::sregex_iterator(); ++it) {
    ys.insert((*it)[2]);
  }
  EXPECT_EQ(ys.size(), 1u);
  EXPECT_NE(svg.find("viewBox=\"0 0 960 540\""), std::string::npos);
}

TEST(RenderChart, TwoSeriesGiveTwoPathsAndTwoLegendEntries) {
  ChartSpec spec;
  spec.series.push_back(series("Medicine", {1, 2, 3}, {1.0, 2.0, 3.0}));
  spec.series.push_back(series("Physics", {1, 2, 3}, {3.0, 2.0, 1.0}));
  const auto svg = render_chart(spec);
  EXPECT_EQ(count_of(svg, "<path"), 2u);
  const auto legend = svg.substr(svg.find("<g class=\"legend\">"));
  EXPECT_EQ(count_of(legend, "<rect"), 2u);
  EXPECT_NE(legend.find(">Medicine</text>"), std::string::npos);
  EXPECT_NE(legend.find(">Physics</text>"), std::string::npos);
}

TEST(RenderChart, GapsBreakTheLineWithoutZeros) {
  ChartSpec spec;
  spec.series.push_back(series("gappy", {1, 2, 3, 4}, {1.0, std::nullopt, 2.0, 2.5}));
  const auto svg = render_chart(spec);
  EXPECT_EQ(count_of(svg, " M"), 1u);
}

TEST(RenderChart, IsByteIdenticalAcrossRuns) {
  std::mt19937_64 rng(5);
  ChartSpec spec;
  spec.kind = ChartKind::stacked_area;
  std::vector<double> x;
  for (int y = 1970; y <= 2022; ++y) x.push_back(y);
  std::vector<std::vector<double>> cols(x.size());
  for (auto& c : cols) {
    c = {std::uniform_real_distribution<double>(0.1, 1)(rng), std::uniform_real_distribution<double>(0.1, 1)(rng),
         std::uniform_real_distribution<double>(0.1, 1)(rng)};
    const double total = c[0] + c[1] + c[2];
    for (auto& v : c) v /= total;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    ChartSeries s{"band" + std::to_string(k), x, {}};
    for (const auto& c : cols) s.y.emplace_back(c[k]);
    spec.series.push_back(s);
  }
  EXPECT_EQ(render_chart(spec), render_chart(spec));
  EXPECT_EQ(count_of(render_chart(spec), "<path"), 3u);
}

TEST(RenderChart, StackedColumnsMustSumToOne) {
  ChartSpec spec;
  spec.kind = ChartKind::stacked_area;
  spec.series.push_back(series("a", {1, 2}, {0.5, 0.6}));
  spec.series.push_back(series("b", {1, 2}, {0.5, 0.5}));
  EXPECT_THROW(render_chart(spec), DataError);
}

TEST(RenderChart, NanIsRejectedNamingSeriesAndIndex) {
  ChartSpec spec;
  spec.series.push_back(series("Geology", {1, 2, 3}, {1.0, 1.0, std::nan("")}));
  try {
    render_chart(spec);
    FAIL() << "expected a data error";
  } catch (const DataError& e) {
    const std::string message = e.what();
    EXPECT_NE(message.find("Geology"), std::string::npos) << message;
    EXPECT_NE(message.find('2'), std::string::npos) << message;
  }
}

TEST(RenderChart, NothingToPlotIsDataError) {
  ChartSpec spec;
  EXPECT_THROW(render_chart(spec), DataError);
  spec.series.push_back(series("empty", {}, {}));
  EXPECT_THROW(render_chart(spec), DataError);
}

TEST(RenderChart, EscapesMarkupInLabels) {
  ChartSpec spec;
  spec.title = "A & B <C>";
  spec.series.push_back(series("x", {1, 2}, {1.0, 2.0}));
  const auto svg = render_chart(spec);
  EXPECT_NE(svg.find("A &amp; B &lt;C&gt;"), std::string::npos);
}

// ---------------------------------------------------------------- tables

TEST(ExportTable, OnePointSeriesIsTwoLines) {
  Table table{{"year", "delta"}, {{std::int64_t{2001}, 1.25}}};
  EXPECT_EQ(to_csv(table), "year,delta\n2001,1.25\n");
}

TEST(ExportTable, NumbersUseTheShortestExactForm) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(1.25e-7), "1.25e-07");
}

TEST(ExportTable, JsonIsAnArrayOfRowObjectsWithNullGaps) {
  Table table{{"year", "all", "label"}, {{std::int64_t{2000}, 2.5, std::string("x")}, {std::int64_t{2001}, {}, std::string("y")}}};
  const auto doc = nlohmann::json::parse(to_json(table));
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc[0]["year"], 2000);
  EXPECT_EQ(doc[0]["all"], 2.5);
  EXPECT_TRUE(doc[1]["all"].is_null());
}

TEST(ExportTable, CsvRoundTripIsExact) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Table table{{"year", "value"}, {}};
  for (int i = 0; i < 500; ++i) table.rows.push_back({std::int64_t{1970 + i % 53}, u(rng)});
  TempDir dir;
  export_table(table, ExportFormat::csv, dir / "series.csv", "interdiv test");
  const auto back = read_csv_table(dir / "series.csv");
  ASSERT_EQ(back.columns, table.columns);
  ASSERT_EQ(back.rows.size(), table.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    EXPECT_EQ(std::get<std::int64_t>(back.rows[i][0]), std::get<std::int64_t>(table.rows[i][0]));
    const double original = std::get<double>(table.rows[i][1]);
    EXPECT_EQ(*cell_as_double(back.rows[i][1]), original);
  }
}

TEST(ExportTable, EmptySeriesAndUnwritablePathAreDataErrors) {
  TempDir dir;
  EXPECT_THROW(export_table(Table{{"a"}, {}}, ExportFormat::csv, dir / "x.csv"), DataError);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.csv"));
  Table one{{"a"}, {{1.0}}};
  EXPECT_THROW(export_table(one, ExportFormat::csv, "/nonexistent-dir/deeper/x.csv"), DataError);
}

TEST(ExportTable, JsonMetadataGoesToASidecar) {
  TempDir dir;
  Table one{{"a"}, {{1.0}}};
  export_table(one, ExportFormat::json, dir / "x.json", "interdiv meta");
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir / "x.json")).is_array());
  EXPECT_NE(slurp(dir / "x.json.meta").find("interdiv meta"), std::string::npos);
}
