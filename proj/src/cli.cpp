#include "interdiv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "interdiv/analysis.hpp"
#include "interdiv/chart.hpp"
#include "interdiv/error.hpp"
#include "interdiv/http.hpp"
#include "interdiv/openalex.hpp"
#include "interdiv/table.hpp"
#include "interdiv/taxonomy.hpp"

namespace interdiv::cli {

namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string today_utc() {
  const auto days = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  const std::chrono::year_month_day ymd{days};
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buffer;
}

std::string field_label(std::size_t index) {
  return index < kFields.size() ? std::string(kFields[index].name) : "field " + std::to_string(index + 1);
}

/// Shared state of one invocation.
class Session {
 public:
  Session(const RunConfig& config, std::ostream& out, std::ostream& err) : config_(config), out_(out), err_(err) {}

  [[nodiscard]] YearRange years() const {
    const auto range = YearRange::parse(config_.years);
    if (range.empty()) throw EmptyRangeError();
    return range;
  }

  [[nodiscard]] std::optional<std::string> meta(const std::string& input_digest, bool fetched = false) const {
    if (config_.no_meta) return std::nullopt;
    std::string line = std::string("interdiv ") + kVersion + " input_sha256=" + input_digest;
    if (fetched) line += " retrieved=" + today_utc();
    return line;
  }

  [[nodiscard]] std::string input_digest() const {
    if (config_.input.empty()) throw ConfigError("--input is required");
    return sha256_hex(read_bytes(config_.input));
  }

  [[nodiscard]] ExportFormat table_format() const {
    if (config_.format == "csv") return ExportFormat::csv;
    if (config_.format == "json") return ExportFormat::json;
    throw ConfigError("format '" + config_.format + "' not available here (csv or json)");
  }

  [[nodiscard]] bool wants_svg() const {
    if (config_.format == "svg") return true;
    (void)table_format();
    return false;
  }

  fs::path output_path(const std::string& stem, const std::string& extension) const {
    std::error_code ec;
    fs::create_directories(config_.output_dir, ec);
    if (ec) throw DataError("cannot create output directory " + config_.output_dir.string());
    return config_.output_dir / (stem + "." + extension);
  }

  void emit_table(const Table& table, const std::string& stem, const std::optional<std::string>& meta_line) const {
    const auto format = table_format();
    const auto path = output_path(stem, format == ExportFormat::csv ? "csv" : "json");
    export_table(table, format, path, meta_line);
    out_ << path.string() << "\n";
  }

  void emit_svg(const ChartSpec& spec, const std::string& stem, const std::optional<std::string>& meta_line) const {
    std::string svg = render_chart(spec);
    if (meta_line) svg = "<!-- " + *meta_line + " -->\n" + svg;
    const auto path = output_path(stem, "svg");
    write_file_atomic(path, svg);
    out_ << path.string() << "\n";
  }

  ChartSpec chart(ChartKind kind, std::string title, std::string x_label, std::string y_label) const {
    ChartSpec spec;
    spec.kind = kind;
    spec.title = std::move(title);
    spec.x_label = std::move(x_label);
    spec.y_label = std::move(y_label);
    spec.width = config_.width;
    spec.height = config_.height;
    spec.palette_seed = config_.palette_seed;
    return spec;
  }

  std::vector<std::size_t> selected_fields(std::size_t num_fields) const {
    if (config_.field < 0 || config_.field > static_cast<int>(num_fields)) {
      throw ConfigError("--field must lie in 1.." + std::to_string(num_fields));
    }
    if (config_.field > 0) return {static_cast<std::size_t>(config_.field - 1)};
    std::vector<std::size_t> all(num_fields);
    for (std::size_t i = 0; i < num_fields; ++i) all[i] = i;
    return all;
  }

  std::vector<std::size_t> selected_sdgs(std::size_t num_sdgs) const {
    if (config_.sdg < 0 || config_.sdg > static_cast<int>(num_sdgs)) {
      throw ConfigError("--sdg must lie in 1.." + std::to_string(num_sdgs));
    }
    if (config_.sdg > 0) return {static_cast<std::size_t>(config_.sdg - 1)};
    std::vector<std::size_t> all(num_sdgs);
    for (std::size_t i = 0; i < num_sdgs; ++i) all[i] = i;
    return all;
  }

  CorpusAnalysis analyze(const std::vector<PublicationRecord>& records) const {
    auto analysis = CorpusAnalysis::build(records, years(), config_.threads);
    if (analysis.years().empty()) throw DataError("no publications within " + config_.years);
    std::size_t skipped = 0;
    for (const auto& [year, ya] : analysis.years()) skipped += ya.skipped_empty_profiles;
    if (skipped > 0) err_ << "note: " << skipped << " publications with all-zero field scores skipped\n";
    if (analysis.duplicates() > 0) err_ << "note: " << analysis.duplicates() << " duplicate work ids dropped\n";
    if (analysis.ignored_out_of_range() > 0) {
      err_ << "note: " << analysis.ignored_out_of_range() << " records outside " << config_.years << " ignored\n";
    }
    return analysis;
  }

  const RunConfig& config() const { return config_; }
  std::ostream& out() const { return out_; }
  std::ostream& err() const { return err_; }

 private:
  const RunConfig& config_;
  std::ostream& out_;
  std::ostream& err_;
};

// --- subcommands ---

int cmd_distances(const Session& s) {
  const auto digest = s.input_digest();
  const auto records = load_corpus_csv(s.config().input);
  const auto analysis = s.analyze(records);
  const auto meta = s.meta(digest);
  std::size_t empty_pairs = 0;
  for (const auto& [year, ya] : analysis.years()) {
    const auto& d = ya.distances;
    Table table;
    table.columns.emplace_back("field");
    for (std::size_t b = 0; b < d.size(); ++b) table.columns.push_back("discip" + std::to_string(b + 1));
    for (std::size_t a = 0; a < d.size(); ++a) {
      std::vector<Cell> row{std::string("discip" + std::to_string(a + 1))};
      for (std::size_t b = 0; b < d.size(); ++b) row.emplace_back(d(a, b));
      table.rows.push_back(std::move(row));
    }
    empty_pairs += d.empty_union_pairs().size();
    s.emit_table(table, "distances_" + std::to_string(year), meta);
  }
  if (empty_pairs > 0) {
    s.err() << "note: " << empty_pairs << " field pairs had no members in their year; distance set to 1\n";
  }
  return kSuccess;
}

DistanceMatrix load_distance_matrix(const fs::path& path, int year, std::size_t num_fields) {
  const auto table = read_csv_table(path);
  if (table.columns.size() != num_fields + 1 || table.rows.size() != num_fields) {
    throw SchemaError("schema error: " + path.string() + " is not a " + std::to_string(num_fields) + "x" +
                      std::to_string(num_fields) + " distance table");
  }
  std::vector<double> entries;
  entries.reserve(num_fields * num_fields);
  for (const auto& row : table.rows) {
    for (std::size_t b = 1; b < row.size(); ++b) {
      const auto v = cell_as_double(row[b]);
      if (!v) throw ParseError("parse error: non-numeric distance in " + path.string());
      entries.push_back(*v);
    }
  }
  return DistanceMatrix::from_entries(year, num_fields, std::move(entries));
}

int cmd_pub_index(const Session& s) {
  const auto digest = s.input_digest();
  const auto records = load_corpus_csv(s.config().input);
  Table table{{"idwork", "pyear", "delta", "rao_stirling"}, {}};
  std::size_t skipped = 0;

  auto add_slice = [&](std::span<const PublicationRecord> slice, const DistanceMatrix& d) {
    for (const auto& r : slice) {
      try {
        const auto profile = normalize_affinities(r.field_scores);
        const double rs = rao_stirling(profile, d);
        const double delta = publication_interdisciplinarity(profile, d).value();
        table.rows.push_back({r.work_id, static_cast<std::int64_t>(r.year), delta, rs});
      } catch (const EmptyProfileError&) {
        ++skipped;
      }
    }
  };

  if (!s.config().distances_dir.empty()) {
    const auto partition = partition_by_year(records, s.years());
    for (const auto& [year, slice] : partition.slices) {
      const auto path = s.config().distances_dir / ("distances_" + std::to_string(year) + ".csv");
      if (!fs::exists(path)) throw DataError("missing distance table " + path.string());
      add_slice(slice.records(), load_distance_matrix(path, year, kNumFields));
    }
  } else {
    const auto analysis = s.analyze(records);
    for (const auto& [year, ya] : analysis.years()) add_slice(ya.slice.records(), ya.distances);
  }
  if (skipped > 0) s.err() << "note: " << skipped << " publications with all-zero field scores skipped\n";
  if (table.rows.empty()) throw DataError("no publication has a defined interdisciplinarity index");
  s.emit_table(table, "pub_index", s.meta(digest));
  return kSuccess;
}

int cmd_field_trend(const Session& s) {
  const auto digest = s.input_digest();
  const bool svg = s.wants_svg();
  const auto records = load_corpus_csv(s.config().input);
  const auto analysis = s.analyze(records);

  Table table{{"field", "year", "delta", "n_pubs"}, {}};
  auto spec = s.chart(ChartKind::line, "Interdisciplinarity index by field", "Publication year",
                      "Effective number of disciplines");
  for (std::size_t field : s.selected_fields(analysis.num_fields())) {
    ChartSeries series{field_label(field), {}, {}};
    for (const auto& p : field_trend_series(analysis, field)) {
      table.rows.push_back({static_cast<std::int64_t>(field + 1), static_cast<std::int64_t>(p.year), p.delta,
                            static_cast<std::int64_t>(p.n_pubs)});
      series.x.push_back(p.year);
      series.y.emplace_back(p.delta);
    }
    spec.series.push_back(std::move(series));
  }
  if (table.rows.empty()) throw DataError("field trend series is empty");
  if (svg) {
    s.emit_svg(spec, "field_trend", s.meta(digest));
  } else {
    s.emit_table(table, "field_trend", s.meta(digest));
  }
  return kSuccess;
}

void verify_share_rows(const fs::path& path, std::size_t first_share_column) {
  const auto table = read_csv_table(path);
  for (const auto& row : table.rows) {
    double total = 0.0;
    for (std::size_t i = first_share_column; i < row.size(); ++i) total += cell_as_double(row[i]).value_or(0.0);
    if (std::fabs(total - 1.0) > 1e-9) {
      throw std::runtime_error("post-write check failed: shares in " + path.string() + " sum to " +
                               std::to_string(total));
    }
  }
}

int cmd_sdg_shares(const Session& s) {
  const auto digest = s.input_digest();
  const bool svg = s.wants_svg();
  const auto axis = parse_share_axis(s.config().axis);
  const auto records = load_corpus_csv(s.config().input);
  const auto analysis = s.analyze(records);
  const auto meta = s.meta(digest);

  for (std::size_t sdg : s.selected_sdgs(analysis.num_sdgs())) {
    const auto series = sdg_share_series(analysis, sdg, axis);
    const std::string stem = "sdg" + std::to_string(sdg + 1) + "_shares";
    if (!series.gap_years.empty()) {
      s.err() << "note: SDG " << sdg + 1 << " has no contribution mass in " << series.gap_years.size()
              << " year(s)\n";
    }
    if (series.points.empty()) {
      if (s.config().sdg > 0) throw DataError("SDG " + std::to_string(sdg + 1) + " has no contribution mass");
      continue;
    }
    if (svg) {
      auto spec = s.chart(axis == ShareAxis::per_sdg ? ChartKind::stacked_area : ChartKind::line,
                          "SDG " + std::to_string(sdg + 1) + " contribution shares (" +
                              std::string(to_string(axis)) + ")",
                          "Publication year", "Share");
      for (std::size_t f = 0; f < analysis.num_fields(); ++f) {
        ChartSeries cs{field_label(f), {}, {}};
        for (const auto& p : series.points) {
          cs.x.push_back(p.year);
          cs.y.emplace_back(p.shares[f]);
        }
        spec.series.push_back(std::move(cs));
      }
      s.emit_svg(spec, stem, meta);
      continue;
    }
    Table table;
    table.columns.emplace_back("year");
    for (std::size_t f = 0; f < analysis.num_fields(); ++f) table.columns.push_back("discip" + std::to_string(f + 1));
    for (const auto& p : series.points) {
      std::vector<Cell> row{static_cast<std::int64_t>(p.year)};
      for (double v : p.shares) row.emplace_back(v);
      table.rows.push_back(std::move(row));
    }
    s.emit_table(table, stem, meta);
    if (axis == ShareAxis::per_sdg && s.table_format() == ExportFormat::csv) {
      verify_share_rows(s.output_path(stem, "csv"), 1);
    }
  }
  return kSuccess;
}

int cmd_sdg_trend(const Session& s) {
  const auto digest = s.input_digest();
  const bool svg = s.wants_svg();
  if (!(s.config().threshold >= 0.0 && s.config().threshold <= 1.0)) {
    throw InvalidThresholdError("invalid threshold: --threshold must lie in [0,1]");
  }
  const auto records = load_corpus_csv(s.config().input);
  const auto analysis = s.analyze(records);

  Table table{{"sdg", "year", "weighted_delta", "total_weight", "n_pubs"}, {}};
  auto spec = s.chart(ChartKind::line, "Citation-weighted interdisciplinarity by SDG", "Publication year",
                      "Effective number of disciplines");
  for (std::size_t sdg : s.selected_sdgs(analysis.num_sdgs())) {
    const auto series = sdg_interdisciplinarity_series(analysis, sdg, s.config().threshold);
    if (!series.omitted_years.empty()) {
      s.err() << "note: SDG " << sdg + 1 << ": " << series.omitted_years.size()
              << " year(s) omitted for zero citation weight\n";
    }
    ChartSeries cs{"SDG " + std::to_string(sdg + 1), {}, {}};
    for (const auto& p : series.points) {
      table.rows.push_back({static_cast<std::int64_t>(sdg + 1), static_cast<std::int64_t>(p.year), p.weighted_delta,
                            p.total_weight, static_cast<std::int64_t>(p.n_pubs)});
      cs.x.push_back(p.year);
      cs.y.emplace_back(p.weighted_delta);
    }
    spec.series.push_back(std::move(cs));
  }
  if (table.rows.empty()) throw DataError("SDG trend series is empty");
  if (svg) {
    s.emit_svg(spec, "sdg_trend", s.meta(digest));
  } else {
    s.emit_table(table, "sdg_trend", s.meta(digest));
  }
  return kSuccess;
}

int cmd_idr_share(const Session& s) {
  const auto digest = s.input_digest();
  const bool svg = s.wants_svg();
  const auto rows = load_term_counts_csv(s.config().input);
  const auto series = idr_share_series(rows);
  if (!series.mismatches.empty()) {
    for (const auto& m : series.mismatches) s.err() << "mismatch: " << m << "\n";
    throw DataError(std::to_string(series.mismatches.size()) + " stored percentages disagree with their counts");
  }
  const std::vector<std::string> names{"all", "life_sciences", "social_sciences", "physical_sciences",
                                       "health_sciences"};
  Table table{{"year"}, {}};
  table.columns.insert(table.columns.end(), names.begin(), names.end());
  auto spec = s.chart(ChartKind::line, "Publications mentioning interdisciplinarity", "Publication year",
                      "Share of publications (%)");
  spec.series.push_back({"All", {}, {}});
  for (auto name : kDomainNames) spec.series.push_back({std::string(name), {}, {}});

  auto cell = [](const std::optional<double>& v) -> Cell { return v ? Cell{*v} : Cell{std::monostate{}}; };
  for (const auto& p : series.points) {
    std::vector<Cell> row{static_cast<std::int64_t>(p.year), cell(p.overall)};
    spec.series[0].x.push_back(p.year);
    spec.series[0].y.push_back(p.overall);
    for (std::size_t d = 0; d < kNumDomains; ++d) {
      row.push_back(cell(p.domains[d]));
      spec.series[d + 1].x.push_back(p.year);
      spec.series[d + 1].y.push_back(p.domains[d]);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw DataError("term-count table has no rows");
  if (svg) {
    s.emit_svg(spec, "idr_share", s.meta(digest));
  } else {
    s.emit_table(table, "idr_share", s.meta(digest));
  }
  return kSuccess;
}

int cmd_regress(const Session& s) {
  const auto digest = s.input_digest();
  const auto records = load_corpus_csv(s.config().input);
  const auto analysis = s.analyze(records);
  const auto granularity = s.config().pooled ? TrendGranularity::pooled : TrendGranularity::yearly_mean;
  const auto result = count_significant_trends(analysis, s.config().split_year, s.config().alpha, granularity);

  Table table{{"field", "window", "slope", "intercept", "p_value", "r_squared", "first_year", "last_year",
               "n_points", "significant"},
              {}};
  for (const auto& d : result.detail) {
    auto add = [&](const char* window, const std::optional<TrendFit>& fit, bool significant) {
      std::vector<Cell> row{static_cast<std::int64_t>(d.field + 1), std::string(window)};
      if (fit) {
        row.insert(row.end(), {fit->slope, fit->intercept, fit->p_value, fit->r_squared,
                               static_cast<std::int64_t>(fit->first_year), static_cast<std::int64_t>(fit->last_year),
                               static_cast<std::int64_t>(fit->n_points)});
      } else {
        row.insert(row.end(), 7, Cell{std::monostate{}});
      }
      row.emplace_back(static_cast<std::int64_t>(significant ? 1 : 0));
      table.rows.push_back(std::move(row));
    };
    add("pre", d.pre, d.declining_pre);
    add("post", d.post, d.rising_post);
  }
  s.emit_table(table, "regress", s.meta(digest));
  s.out() << "declining_pre=" << result.n_declining_pre << " rising_post=" << result.n_rising_post << "\n";
  return kSuccess;
}

std::string series_label(const std::string& column) {
  if (column.starts_with("discip")) {
    try {
      const auto k = std::stoul(column.substr(6));
      if (k >= 1 && k <= kNumFields) return std::string(kFields[k - 1].name);
    } catch (const std::exception&) {
    }
  }
  return column;
}

int cmd_plot(const Session& s) {
  if (s.config().input.empty()) throw ConfigError("--input is required");
  const auto digest = s.input_digest();
  ChartKind kind;
  if (s.config().kind == "line") {
    kind = ChartKind::line;
  } else if (s.config().kind == "stacked") {
    kind = ChartKind::stacked_area;
  } else {
    throw ConfigError("--kind must be line or stacked");
  }
  const auto table = read_csv_table(s.config().input);
  if (table.columns.size() < 2) throw DataError("plot input needs at least two columns");
  auto spec = s.chart(kind, s.config().input.stem().string(), table.columns[0] == "field" || table.columns[0] == "sdg"
                                                                  ? "year"
                                                                  : table.columns[0],
                      "");

  const bool long_form = (table.columns[0] == "field" || table.columns[0] == "sdg") && table.column_index("year");
  if (long_form) {
    const std::size_t year_col = *table.column_index("year");
    std::size_t value_col = year_col + 1;
    if (!s.config().value_column.empty()) {
      const auto idx = table.column_index(s.config().value_column);
      if (!idx) throw ConfigError("no column named " + s.config().value_column);
      value_col = *idx;
    }
    if (value_col >= table.columns.size()) throw DataError("plot input has no value column");
    spec.y_label = table.columns[value_col];
    std::map<std::int64_t, std::size_t> series_of_key;
    for (const auto& row : table.rows) {
      const auto* key = std::get_if<std::int64_t>(&row[0]);
      const auto x = cell_as_double(row[year_col]);
      if (key == nullptr || !x) throw DataError("plot input has a malformed row");
      auto [it, inserted] = series_of_key.emplace(*key, spec.series.size());
      if (inserted) {
        spec.series.push_back({table.columns[0] == "field" && *key >= 1 && *key <= static_cast<std::int64_t>(kNumFields)
                                   ? std::string(kFields[*key - 1].name)
                                   : table.columns[0] + " " + std::to_string(*key),
                               {},
                               {}});
      }
      auto& series = spec.series[it->second];
      series.x.push_back(*x);
      series.y.push_back(cell_as_double(row[value_col]));
    }
  } else {
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
      ChartSeries series{series_label(table.columns[c]), {}, {}};
      for (const auto& row : table.rows) {
        const auto x = cell_as_double(row[0]);
        if (!x) throw DataError("plot input has a non-numeric x value");
        series.x.push_back(*x);
        series.y.push_back(cell_as_double(row[c]));
      }
      spec.series.push_back(std::move(series));
    }
  }
  s.emit_svg(spec, s.config().input.stem().string(), s.meta(digest));
  return kSuccess;
}

int cmd_fetch(const Session& s) {
  const auto& config = s.config();
  const auto range = s.years();

  std::shared_ptr<HttpTransport> transport;
  if (!config.fixtures_dir.empty()) {
    transport = std::make_shared<FixtureTransport>(config.fixtures_dir);
  } else {
    transport = std::make_shared<LiveTransport>();
  }
  if (!config.record_dir.empty()) transport = std::make_shared<RecordingTransport>(transport, config.record_dir);

  openalex::OpenAlexClient::Options options;
  options.max_in_flight = config.concurrency;
  if (!config.fixtures_dir.empty()) options.min_request_interval = std::chrono::milliseconds(0);
  openalex::OpenAlexClient client(transport, options);

  std::string request_description = config.what + " " + config.years;
  std::ostringstream buffer;
  std::string stem;
  if (config.what == "corpus") {
    std::vector<openalex::FetchSpec> specs;
    for (std::size_t field : s.selected_fields(kNumFields)) {
      for (int year = range.first; year <= range.last; ++year) {
        openalex::FetchSpec spec;
        spec.field_concept_id = std::string(kFields[field].concept_id);
        spec.year = year;
        spec.per_page = config.per_page;
        spec.max_records = config.max_records;
        spec.contact_email = config.mailto;
        specs.push_back(spec);
      }
      request_description += " " + std::string(kFields[field].concept_id);
    }
    const auto records = client.fetch_many(specs);
    write_corpus_csv(buffer, records);
    stem = "corpus";
    s.err() << "fetched " << records.size() << " records\n";
  } else if (config.what == "terms") {
    std::vector<TermCountRow> rows;
    for (int year = range.first; year <= range.last; ++year) {
      TermCountRow row;
      row.year = year;
      const auto overall = client.count_term_prevalence({year, std::nullopt, config.mailto, {}});
      row.works = overall.total;
      row.idr = overall.count;
      row.idr_percent = overall.ratio_percent;
      for (int d = 1; d <= static_cast<int>(kNumDomains); ++d) {
        const auto part = client.count_term_prevalence({year, d, config.mailto, {}});
        row.domain_works[d - 1] = part.total;
        row.domain_idr[d - 1] = part.count;
        row.domain_idr_percent[d - 1] = part.ratio_percent;
      }
      rows.push_back(row);
    }
    write_term_counts_csv(buffer, rows);
    stem = "term_counts";
  } else {
    throw ConfigError("--what must be corpus or terms");
  }

  std::string content = buffer.str();
  if (const auto meta = s.meta(sha256_hex(request_description), true)) content = "# " + *meta + "\n" + content;
  const auto path = s.output_path(stem, "csv");
  write_file_atomic(path, content);
  s.out() << path.string() << "\n";
  return kSuccess;
}

/// Reads `key = value` lines; '#' and ';' start comments.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  auto trim = [](std::string text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = text.find_last_not_of(" \t\r");
    text = text.substr(first, last - first + 1);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
    return text;
  };
  while (std::getline(in, line)) {
    const auto stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';' || stripped[0] == '[') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError("config line without '=': " + stripped);
    auto key = trim(stripped.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    entries.emplace_back(key, trim(stripped.substr(eq + 1)));
  }
  return entries;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Interdisciplinarity and SDG contribution analytics over bibliometric corpora", "interdiv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Command {
    const char* name;
    const char* help;
    int (*handler)(const Session&);
  };
  const std::vector<Command> commands{
      {"fetch", "Build a corpus or term-count table from OpenAlex (live or recorded fixtures)", cmd_fetch},
      {"distances", "Per-year field distance matrices", cmd_distances},
      {"pub-index", "Per-publication effective number of disciplines", cmd_pub_index},
      {"field-trend", "Per-field mean interdisciplinarity by year", cmd_field_trend},
      {"sdg-shares", "Field contribution shares per SDG and year", cmd_sdg_shares},
      {"sdg-trend", "Citation-weighted interdisciplinarity per SDG and year", cmd_sdg_trend},
      {"idr-share", "Interdisciplinarity-term prevalence percentages", cmd_idr_share},
      {"regress", "Per-field OLS trends before and after a split year", cmd_regress},
      {"plot", "Render an SVG chart from a series CSV", cmd_plot},
  };

  std::map<CLI::App*, const Command*> by_app;
  for (const auto& command : commands) {
    auto* sub = app.add_subcommand(command.name, command.help);
    by_app[sub] = &command;
    sub->add_option("--input", config.input, "Input CSV");
    sub->add_option("--output", config.output_dir, "Output directory");
    sub->add_option("--years", config.years, "Inclusive year range A:B");
    sub->add_option("--sdg", config.sdg, "SDG number 1-17 (default: all)");
    sub->add_option("--field", config.field, "Field number 1-19 (default: all)");
    sub->add_option("--threshold", config.threshold, "SDG-affinity threshold (strictly above)");
    sub->add_option("--axis", config.axis, "Share normalization: per-field or per-sdg");
    sub->add_option("--format", config.format, "csv, json or svg");
    sub->add_option("--mailto", config.mailto, "Contact email for the polite pool")->envname("INTERDIV_MAILTO");
    sub->add_flag("--no-meta", config.no_meta, "Omit the metadata header line");
    sub->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
    sub->add_option("--width", config.width, "Chart width");
    sub->add_option("--height", config.height, "Chart height");
    sub->add_option("--palette-seed", config.palette_seed, "Chart palette seed");
    sub->add_option("--config", "Config file of key = value lines");
  }
  auto* pub_index = app.get_subcommand("pub-index");
  pub_index->add_option("--distances", config.distances_dir, "Directory of distances_<year>.csv tables");
  auto* regress = app.get_subcommand("regress");
  regress->add_option("--split-year", config.split_year, "First year of the post window");
  regress->add_option("--alpha", config.alpha, "Significance level");
  regress->add_flag("--pooled", config.pooled, "Regress publication-level values instead of yearly means");
  auto* plot = app.get_subcommand("plot");
  plot->add_option("--kind", config.kind, "line or stacked");
  plot->add_option("--value", config.value_column, "Value column for long-form input");
  auto* fetch = app.get_subcommand("fetch");
  fetch->add_option("--what", config.what, "corpus or terms");
  fetch->add_option("--fixtures", config.fixtures_dir, "Replay recorded responses from this directory");
  fetch->add_option("--record", config.record_dir, "Record responses into this directory");
  fetch->add_option("--max-records", config.max_records, "Works per field and year");
  fetch->add_option("--per-page", config.per_page, "Page size (1-200)");
  fetch->add_option("--concurrency", config.concurrency, "Concurrent field-year fetches");

  // Config-file values fill in options the command line did not set.
  std::vector<std::string> argv(args);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    CLI::App* sub = args.empty() ? nullptr : app.get_subcommand_no_throw(args[0]);
    if (sub == nullptr) break;
    try {
      for (const auto& [key, value] : read_config_file(args[i + 1])) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        const auto* option = sub->get_option_no_throw(flag);
        if (option == nullptr) {
          err << "config error: unknown key '" << key << "'\n";
          return kConfigError;
        }
        if (option->get_expected_min() == 0) {
          if (value == "true" || value == "1") argv.push_back(flag);
        } else {
          argv.push_back(flag);
          argv.push_back(value);
        }
      }
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kConfigError;
    }
  }

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  const Command* command = nullptr;
  for (auto* sub : app.get_subcommands()) command = by_app.at(sub);

  try {
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
      throw InvalidThresholdError("invalid threshold: --threshold must lie in [0,1]");
    }
    Session session(config, out, err);
    return command->handler(session);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NetworkError& e) {
    err << "network error: " << e.what() << "\n";
    return kNetworkError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace interdiv::cli
