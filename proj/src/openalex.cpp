#include "interdiv/openalex.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>
#include <unordered_set>

#include "interdiv/error.hpp"
#include "interdiv/taxonomy.hpp"
#include "parallel.hpp"

namespace interdiv::openalex {

using nlohmann::json;

namespace {

constexpr std::string_view kWorkUrlPrefix = "https://openalex.org/";

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<std::size_t> sdg_index(const json& goal) {
  if (goal.contains("id") && goal["id"].is_string()) {
    const auto id = goal["id"].get<std::string>();
    const auto slash = id.rfind('/');
    const std::string tail = slash == std::string::npos ? id : id.substr(slash + 1);
    if (!tail.empty() && std::all_of(tail.begin(), tail.end(), [](unsigned char c) { return std::isdigit(c); })) {
      const int number = std::stoi(tail);
      if (number >= 1 && number <= static_cast<int>(kNumSdgs)) return static_cast<std::size_t>(number - 1);
    }
  }
  if (goal.contains("display_name") && goal["display_name"].is_string()) {
    const auto name = goal["display_name"].get<std::string>();
    for (std::size_t m = 0; m < kSdgNames.size(); ++m) {
      if (iequals(kSdgNames[m], name)) return m;
    }
  }
  return std::nullopt;
}

double clamped_score(const json& entry, const std::string& label, std::vector<std::string>& diagnostics) {
  if (!entry.contains("score") || !entry["score"].is_number()) {
    diagnostics.push_back(label + ": missing score, treated as 0");
    return 0.0;
  }
  const double score = entry["score"].get<double>();
  if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
    const double clamped = std::isfinite(score) ? std::clamp(score, 0.0, 1.0) : 0.0;
    diagnostics.push_back(label + ": score " + std::to_string(score) + " clamped to " + std::to_string(clamped));
    return clamped;
  }
  return score;
}

std::string required_id(const json& work) {
  if (!work.is_object()) throw PayloadError("payload error: work is not an object");
  if (!work.contains("id") || !work["id"].is_string() || work["id"].get<std::string>().empty()) {
    throw PayloadError("payload error: work without id");
  }
  std::string id = work["id"].get<std::string>();
  if (id.starts_with(kWorkUrlPrefix)) id.erase(0, kWorkUrlPrefix.size());
  return id;
}

int required_year(const json& work, const std::string& id) {
  if (!work.contains("publication_year") || !work["publication_year"].is_number_integer()) {
    throw PayloadError("payload error: work " + id + " has no publication_year");
  }
  return work["publication_year"].get<int>();
}

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == ':' || c == ',' || c == '/') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

ExtractedScores extract_scores(const json& work) {
  const auto id = required_id(work);
  required_year(work, id);

  ExtractedScores scores{std::vector<double>(kNumFields, 0.0), std::vector<double>(kNumSdgs, 0.0), {}};

  if (work.contains("concepts") && work["concepts"].is_array()) {
    for (const auto& concept_entry : work["concepts"]) {
      if (!concept_entry.is_object()) continue;
      if (concept_entry.contains("level") && concept_entry["level"].is_number() &&
          concept_entry["level"].get<int>() != 0) {
        continue;
      }
      std::optional<std::size_t> index;
      std::string label = "concept";
      if (concept_entry.contains("id") && concept_entry["id"].is_string()) {
        label = concept_entry["id"].get<std::string>();
        index = field_index_by_concept_id(label);
      }
      if (!index && concept_entry.contains("display_name") && concept_entry["display_name"].is_string()) {
        label = concept_entry["display_name"].get<std::string>();
        index = field_index_by_name(label);
      }
      if (!index) {
        scores.diagnostics.push_back(id + ": unknown level-0 concept " + label);
        continue;
      }
      const double s = clamped_score(concept_entry, id + " " + std::string(kFields[*index].name), scores.diagnostics);
      scores.field_scores[*index] = std::max(scores.field_scores[*index], s);
    }
  }

  if (work.contains("sustainable_development_goals") && work["sustainable_development_goals"].is_array()) {
    for (const auto& goal : work["sustainable_development_goals"]) {
      if (!goal.is_object()) continue;
      const auto m = sdg_index(goal);
      if (!m) {
        scores.diagnostics.push_back(id + ": unrecognised SDG entry");
        continue;
      }
      const double s = clamped_score(goal, id + " SDG" + std::to_string(*m + 1), scores.diagnostics);
      scores.sdg_scores[*m] = std::max(scores.sdg_scores[*m], s);
    }
  }
  return scores;
}

PublicationRecord work_to_record(const json& work) {
  PublicationRecord record;
  record.work_id = required_id(work);
  record.year = required_year(work, record.work_id);
  if (!work.contains("cited_by_count") || !work["cited_by_count"].is_number_integer() ||
      work["cited_by_count"].get<std::int64_t>() < 0) {
    throw PayloadError("payload error: work " + record.work_id + " has no valid cited_by_count");
  }
  record.citations = work["cited_by_count"].get<std::int64_t>();
  auto scores = extract_scores(work);
  record.field_scores = std::move(scores.field_scores);
  record.sdg_scores = std::move(scores.sdg_scores);
  return record;
}

OpenAlexClient::OpenAlexClient(std::shared_ptr<HttpTransport> transport)
    : OpenAlexClient(std::move(transport), Options{}) {}

OpenAlexClient::OpenAlexClient(std::shared_ptr<HttpTransport> transport, Options options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!options_.sleeper) {
    options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

void OpenAlexClient::pace() {
  if (options_.min_request_interval.count() <= 0) return;
  std::chrono::milliseconds wait{0};
  {
    std::lock_guard lock(pace_mutex_);
    const auto now = std::chrono::steady_clock::now();
    const auto slot = std::max(now, next_slot_);
    next_slot_ = slot + options_.min_request_interval;
    wait = std::chrono::duration_cast<std::chrono::milliseconds>(slot - now);
  }
  if (wait.count() > 0) options_.sleeper(wait);
}

json OpenAlexClient::get_json(const std::string& url, const RetryPolicy& retry) {
  const int attempts = std::max(1, retry.max_attempts);
  int last_status = 0;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    pace();
    const auto response = transport_->get(url);
    last_status = response.status;
    if (response.status == 200) {
      auto doc = json::parse(response.body, nullptr, false);
      if (doc.is_discarded()) throw PayloadError("payload error: response from " + url + " is not JSON");
      return doc;
    }
    const bool transient = response.status == 0 || response.status == 429 || response.status >= 500;
    if (!transient) {
      throw FetchError("fetch error: HTTP " + std::to_string(response.status) + " for " + url, response.status);
    }
    if (attempt == attempts) break;

    std::chrono::milliseconds delay = retry.backoff_base * (1LL << (attempt - 1));
    if (const auto it = response.headers.find("retry-after"); it != response.headers.end()) {
      try {
        delay = std::max(delay, std::chrono::milliseconds(std::stoll(it->second) * 1000));
      } catch (const std::exception&) {
        // HTTP-date form is not interpreted; the exponential delay stands.
      }
    }
    options_.sleeper(delay);
  }
  throw FetchError("fetch error: " + url + " failed after " + std::to_string(attempts) +
                       " attempts, last status " + std::to_string(last_status),
                   last_status);
}

std::string OpenAlexClient::works_url(const FetchSpec& spec, const std::string& cursor) const {
  std::string concept_id = spec.field_concept_id;
  if (const auto slash = concept_id.rfind('/'); slash != std::string::npos) concept_id.erase(0, slash + 1);
  std::string url = options_.base_url + "/works?filter=concepts.id:" + percent_encode(concept_id) +
                    ",publication_year:" + std::to_string(spec.year) + "&sort=cited_by_count:desc&per-page=" +
                    std::to_string(spec.per_page) +
                    "&select=id,publication_year,cited_by_count,concepts,sustainable_development_goals&cursor=" +
                    percent_encode(cursor);
  if (!spec.contact_email.empty()) url += "&mailto=" + percent_encode(spec.contact_email);
  return url;
}

std::string OpenAlexClient::count_url(int year, std::optional<int> domain, bool with_search,
                                      const std::string& email) const {
  std::string filter = "publication_year:" + std::to_string(year);
  if (domain) filter += ",primary_topic.domain.id:domains/" + std::to_string(*domain);
  if (with_search) filter += std::string(",title_and_abstract.search:") + kInterdisciplinarySearch;
  std::string url = options_.base_url + "/works?filter=" + percent_encode(filter) + "&per-page=1&select=id";
  if (!email.empty()) url += "&mailto=" + percent_encode(email);
  return url;
}

std::vector<PublicationRecord> OpenAlexClient::fetch_top_cited(const FetchSpec& spec) {
  if (spec.per_page < 1 || spec.per_page > 200) throw ConfigError("per_page must lie in [1,200]");
  if (spec.max_records < 1) throw ConfigError("max_records must be at least 1");

  std::vector<PublicationRecord> records;
  std::unordered_set<std::string> seen;
  std::string cursor = "*";
  while (records.size() < spec.max_records) {
    const auto page = get_json(works_url(spec, cursor), spec.retry);
    if (!page.is_object() || !page.contains("results") || !page["results"].is_array()) {
      throw PayloadError("payload error: page without a results array");
    }
    const auto& results = page["results"];
    if (results.empty()) break;
    for (const auto& work : results) {
      auto record = work_to_record(work);
      if (!seen.insert(record.work_id).second) continue;
      records.push_back(std::move(record));
      if (records.size() == spec.max_records) break;
    }
    const auto meta = page.find("meta");
    if (meta == page.end() || !meta->is_object() || !meta->contains("next_cursor") ||
        !(*meta)["next_cursor"].is_string()) {
      break;
    }
    cursor = (*meta)["next_cursor"].get<std::string>();
  }

  std::stable_sort(records.begin(), records.end(), [](const PublicationRecord& a, const PublicationRecord& b) {
    if (a.citations != b.citations) return a.citations > b.citations;
    return a.work_id < b.work_id;
  });
  return records;
}

std::vector<PublicationRecord> OpenAlexClient::fetch_many(std::span<const FetchSpec> specs) {
  std::vector<std::vector<PublicationRecord>> results(specs.size());
  detail::parallel_for(specs.size(), static_cast<unsigned>(options_.max_in_flight),
                       [&](std::size_t i) { results[i] = fetch_top_cited(specs[i]); });
  std::vector<PublicationRecord> merged;
  for (auto& part : results) {
    std::move(part.begin(), part.end(), std::back_inserter(merged));
  }
  return merged;
}

TermCount OpenAlexClient::count_term_prevalence(const TermQuerySpec& spec) {
  if (spec.year < 1900) throw ConfigError("term query year must be >= 1900");
  if (spec.domain && (*spec.domain < 1 || *spec.domain > static_cast<int>(kNumDomains))) {
    throw ConfigError("domain must lie in 1..4");
  }
  auto meta_count = [](const json& page) -> std::int64_t {
    if (!page.is_object() || !page.contains("meta") || !page["meta"].contains("count") ||
        !page["meta"]["count"].is_number_integer()) {
      throw PayloadError("payload error: response without meta.count");
    }
    return page["meta"]["count"].get<std::int64_t>();
  };
  TermCount result;
  result.year = spec.year;
  result.domain = spec.domain;
  result.count = meta_count(get_json(count_url(spec.year, spec.domain, true, spec.contact_email), spec.retry));
  result.total = meta_count(get_json(count_url(spec.year, spec.domain, false, spec.contact_email), spec.retry));
  if (result.count < 0 || result.count > result.total) {
    throw PayloadError("payload error: term count " + std::to_string(result.count) + " exceeds total " +
                       std::to_string(result.total));
  }
  if (result.total > 0) {
    result.ratio_percent = 100.0 * static_cast<double>(result.count) / static_cast<double>(result.total);
  }
  return result;
}

}  // namespace interdiv::openalex
