#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interdiv/http.hpp"
#include "interdiv/record.hpp"
#include "json.hpp"

namespace interdiv::openalex {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds backoff_base{500};
};

/// Top-cited works of one level-0 concept in one publication year.
struct FetchSpec {
  std::string field_concept_id;  // bare id ("C71924100") or URL form
  int year = 0;
  int per_page = 200;            // API bounds: 1..200
  std::size_t max_records = 1000;
  std::string contact_email;     // polite pool; sent as `mailto`
  RetryPolicy retry;
};

/// Count of works whose title or abstract mentions a multi/inter/trans-disciplinary variant.
struct TermQuerySpec {
  int year = 0;
  std::optional<int> domain;  // 1 Life, 2 Social, 3 Physical, 4 Health Sciences
  std::string contact_email;
  RetryPolicy retry;
};

struct TermCount {
  int year = 0;
  std::optional<int> domain;
  std::int64_t count = 0;
  std::int64_t total = 0;
  std::optional<double> ratio_percent;  // empty when total == 0
};

/// Title/abstract search expression covering the hyphenated and closed spellings.
inline constexpr const char* kInterdisciplinarySearch =
    "(multidisciplinary OR \"multi-disciplinary\" OR interdisciplinary OR \"inter-disciplinary\" OR "
    "transdisciplinary OR \"trans-disciplinary\")";

struct ExtractedScores {
  std::vector<double> field_scores;  // fixed 19-field order, absent concepts are 0
  std::vector<double> sdg_scores;    // UN goal order, absent goals are 0
  std::vector<std::string> diagnostics;
};

/// Maps a work object's level-0 concept and SDG scores into fixed-order vectors.
/// Throws PayloadError when the work id or publication year is missing.
ExtractedScores extract_scores(const nlohmann::json& work);

/// Full record from a work object (id without URL prefix, year, cited_by_count, scores).
PublicationRecord work_to_record(const nlohmann::json& work);

std::string percent_encode(std::string_view text);

class OpenAlexClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  struct Options {
    std::string base_url = "https://api.openalex.org";
    std::size_t max_in_flight = 4;
    std::chrono::milliseconds min_request_interval{100};  // shared across all workers
    Sleeper sleeper;                                      // defaults to std::this_thread::sleep_for
  };

  explicit OpenAlexClient(std::shared_ptr<HttpTransport> transport);
  OpenAlexClient(std::shared_ptr<HttpTransport> transport, Options options);

  /// Cursor-paginates until exhaustion or `max_records`; result is sorted by citations
  /// descending (work id ascending on ties) with no duplicate ids.
  std::vector<PublicationRecord> fetch_top_cited(const FetchSpec& spec);

  /// Runs several fetches with at most `max_in_flight` concurrently; results are concatenated in request order.
  std::vector<PublicationRecord> fetch_many(std::span<const FetchSpec> specs);

  TermCount count_term_prevalence(const TermQuerySpec& spec);

  std::string works_url(const FetchSpec& spec, const std::string& cursor) const;
  std::string count_url(int year, std::optional<int> domain, bool with_search, const std::string& email) const;

  /// GET with retry: 429, 5xx and transport failures back off exponentially (honouring
  /// Retry-After); other statuses fail immediately with FetchError.
  nlohmann::json get_json(const std::string& url, const RetryPolicy& retry);

 private:
  void pace();

  std::shared_ptr<HttpTransport> transport_;
  Options options_;
  std::mutex pace_mutex_;
  std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace interdiv::openalex
