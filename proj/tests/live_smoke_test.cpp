// Talks to the real OpenAlex API; built only with -DINTERDIV_LIVE_TESTS=ON.

#include <gtest/gtest.h>

#include <cstdlib>

#include "interdiv/http.hpp"
#include "interdiv/openalex.hpp"

using namespace interdiv;
using namespace interdiv::openalex;

namespace {
std::string contact() {
  const char* env = std::getenv("INTERDIV_MAILTO");
  return env ? env : "";
}
}  // namespace

TEST(LiveOpenAlex, FetchesOnePageOfTopCitedMedicine) {
  OpenAlexClient client(std::make_shared<LiveTransport>());
  FetchSpec spec;
  spec.field_concept_id = "C71924100";
  spec.year = 2015;
  spec.per_page = 5;
  spec.max_records = 5;
  spec.contact_email = contact();
  const auto records = client.fetch_top_cited(spec);
  ASSERT_EQ(records.size(), 5u);
  for (std::size_t i = 1; i < records.size(); ++i) EXPECT_GE(records[i - 1].citations, records[i].citations);
  for (const auto& r : records) EXPECT_GT(r.field_scores[field::kMedicine], 0.0);
}

TEST(LiveOpenAlex, CountsTermPrevalence) {
  OpenAlexClient client(std::make_shared<LiveTransport>());
  const auto counts = client.count_term_prevalence({2015, std::nullopt, contact(), {}});
  EXPECT_GT(counts.total, 0);
  EXPECT_LE(counts.count, counts.total);
}
