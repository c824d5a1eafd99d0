#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace interdiv {

/// One work with its raw model-assigned affinity scores.
///
/// `field_scores` has one entry per field in the fixed taxonomy order (19 for the
/// OpenAlex concept corpus) and `sdg_scores` one entry per goal (17). The numeric
/// kernels accept any consistent field count so they can be exercised on small
/// synthetic taxonomies.
struct PublicationRecord {
  std::string work_id;
  int year = 0;
  std::int64_t citations = 0;
  std::vector<double> field_scores;
  std::vector<double> sdg_scores;

  friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

}  // namespace interdiv
