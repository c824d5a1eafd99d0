#include "interdiv/taxonomy.hpp"

#include <algorithm>
#include <cctype>

namespace interdiv {

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<std::size_t> field_index_by_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    if (iequals(kFields[i].name, name)) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> field_index_by_concept_id(std::string_view id) noexcept {
  if (const auto slash = id.rfind('/'); slash != std::string_view::npos) id.remove_prefix(slash + 1);
  for (std::size_t i = 0; i < kFields.size(); ++i) {
    if (iequals(kFields[i].concept_id, id)) return i;
  }
  return std::nullopt;
}

}  // namespace interdiv
