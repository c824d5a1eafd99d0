#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace interdiv {

inline constexpr std::size_t kNumFields = 19;
inline constexpr std::size_t kNumSdgs = 17;
inline constexpr std::size_t kNumDomains = 4;

struct FieldInfo {
  std::string_view name;
  std::string_view concept_id;  // legacy level-0 concept id, without the URL prefix
};

// Field order follows the supplementary table legend: index 0 is "discip1".
inline constexpr std::array<FieldInfo, kNumFields> kFields{{
    {"Political Science", "C17744445"},
    {"Philosophy", "C138885662"},
    {"Economics", "C162324750"},
    {"Business", "C144133560"},
    {"Psychology", "C15744967"},
    {"Mathematics", "C33923547"},
    {"Medicine", "C71924100"},
    {"Biology", "C86803240"},
    {"Computer Science", "C41008148"},
    {"Geology", "C127313418"},
    {"Chemistry", "C185592680"},
    {"Art", "C142362112"},
    {"Sociology", "C144024400"},
    {"Engineering", "C127413603"},
    {"Geography", "C205649164"},
    {"History", "C95457728"},
    {"Materials Science", "C192562407"},
    {"Physics", "C121332964"},
    {"Environmental Science", "C39432304"},
}};

inline constexpr std::array<std::string_view, kNumSdgs> kSdgNames{{
    "No poverty",
    "Zero hunger",
    "Good health and well-being",
    "Quality education",
    "Gender equality",
    "Clean water and sanitation",
    "Affordable and clean energy",
    "Decent work and economic growth",
    "Industry, innovation and infrastructure",
    "Reduced inequalities",
    "Sustainable cities and communities",
    "Responsible consumption and production",
    "Climate action",
    "Life below water",
    "Life on land",
    "Peace, justice and strong institutions",
    "Partnerships for the goals",
}};

// Domain order of the term-count table: 1 Life, 2 Social, 3 Physical, 4 Health.
inline constexpr std::array<std::string_view, kNumDomains> kDomainNames{{
    "Life Sciences",
    "Social Sciences",
    "Physical Sciences",
    "Health Sciences",
}};

namespace field {
inline constexpr std::size_t kPoliticalScience = 0;
inline constexpr std::size_t kPsychology = 4;
inline constexpr std::size_t kMedicine = 6;
inline constexpr std::size_t kBiology = 7;
inline constexpr std::size_t kComputerScience = 8;
inline constexpr std::size_t kChemistry = 10;
inline constexpr std::size_t kMaterialsScience = 16;
inline constexpr std::size_t kPhysics = 17;
inline constexpr std::size_t kEnvironmentalScience = 18;
}  // namespace field

/// Case-insensitive lookup by display name ("Computer science" and "Computer Science" both match).
std::optional<std::size_t> field_index_by_name(std::string_view name) noexcept;

/// Lookup by concept id, accepting either the bare id or the full URL form.
std::optional<std::size_t> field_index_by_concept_id(std::string_view id) noexcept;

}  // namespace interdiv
