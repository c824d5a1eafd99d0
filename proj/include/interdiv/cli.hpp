#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "interdiv/corpus.hpp"

namespace interdiv::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitStatus : int {
  kSuccess = 0,
  kConfigError = 2,
  kDataError = 3,
  kNetworkError = 4,
  kInternalError = 5,
};

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir = ".";
  std::string years = "1970:2022";
  int sdg = 0;    // 1-based; 0 = all
  int field = 0;  // 1-based; 0 = all
  double threshold = 0.5;
  std::string axis = "per-sdg";
  std::string format = "csv";
  std::string mailto;
  bool no_meta = false;

  // pub-index
  std::filesystem::path distances_dir;
  // regress
  int split_year = 2000;
  double alpha = 0.001;
  bool pooled = false;
  // plot
  std::string kind = "line";
  std::string value_column;
  int width = 960;
  int height = 540;
  std::uint32_t palette_seed = 0;
  // fetch
  std::string what = "corpus";
  std::filesystem::path fixtures_dir;
  std::filesystem::path record_dir;
  std::size_t max_records = 1000;
  int per_page = 200;
  std::size_t concurrency = 4;

  unsigned threads = 0;
};

/// Entry point of the `interdiv` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace interdiv::cli
