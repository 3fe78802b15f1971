#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feynred/minors.hpp"
#include "feynred/reduction.hpp"

namespace feynred::cli {

inline constexpr int kCensusSchemaVersion = 1;

struct CensusOptions {
  // Empty: psi when the graph has no four rooted vertices, phi4 otherwise.
  std::optional<Notion> notion;
  bool fubini = false;
  ReductionOptions reduction;
  unsigned workers = 1;
  std::string output;     // line-delimited results
  std::string cache_dir;  // per-graph records; empty means <output>.cache
};

struct CensusSummary {
  std::size_t records = 0;
  std::size_t computed = 0;
  std::size_t cache_hits = 0;
  std::vector<std::string> unreadable;  // "file: reason"
};

// Runs every *.graph file in dir (sorted by name). Each record is one JSON
// object per line; the final file is sorted by name.
CensusSummary run_census(const std::string& dir, const CensusOptions& options);

}  // namespace feynred::cli
