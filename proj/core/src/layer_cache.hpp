#pragma once

// On-disk store for completed bracket layers. One text file per layer under
// <dir>/<key hash>/; the key covers the input set, the variable list and
// every option that changes bracket contents.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feynred/reduction.hpp"

namespace feynred {

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 1469598103934665603ULL);

struct LayerEntry {
  std::uint32_t subset = 0;
  std::optional<ReductionSet> set;
};

class LayerCache {
 public:
  LayerCache(std::string dir, const std::string& key, RingPtr ring);

  bool enabled() const noexcept { return !dir_.empty(); }
  // nullopt when missing, from another format version, or damaged.
  std::optional<std::vector<LayerEntry>> load(std::size_t layer) const;
  void store(std::size_t layer, const std::vector<LayerEntry>& entries) const;

 private:
  std::string path(std::size_t layer) const;

  std::string dir_;
  std::string key_;
  RingPtr ring_;
};

}  // namespace feynred
