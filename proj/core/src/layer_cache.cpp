#include "layer_cache.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace feynred {

namespace {

constexpr const char* kMagic = "feynred-layer 1";

std::string hex(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << x;
  return out.str();
}

std::string label_text(const std::vector<Label>& labels) {
  if (labels.empty()) return "-";
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ',';
    out += std::to_string(l.lo) + ':' + (l.hi == Label::kInfinity ? "inf" : std::to_string(l.hi));
  }
  return out;
}

std::optional<std::vector<Label>> parse_labels(const std::string& text) {
  std::vector<Label> out;
  if (text == "-") return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) return std::nullopt;
    Label l;
    l.lo = std::stoi(item.substr(0, colon));
    std::string hi = item.substr(colon + 1);
    l.hi = hi == "inf" ? Label::kInfinity : std::stoi(hi);
    out.push_back(l);
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

LayerCache::LayerCache(std::string dir, const std::string& key, RingPtr ring)
    : dir_(std::move(dir)), key_(hex(fnv1a(key))), ring_(std::move(ring)) {}

std::string LayerCache::path(std::size_t layer) const {
  return (std::filesystem::path(dir_) / key_ / ("layer_" + std::to_string(layer) + ".txt")).string();
}

std::optional<std::vector<LayerEntry>> LayerCache::load(std::size_t layer) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path(layer));
  if (!in) return std::nullopt;
  try {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) return std::nullopt;
    std::vector<LayerEntry> out;
    bool closed = false;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "end") {
        closed = true;
        break;
      }
      if (tag != "subset") return std::nullopt;
      LayerEntry entry;
      std::string state;
      std::size_t count = 0;
      ls >> entry.subset >> state;
      if (state == "undefined") {
        out.push_back(std::move(entry));
        continue;
      }
      if (state != "defined" || !(ls >> count)) return std::nullopt;
      ReductionSet set;
      for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) return std::nullopt;
        std::istringstream ms(line);
        std::string m, labels;
        ms >> m >> labels;
        if (m != "m") return std::nullopt;
        auto parsed = parse_labels(labels);
        if (!parsed) return std::nullopt;
        std::string text;
        std::getline(ms, text);
        set.members.push_back({parse_polynomial(ring_, text), std::move(*parsed)});
      }
      set.graph = CompatibilityGraph(count);
      if (!std::getline(in, line)) return std::nullopt;
      std::istringstream gs(line);
      std::string g;
      gs >> g;
      if (g != "g") return std::nullopt;
      std::size_t i = 0, j = 0;
      while (gs >> i >> j) {
        if (i >= count || j >= count) return std::nullopt;
        set.graph.connect(i, j);
      }
      entry.set = std::move(set);
      out.push_back(std::move(entry));
    }
    if (!closed) return std::nullopt;
    return out;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void LayerCache::store(std::size_t layer, const std::vector<LayerEntry>& entries) const {
  if (!enabled()) return;
  std::filesystem::create_directories(std::filesystem::path(dir_) / key_);
  std::string final_path = path(layer);
  std::string tmp = final_path + ".tmp";
  {
    std::ofstream out(tmp);
    out << kMagic << '\n';
    for (const auto& e : entries) {
      out << "subset " << e.subset;
      if (!e.set) {
        out << " undefined\n";
        continue;
      }
      const auto& s = *e.set;
      out << " defined " << s.members.size() << '\n';
      for (const auto& m : s.members) out << "m " << label_text(m.labels) << ' ' << m.poly.to_string() << '\n';
      out << 'g';
      for (std::size_t i = 0; i < s.members.size(); ++i) {
        for (std::size_t j = i + 1; j < s.members.size(); ++j) {
          if (s.graph.adjacent(i, j)) out << ' ' << i << ' ' << j;
        }
      }
      out << '\n';
    }
    out << "end\n";
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace feynred
