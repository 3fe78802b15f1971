#include "feynred/minors.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "catalog_data.hpp"
#include "feynred/errors.hpp"
#include "feynred/graph_io.hpp"

namespace feynred {

std::string to_string(Notion n) { return n == Notion::kPsi ? "psi" : "phi4"; }

Notion parse_notion(const std::string& text) {
  if (text == "psi") return Notion::kPsi;
  if (text == "phi4") return Notion::kFourPoint;
  throw InvalidArgument("unknown notion '" + text + "' (expected psi or phi4)");
}

namespace {

struct EntrySpec {
  const char* name;
  const char* file;
  Notion notion;
  const char* description;
};

constexpr EntrySpec kEntries[] = {
    {"K4", "k4.graph", Notion::kFourPoint, "complete graph on four vertices, a root at every vertex"},
    {"W4", "w4.graph", Notion::kFourPoint, "wheel with four spokes, roots on the degree-3 rim vertices"},
    {"K2,4", "k24.graph", Notion::kFourPoint, "K2,4 with the roots on the large side"},
    {"L", "l.graph", Notion::kFourPoint, "four-rooted graph L (edge list not available)"},
    {"K3,4", "k34.graph", Notion::kPsi, "complete bipartite graph K3,4"},
    {"V8+02", "v8_02.graph", Notion::kPsi, "Wagner graph V8 with the extra edge {0,2}"},
};

std::vector<CatalogEntry> load() {
  std::vector<CatalogEntry> out;
  for (const auto& spec : kEntries) {
    CatalogEntry e;
    e.name = spec.name;
    e.file = spec.file;
    e.notion = spec.notion;
    e.description = spec.description;
    auto text = catalog_file(spec.file);
    if (!text) throw Error(std::string("catalog file missing: ") + spec.file);
    GraphFile parsed = parse_graph(*text);
    e.available = parsed.graph.num_vertices() > 0;
    e.graph = std::move(parsed.graph);
    e.kinematics = std::move(parsed.kinematics);
    e.roots = rooted_vertices(e.graph, e.kinematics.momenta());
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& build_catalog() {
  static const std::vector<CatalogEntry> catalog = load();
  return catalog;
}

std::optional<std::string> catalog_file(const std::string& file) {
  for (const auto& [name, text] : embedded_catalog()) {
    if (file == name) return std::string(text);
  }
  return std::nullopt;
}

std::vector<RootMap> root_maps(const CatalogEntry& entry, const std::vector<VertexId>& roots) {
  if (roots.size() != entry.roots.size()) {
    throw InvalidArgument("graph has " + std::to_string(roots.size()) + " roots, " + entry.name + " has " +
                          std::to_string(entry.roots.size()));
  }
  const Multigraph& h = entry.graph;
  std::set<std::size_t> root_positions;
  for (VertexId r : entry.roots) root_positions.insert(h.vertex_index(r));

  std::vector<std::vector<std::size_t>> symmetries;
  for (auto& perm : automorphisms(h)) {
    bool keeps = true;
    for (std::size_t p : root_positions) keeps = keeps && root_positions.count(perm[p]);
    if (keeps) symmetries.push_back(std::move(perm));
  }

  std::vector<RootMap> out;
  std::vector<VertexId> targets = entry.roots;
  do {
    // Keep the lexicographically least member of each orbit.
    bool least = true;
    for (const auto& perm : symmetries) {
      std::vector<VertexId> image;
      for (VertexId t : targets) image.push_back(h.vertices()[perm[h.vertex_index(t)]]);
      if (image < targets) {
        least = false;
        break;
      }
    }
    if (least) out.push_back({roots, targets});
  } while (std::next_permutation(targets.begin(), targets.end()));
  return out;
}

std::string ScreenReport::verdict() const {
  return witness ? "non-reducible (witness " + *witness + ")" : "no known obstruction";
}

ScreenReport screen(const Multigraph& g, int momenta, Notion notion) {
  ScreenReport report;
  report.notion = notion;
  std::vector<VertexId> roots;
  if (notion == Notion::kFourPoint) {
    roots = rooted_vertices(g, momenta);
    if (roots.size() != 4) {
      throw InvalidArgument("four-point screening needs 4 rooted vertices, found " + std::to_string(roots.size()));
    }
  }
  for (const auto& entry : build_catalog()) {
    // Obstructions for the first polynomial also obstruct the pair.
    if (entry.notion != notion && !(entry.notion == Notion::kPsi && notion == Notion::kFourPoint)) continue;
    if (!entry.available) {
      report.skipped.push_back(entry.name);
      continue;
    }
    bool contains = entry.roots.empty() ? has_minor(g, entry.graph)
                                        : has_rooted_minor(g, entry.graph, root_maps(entry, roots));
    report.findings.push_back({entry.name, contains});
    if (contains && !report.witness) report.witness = entry.name;
  }
  return report;
}

std::vector<SingleStepMinor> single_step_minors(const Multigraph& g) {
  std::vector<SingleStepMinor> out;
  for (const auto& e : g.edges()) out.push_back({false, e.id, delete_edge(g, e.id)});
  for (const auto& e : g.edges()) {
    if (!e.is_loop()) out.push_back({true, e.id, contract_edge(g, e.id)});
  }
  return out;
}

}  // namespace feynred
