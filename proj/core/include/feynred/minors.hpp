#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feynred/graph.hpp"
#include "feynred/kinematics.hpp"

namespace feynred {

enum class Notion {
  kPsi,        // first polynomial alone, no roots
  kFourPoint,  // both polynomials, four on-shell momenta, rooted minors
};

std::string to_string(Notion n);
// "psi" or "phi4"; throws InvalidArgument otherwise.
Notion parse_notion(const std::string& text);

struct CatalogEntry {
  std::string name;
  std::string file;  // file name under catalog/
  Notion notion = Notion::kPsi;
  // False when the shipped file carries no graph.
  bool available = true;
  Multigraph graph;
  KinematicsContext kinematics;
  // Rooted vertices of `graph`, sorted; empty for unrooted entries.
  std::vector<VertexId> roots;
  std::string description;
};

// Entries in a fixed order: K4, W4, K2,4, L, K3,4, V8+02. Built once from
// the embedded catalog files.
const std::vector<CatalogEntry>& build_catalog();
// Text of an embedded catalog file, or nullopt.
std::optional<std::string> catalog_file(const std::string& file);

// Bijections from the given roots of G onto the roots of the entry, one per
// orbit under the automorphisms of the entry that preserve its root set.
// Throws InvalidArgument when the counts differ.
std::vector<RootMap> root_maps(const CatalogEntry& entry, const std::vector<VertexId>& roots);

struct ScreenFinding {
  std::string name;
  bool contains = false;
};

struct ScreenReport {
  Notion notion = Notion::kPsi;
  std::vector<ScreenFinding> findings;
  std::vector<std::string> skipped;  // unavailable entries
  // First contained entry; a witness of non-reducibility.
  std::optional<std::string> witness;

  // "non-reducible (witness X)" or "no known obstruction".
  std::string verdict() const;
};

// Screens against every available entry of the notion. For kFourPoint, G
// must have exactly four rooted vertices for r external momenta (throws
// InvalidArgument otherwise). Never certifies reducibility.
ScreenReport screen(const Multigraph& g, int momenta, Notion notion);

struct SingleStepMinor {
  bool contraction = false;
  EdgeId edge = 0;
  Multigraph graph;
};

// Every deletion, then every contraction of a non-loop edge, in edge order.
std::vector<SingleStepMinor> single_step_minors(const Multigraph& g);

}  // namespace feynred
