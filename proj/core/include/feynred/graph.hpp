#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace feynred {

using VertexId = int;
using EdgeId = int;

// Multiset of external momentum labels, as sorted 1-based indices
// (label 2 means p2). Empty means zero momentum.
using Momentum = std::vector<int>;

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  std::optional<std::string> mass;

  bool is_loop() const noexcept { return u == v; }
  bool operator==(const Edge&) const = default;
};

class Multigraph {
 public:
  // Throws InvalidArgument on duplicate ids or dangling endpoints.
  void add_vertex(VertexId id, Momentum momentum = {});
  void add_edge(EdgeId id, VertexId u, VertexId v, std::optional<std::string> mass = {});
  void set_momentum(VertexId id, Momentum momentum);

  // Sorted by id.
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  bool has_vertex(VertexId id) const;
  bool has_edge(EdgeId id) const;
  // Positions in vertices() / edges(); throw InvalidArgument when absent.
  std::size_t vertex_index(VertexId id) const;
  std::size_t edge_index(EdgeId id) const;
  const Edge& edge(EdgeId id) const { return edges_[edge_index(id)]; }
  const Momentum& momentum(VertexId id) const { return momenta_[vertex_index(id)]; }

  bool operator==(const Multigraph&) const = default;

 private:
  std::vector<VertexId> vertices_;
  std::vector<Momentum> momenta_;
  std::vector<Edge> edges_;
};

// Sum of momentum multisets.
Momentum add_momenta(const Momentum& a, const Momentum& b);

// True when the momentum does not vanish by conservation for r external
// momenta, i.e. it is nonempty and not a multiple of p1 + ... + pr.
bool momentum_nonzero(const Momentum& m, int r);

// Vertices carrying nonzero momentum, sorted.
std::vector<VertexId> rooted_vertices(const Multigraph& g, int r);

Multigraph delete_edge(const Multigraph& g, EdgeId e);
// Merges the second endpoint into the first. Throws InvalidArgument on loops.
Multigraph contract_edge(const Multigraph& g, EdgeId e);
Multigraph delete_vertex(const Multigraph& g, VertexId v);

bool is_connected(const Multigraph& g);

using EdgeSet = std::vector<EdgeId>;

// Calls fn with the sorted edge ids of each spanning tree.
void for_each_spanning_tree(const Multigraph& g, const std::function<void(const EdgeSet&)>& fn);
std::vector<EdgeSet> spanning_trees(const Multigraph& g);

struct SpanningForestPair {
  EdgeSet tree1;
  EdgeSet tree2;
  std::vector<VertexId> part1;  // contains the smallest vertex id
  std::vector<VertexId> part2;
};

// Empty for disconnected graphs.
void for_each_spanning_2forest(const Multigraph& g,
                               const std::function<void(const SpanningForestPair&)>& fn);
std::vector<SpanningForestPair> spanning_2forests(const Multigraph& g);

// Exact, by dynamic programming over edge subsets. Throws InvalidArgument on
// edgeless input and ResourceLimit beyond 20 edges.
int vertex_width(const Multigraph& g);

// Root map: for each root of G (in the order given by `roots`), the vertex of
// H whose branch set must contain it.
struct RootMap {
  std::vector<VertexId> roots;
  std::vector<VertexId> targets;
};

bool has_minor(const Multigraph& g, const Multigraph& h);
// True if the rooted condition holds for at least one of the maps. Throws
// InvalidArgument for non-injective maps or unknown vertices.
bool has_rooted_minor(const Multigraph& g, const Multigraph& h, const std::vector<RootMap>& maps);

// Automorphisms of h as permutations of vertex positions, respecting edge
// multiplicities and loops.
std::vector<std::vector<std::size_t>> automorphisms(const Multigraph& h);

}  // namespace feynred
