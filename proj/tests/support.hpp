#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "feynred/graph.hpp"
#include "feynred/polynomial.hpp"
#include "feynred/symanzik.hpp"

namespace feynred::testing {

// Connected multigraph: a random spanning tree, then extra edges (parallel
// edges and, when allowed, self loops) up to `edges`.
inline Multigraph random_connected(std::mt19937_64& rng, int vertices, int edges, bool loops = true) {
  Multigraph g;
  for (int v = 0; v < vertices; ++v) g.add_vertex(v);
  EdgeId next = 1;
  for (int v = 1; v < vertices; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    g.add_edge(next++, pick(rng), v);
  }
  std::uniform_int_distribution<int> any(0, vertices - 1);
  while (next <= edges) {
    int u = any(rng), v = any(rng);
    if (u == v && (!loops || vertices == 1)) {
      if (vertices == 1 && loops) g.add_edge(next++, u, v);
      if (vertices == 1 && !loops) break;
      continue;
    }
    g.add_edge(next++, u, v);
  }
  return g;
}

// Spanning trees by brute force over all (|V|-1)-subsets of edges.
inline std::set<EdgeSet> brute_spanning_trees(const Multigraph& g) {
  std::set<EdgeSet> out;
  const std::size_t n = g.num_vertices(), m = g.num_edges();
  if (n == 0) return out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n - 1) continue;
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool acyclic = true;
    EdgeSet ids;
    for (std::size_t i = 0; i < m && acyclic; ++i) {
      if (!(mask >> i & 1)) continue;
      const auto& e = g.edges()[i];
      auto a = find(g.vertex_index(e.u)), b = find(g.vertex_index(e.v));
      if (a == b) acyclic = false;
      parent[a] = b;
      ids.push_back(e.id);
    }
    if (acyclic) out.insert(ids);
  }
  return out;
}

inline RingPtr schwinger_ring(const Multigraph& g) { return symanzik_ring(g, massless_context(g)); }

}  // namespace feynred::testing
