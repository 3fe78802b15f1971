#include <gtest/gtest.h>

#include <random>
#include <set>

#include "feynred/builders.hpp"
#include "feynred/errors.hpp"
#include "feynred/graph.hpp"
#include "support.hpp"

namespace feynred {
namespace {

using testing::brute_spanning_trees;
using testing::random_connected;

std::multiset<std::pair<VertexId, VertexId>> endpoints(const Multigraph& g) {
  std::multiset<std::pair<VertexId, VertexId>> out;
  for (const auto& e : g.edges()) out.insert(std::minmax(e.u, e.v));
  return out;
}

TEST(Graph, DeleteEdge) {
  Multigraph tri = cycle_graph(3);
  Multigraph p = delete_edge(tri, 1);
  EXPECT_EQ(p.num_edges(), 2u);
  EXPECT_EQ(p.num_vertices(), 3u);
  EXPECT_TRUE(is_connected(p));

  Multigraph single = path_graph(2);
  Multigraph bare = delete_edge(single, 1);
  EXPECT_EQ(bare.num_vertices(), 2u);
  EXPECT_FALSE(is_connected(bare));

  EXPECT_EQ(delete_edge(banana_graph(2), 1).num_edges(), 1u);
  EXPECT_THROW(delete_edge(tri, 9), InvalidArgument);
}

TEST(Graph, ContractEdge) {
  Multigraph b = contract_edge(cycle_graph(3), 1);
  EXPECT_EQ(b.num_vertices(), 2u);
  EXPECT_EQ(b.num_edges(), 2u);
  for (const auto& e : b.edges()) EXPECT_FALSE(e.is_loop());

  Multigraph path = path_graph(3);
  path.set_momentum(0, {1});
  path.set_momentum(1, {2});
  Multigraph merged = contract_edge(path, 1);
  EXPECT_EQ(merged.momentum(0), (Momentum{1, 2}));

  Multigraph loop = contract_edge(banana_graph(2), 1);
  ASSERT_EQ(loop.num_vertices(), 1u);
  ASSERT_EQ(loop.num_edges(), 1u);
  EXPECT_TRUE(loop.edges()[0].is_loop());
  EXPECT_THROW(contract_edge(loop, 2), InvalidArgument);
}

TEST(Graph, DeleteContractCommute) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    Multigraph g = random_connected(rng, 4, 6);
    for (const auto& e : g.edges()) {
      for (const auto& f : g.edges()) {
        if (e.id == f.id || f.is_loop()) continue;
        Multigraph a = contract_edge(delete_edge(g, e.id), f.id);
        Multigraph b = delete_edge(contract_edge(g, f.id), e.id);
        EXPECT_EQ(a, b);
      }
    }
  }
}

TEST(Graph, SpanningTrees) {
  auto trees = spanning_trees(cycle_graph(3));
  EXPECT_EQ(std::set<EdgeSet>(trees.begin(), trees.end()),
            (std::set<EdgeSet>{{2, 3}, {1, 3}, {1, 2}}));
  EXPECT_EQ(spanning_trees(path_graph(4)), (std::vector<EdgeSet>{{1, 2, 3}}));
  Multigraph two;
  two.add_vertex(0);
  two.add_vertex(1);
  EXPECT_TRUE(spanning_trees(two).empty());
}

TEST(Graph, SpanningTreesMatchBruteForce) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 60; ++round) {
    int n = 1 + static_cast<int>(rng() % 5);
    Multigraph g = random_connected(rng, n, n - 1 + static_cast<int>(rng() % 4));
    auto trees = spanning_trees(g);
    std::set<EdgeSet> got(trees.begin(), trees.end());
    EXPECT_EQ(got.size(), trees.size());
    EXPECT_EQ(got, brute_spanning_trees(g));
  }
}

// Kirchhoff: the number of spanning trees is any cofactor of the Laplacian.
long long kirchhoff(const Multigraph& g) {
  const std::size_t n = g.num_vertices();
  if (n <= 1) return 1;
  std::vector<std::vector<double>> lap(n - 1, std::vector<double>(n - 1, 0));
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    std::size_t u = g.vertex_index(e.u), v = g.vertex_index(e.v);
    if (u < n - 1) lap[u][u] += 1;
    if (v < n - 1) lap[v][v] += 1;
    if (u < n - 1 && v < n - 1) {
      lap[u][v] -= 1;
      lap[v][u] -= 1;
    }
  }
  double det = 1;
  for (std::size_t c = 0; c < n - 1; ++c) {
    std::size_t p = c;
    for (std::size_t r = c; r < n - 1; ++r)
      if (std::abs(lap[r][c]) > std::abs(lap[p][c])) p = r;
    if (std::abs(lap[p][c]) < 1e-12) return 0;
    if (p != c) {
      std::swap(lap[p], lap[c]);
      det = -det;
    }
    det *= lap[c][c];
    for (std::size_t r = c + 1; r < n - 1; ++r) {
      double f = lap[r][c] / lap[c][c];
      for (std::size_t k = c; k < n - 1; ++k) lap[r][k] -= f * lap[c][k];
    }
  }
  return std::llround(det);
}

TEST(Graph, TreeCountMatchesKirchhoff) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 80; ++round) {
    int n = 1 + static_cast<int>(rng() % 6);
    Multigraph g = random_connected(rng, n, std::min(8, n - 1 + static_cast<int>(rng() % 5)));
    EXPECT_EQ(static_cast<long long>(spanning_trees(g).size()), kirchhoff(g));
  }
  EXPECT_EQ(spanning_trees(complete_graph(4)).size(), 16u);
}

TEST(Graph, SpanningForests) {
  auto single = spanning_2forests(path_graph(2));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_TRUE(single[0].tree1.empty());
  EXPECT_TRUE(single[0].tree2.empty());
  EXPECT_EQ(single[0].part1, (std::vector<VertexId>{0}));
  EXPECT_EQ(single[0].part2, (std::vector<VertexId>{1}));

  EXPECT_EQ(spanning_2forests(cycle_graph(3)).size(), 3u);
  EXPECT_EQ(spanning_2forests(banana_graph(2)).size(), 1u);

  Multigraph two;
  two.add_vertex(0);
  two.add_vertex(1);
  EXPECT_TRUE(spanning_2forests(two).empty());
}

// Independent count: over vertex bipartitions, the product of the
// spanning-tree counts of the two induced subgraphs.
std::size_t brute_forest_count(const Multigraph& g) {
  const std::size_t n = g.num_vertices();
  std::size_t total = 0;
  for (std::uint32_t side = 1; side + 1 < (1u << n); ++side) {
    if (!(side & 1)) continue;
    std::size_t product = 1;
    for (bool first : {true, false}) {
      Multigraph h;
      for (std::size_t i = 0; i < n; ++i)
        if (((side >> i) & 1) == first) h.add_vertex(g.vertices()[i]);
      for (const auto& e : g.edges())
        if (h.has_vertex(e.u) && h.has_vertex(e.v)) h.add_edge(e.id, e.u, e.v);
      product *= brute_spanning_trees(h).size();
    }
    total += product;
  }
  return total;
}

TEST(Graph, SpanningForestsWellFormed) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 50; ++round) {
    int n = 2 + static_cast<int>(rng() % 4);
    Multigraph g = random_connected(rng, n, n - 1 + static_cast<int>(rng() % 4));
    auto forests = spanning_2forests(g);
    EXPECT_EQ(forests.size(), brute_forest_count(g));
    for (const auto& f : forests) {
      std::vector<VertexId> all = f.part1;
      all.insert(all.end(), f.part2.begin(), f.part2.end());
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all, g.vertices());
      EXPECT_EQ(f.tree1.size() + 1, f.part1.size());
      EXPECT_EQ(f.tree2.size() + 1, f.part2.size());
      EXPECT_EQ(f.part1.front(), g.vertices().front());
    }
  }
}

TEST(Graph, Connectivity) {
  Multigraph one;
  one.add_vertex(0);
  EXPECT_TRUE(is_connected(one));
  EXPECT_TRUE(is_connected(Multigraph{}));
  Multigraph two;
  two.add_vertex(0);
  two.add_vertex(1);
  EXPECT_FALSE(is_connected(two));
  EXPECT_TRUE(is_connected(cycle_graph(3)));
}

// Exhaustive over edge orders.
int brute_vertex_width(const Multigraph& g) {
  std::vector<std::size_t> order(g.num_edges());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  int best = INT_MAX;
  do {
    int width = 0;
    for (std::size_t cut = 1; cut < order.size(); ++cut) {
      std::set<VertexId> left, common;
      for (std::size_t i = 0; i < cut; ++i) {
        left.insert(g.edges()[order[i]].u);
        left.insert(g.edges()[order[i]].v);
      }
      for (std::size_t i = cut; i < order.size(); ++i) {
        for (VertexId x : {g.edges()[order[i]].u, g.edges()[order[i]].v})
          if (left.count(x)) common.insert(x);
      }
      width = std::max(width, static_cast<int>(common.size()));
    }
    best = std::min(best, width);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

TEST(Graph, VertexWidth) {
  EXPECT_EQ(vertex_width(path_graph(3)), 1);
  EXPECT_EQ(vertex_width(cycle_graph(3)), 2);
  EXPECT_EQ(vertex_width(path_graph(2)), 0);
  Multigraph bare;
  bare.add_vertex(0);
  EXPECT_THROW(vertex_width(bare), InvalidArgument);
}

TEST(Graph, VertexWidthMatchesBruteForce) {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 40; ++round) {
    int n = 2 + static_cast<int>(rng() % 4);
    Multigraph g = random_connected(rng, n, std::min(7, n + static_cast<int>(rng() % 3)));
    const int w = vertex_width(g);
    EXPECT_EQ(w, brute_vertex_width(g));
    EXPECT_LE(w, static_cast<int>(g.num_vertices()));
    // Relabel edges in reverse.
    Multigraph r;
    for (VertexId v : g.vertices()) r.add_vertex(v);
    EdgeId id = static_cast<EdgeId>(g.num_edges());
    for (const auto& e : g.edges()) r.add_edge(id--, e.u, e.v);
    EXPECT_EQ(vertex_width(r), w);
  }
}

TEST(Graph, Minors) {
  EXPECT_TRUE(has_minor(complete_graph(4), cycle_graph(3)));
  EXPECT_FALSE(has_minor(cycle_graph(4), complete_graph(4)));
  Multigraph point;
  point.add_vertex(0);
  EXPECT_TRUE(has_minor(cycle_graph(5), point));
  EXPECT_TRUE(has_minor(wheel_graph(4), complete_graph(4)));
  EXPECT_FALSE(has_minor(complete_bipartite_graph(2, 4), complete_graph(4)));
  EXPECT_TRUE(has_minor(banana_graph(3), banana_graph(2)));
  EXPECT_FALSE(has_minor(cycle_graph(5), banana_graph(3)));
}

TEST(Graph, MinorRelationProperties) {
  std::vector<Multigraph> corpus = {cycle_graph(3), cycle_graph(4), complete_graph(4), banana_graph(2),
                                    wheel_graph(4), path_graph(3), complete_bipartite_graph(2, 3)};
  for (const auto& g : corpus) EXPECT_TRUE(has_minor(g, g));
  for (const auto& a : corpus)
    for (const auto& b : corpus)
      for (const auto& c : corpus)
        if (has_minor(a, b) && has_minor(b, c)) EXPECT_TRUE(has_minor(a, c));
  std::mt19937_64 rng(31);
  for (const auto& g : corpus) {
    for (const auto& h : corpus) {
      if (!has_minor(g, h)) continue;
      Multigraph bigger = g;
      VertexId u = g.vertices()[rng() % g.num_vertices()], v = g.vertices()[rng() % g.num_vertices()];
      bigger.add_edge(100, u, v);
      EXPECT_TRUE(has_minor(bigger, h));
    }
  }
}

TEST(Graph, RootedMinors) {
  Multigraph k4 = complete_graph(4);
  RootMap identity{{0, 1, 2, 3}, {0, 1, 2, 3}};
  EXPECT_TRUE(has_rooted_minor(k4, k4, {identity}));

  std::vector<RootMap> maps;
  std::vector<VertexId> perm = {0, 1, 2, 3};
  do {
    maps.push_back({{0, 1, 2, 3}, perm});
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_FALSE(has_rooted_minor(cycle_graph(4), k4, maps));

  Multigraph k24 = complete_bipartite_graph(2, 4);
  EXPECT_TRUE(has_rooted_minor(k24, k24, {RootMap{{2, 3, 4, 5}, {2, 3, 4, 5}}}));
  // Roots on the small side cannot land on the large side.
  EXPECT_FALSE(has_rooted_minor(k24, k24, {RootMap{{0, 1}, {2, 3}}}));
  EXPECT_THROW(has_rooted_minor(k4, k4, {RootMap{{0, 1}, {2, 2}}}), InvalidArgument);
}

TEST(Graph, Automorphisms) {
  EXPECT_EQ(automorphisms(complete_graph(4)).size(), 24u);
  EXPECT_EQ(automorphisms(cycle_graph(4)).size(), 8u);
  EXPECT_EQ(automorphisms(complete_bipartite_graph(3, 4)).size(), 144u);
  EXPECT_EQ(automorphisms(wagner_graph()).size(), 16u);
}

TEST(Graph, Momenta) {
  EXPECT_FALSE(momentum_nonzero({}, 4));
  EXPECT_TRUE(momentum_nonzero({1, 2}, 4));
  EXPECT_FALSE(momentum_nonzero({1, 2, 3, 4}, 4));
  EXPECT_EQ(add_momenta({1, 3}, {2}), (Momentum{1, 2, 3}));
  Multigraph c = cycle_graph(4);
  c.set_momentum(1, {1});
  c.set_momentum(3, {2});
  EXPECT_EQ(rooted_vertices(c, 2), (std::vector<VertexId>{1, 3}));
}

}  // namespace
}  // namespace feynred
