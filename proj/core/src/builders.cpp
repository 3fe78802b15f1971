#include "feynred/builders.hpp"

#include <algorithm>

namespace feynred {

namespace {

Multigraph with_vertices(int n) {
  Multigraph g;
  for (int v = 0; v < n; ++v) g.add_vertex(v);
  return g;
}

void link(Multigraph& g, VertexId u, VertexId v) {
  g.add_edge(static_cast<EdgeId>(g.num_edges()) + 1, u, v);
}

}  // namespace

Multigraph path_graph(int vertices) {
  Multigraph g = with_vertices(vertices);
  for (int v = 0; v + 1 < vertices; ++v) link(g, v, v + 1);
  return g;
}

Multigraph cycle_graph(int vertices) {
  Multigraph g = path_graph(vertices);
  if (vertices > 1) link(g, vertices - 1, 0);
  return g;
}

Multigraph banana_graph(int edges) {
  Multigraph g = with_vertices(2);
  for (int i = 0; i < edges; ++i) link(g, 0, 1);
  return g;
}

Multigraph complete_graph(int vertices) {
  Multigraph g = with_vertices(vertices);
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v) link(g, u, v);
  return g;
}

Multigraph complete_bipartite_graph(int a, int b) {
  Multigraph g = with_vertices(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = a; v < a + b; ++v) link(g, u, v);
  return g;
}

Multigraph wheel_graph(int spokes) {
  Multigraph g = with_vertices(spokes + 1);
  for (int i = 1; i <= spokes; ++i) link(g, i, i % spokes + 1);
  for (int i = 1; i <= spokes; ++i) link(g, 0, i);
  return g;
}

Multigraph wagner_graph() {
  Multigraph g = cycle_graph(8);
  for (int i = 0; i < 4; ++i) link(g, i, i + 4);
  return g;
}

KinematicsContext attach_onshell_momenta(Multigraph& g, const std::vector<VertexId>& vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    Momentum m = g.momentum(vertices[i]);
    m.push_back(static_cast<int>(i) + 1);
    std::sort(m.begin(), m.end());
    g.set_momentum(vertices[i], m);
  }
  std::vector<std::string> masses;
  for (const auto& e : g.edges()) {
    if (e.mass) masses.push_back(*e.mass);
  }
  return KinematicsContext(static_cast<int>(vertices.size()), std::vector<bool>(vertices.size(), true), masses);
}

}  // namespace feynred
