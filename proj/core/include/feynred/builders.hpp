#pragma once

#include <vector>

#include "feynred/graph.hpp"
#include "feynred/kinematics.hpp"

namespace feynred {

// Standard families. Vertices are numbered from 0, edges from 1 in the
// order listed; no external momenta.
Multigraph path_graph(int vertices);
Multigraph cycle_graph(int vertices);
// n parallel edges between vertices 0 and 1.
Multigraph banana_graph(int edges);
Multigraph complete_graph(int vertices);
// Sides 0..a-1 and a..a+b-1.
Multigraph complete_bipartite_graph(int a, int b);
// Hub 0, rim 1..n.
Multigraph wheel_graph(int spokes);
// 8-cycle with the chords {i, i+4}.
Multigraph wagner_graph();

// Puts p1..pk on the given vertices, one each, and returns the matching
// all on-shell context.
KinematicsContext attach_onshell_momenta(Multigraph& g, const std::vector<VertexId>& vertices);

}  // namespace feynred
