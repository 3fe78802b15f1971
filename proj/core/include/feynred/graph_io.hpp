#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "feynred/graph.hpp"
#include "feynred/kinematics.hpp"

namespace feynred {

// Line-oriented graph text:
//   # comment
//   momenta r=4 onshell=p1,p2,p3,p4
//   v <id> [momentum=p1+p2]
//   e <id> <u> <v> [mass=<symbol>]
struct GraphFile {
  Multigraph graph;
  KinematicsContext kinematics;
};

// Throws ParseError with the offending line.
GraphFile parse_graph(std::string_view text);
GraphFile read_graph_file(const std::string& path);

std::string write_graph(const Multigraph& g, const KinematicsContext& k);

}  // namespace feynred
