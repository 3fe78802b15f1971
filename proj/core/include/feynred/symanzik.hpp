#pragma once

#include <string>

#include "feynred/graph.hpp"
#include "feynred/kinematics.hpp"
#include "feynred/polynomial.hpp"

namespace feynred {

// Name of the Schwinger variable of an edge: a<id>.
std::string schwinger_name(EdgeId e);

// Schwinger variables in edge order, then the kinematic symbols of k.
RingPtr symanzik_ring(const Multigraph& g, const KinematicsContext& k);

// Kinematics of g with no external momenta and the masses used by its edges.
KinematicsContext massless_context(const Multigraph& g);

// Sum over spanning trees of the product of the Schwinger variables of the
// edges outside the tree. Zero for disconnected graphs.
Polynomial first_symanzik(const Multigraph& g, const RingPtr& ring);

// Sum over spanning 2-forests of (momentum into one tree)^2 times the
// complement product, plus first_symanzik * sum a_e msq_e. Zero for
// disconnected graphs.
Polynomial second_symanzik(const Multigraph& g, const KinematicsContext& k, const RingPtr& ring);

// Independent route to first_symanzik through the weighted reduced Laplacian
// determinant. Throws InvalidArgument on disconnected input.
Polynomial first_symanzik_oracle(const Multigraph& g, const RingPtr& ring);

}  // namespace feynred
