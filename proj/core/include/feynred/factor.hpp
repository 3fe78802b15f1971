#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "feynred/polynomial.hpp"

namespace feynred {

struct Factorization {
  mpq_class unit{1};
  // Irreducible over Q, primitive integral, positive leading coefficient,
  // sorted by compare().
  std::vector<std::pair<Polynomial, unsigned>> factors;

  // unit * prod factor^multiplicity.
  Polynomial expand(const RingPtr& ring) const;
};

// Guard rails for the general (non-linear) factorization path.
struct FactorBudget {
  unsigned max_total_degree = 24;
  // Degree of the univariate image after Kronecker substitution.
  unsigned max_kronecker_degree = 1200;
  // Modular factors allowed in a recombination search.
  std::size_t max_modular_factors = 16;
};

// Primitive integral associate of p with positive leading coefficient.
// When `scale` is given, p == *scale * result. Zero maps to zero.
Polynomial normalize(const Polynomial& p, mpq_class* scale = nullptr);

// a / b when b divides a over Q; nullopt otherwise. Throws on b == 0.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

// Normalized gcd over Q; gcd(0, 0) == 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

// Throws InvalidArgument on zero input and ResourceLimit when the budget
// is exceeded.
Factorization factor_over_q(const Polynomial& p, const FactorBudget& budget = {});

// (d f/dv) * g|v=0 - (d g/dv) * f|v=0 for f, g linear in v.
// Throws InvalidArgument otherwise.
Polynomial pair_resultant(const Polynomial& f, const Polynomial& g, VarId v);

// Compares pair_resultant of the leading coefficients in vl against the
// leading coefficient in vl of pair_resultant(f, g, v1).
bool lc_resultant_identity_check(const Polynomial& f, const Polynomial& g, VarId v1, VarId vl);

}  // namespace feynred
