#pragma once

// Dense univariate polynomials over Z and their factorization
// (Cantor-Zassenhaus modulo p, Hensel lifting, factor recombination).

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace feynred::univariate {

// Coefficients lowest degree first; zero polynomial is empty.
using ZPoly = std::vector<mpz_class>;

void trim(ZPoly& a);
inline int deg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly derivative(const ZPoly& a);
mpz_class content(const ZPoly& a);
// Primitive part with positive leading coefficient.
ZPoly primitive(const ZPoly& a);
// Exact quotient over Z, or nullopt when b does not divide a.
std::optional<ZPoly> divexact(const ZPoly& a, const ZPoly& b);
// Primitive gcd with positive leading coefficient.
ZPoly gcd(const ZPoly& a, const ZPoly& b);

struct Factorization {
  mpz_class unit;  // signed content
  std::vector<std::pair<ZPoly, int>> factors;  // irreducible, primitive, lc > 0
};

struct Limits {
  std::size_t max_modular_factors = 16;
};

// Complete factorization over Z of a nonzero polynomial.
// Throws ResourceLimit when recombination would exceed the limits.
Factorization factor(const ZPoly& f, const Limits& limits = {});

// True iff f (nonconstant) is irreducible over Q.
bool is_irreducible(const ZPoly& f, const Limits& limits = {});

}  // namespace feynred::univariate
