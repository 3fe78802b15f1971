#pragma once

#include "feynred/polynomial.hpp"

namespace feynred {

// Construction path that skips canonicalization when the caller already
// guarantees sorted, merged, nonzero terms.
class PolynomialBuilder {
 public:
  static Polynomial from_sorted(RingPtr ring, std::vector<Polynomial::Term> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
  }
  static std::vector<Polynomial::Term>& terms(Polynomial& p) { return p.terms_; }
};

}  // namespace feynred
