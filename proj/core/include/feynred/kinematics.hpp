#pragma once

#include <string>
#include <utility>
#include <vector>

#include "feynred/graph.hpp"
#include "feynred/polynomial.hpp"

namespace feynred {

// External momenta p1..pr with conservation p1 + ... + pr = 0. Squares of
// momentum sums are written in the symbols
//   s_i_i  = pi^2          for off-shell pi, i < r
//   s_i_j  = 2 pi.pj       for i < j < r
//   s_r_r  = pr^2          when pr is off-shell and r >= 3
// where, for r >= 3, s_{r-2}_{r-1} is eliminated through the expansion of
// pr^2 = (p1 + ... + p{r-1})^2. Masses enter as msq_<name>.
class KinematicsContext {
 public:
  KinematicsContext() = default;
  // onshell.size() must equal r.
  KinematicsContext(int r, std::vector<bool> onshell, std::vector<std::string> masses = {});

  int momenta() const noexcept { return r_; }
  bool onshell(int label) const { return onshell_.at(label - 1); }
  const std::vector<std::string>& masses() const noexcept { return masses_; }

  // Independent invariant symbols, then mass-square symbols.
  const std::vector<std::string>& invariant_symbols() const noexcept { return invariants_; }
  std::vector<std::string> mass_symbols() const;
  std::vector<Variable> variables() const;

  // The ring must declare variables(). Throws InvalidArgument for labels
  // outside 1..r.
  Polynomial momentum_square(const RingPtr& ring, const Momentum& m) const;
  // msq_<mass>; throws InvalidArgument for undeclared masses.
  Polynomial mass_square(const RingPtr& ring, const std::string& mass) const;

  static std::string mass_symbol(const std::string& mass) { return "msq_" + mass; }

 private:
  // Linear form in invariant symbols, as (symbol position, coefficient).
  using Form = std::vector<std::pair<std::size_t, int>>;

  // Value of pi^2 (i == j) or 2 pi.pj for i, j < r.
  const Form& pair(int i, int j) const { return pairs_[(i - 1) * (r_ - 1) + (j - 1)]; }

  int r_ = 0;
  std::vector<bool> onshell_;
  std::vector<std::string> masses_;
  std::vector<std::string> invariants_;
  std::vector<Form> pairs_;
};

}  // namespace feynred
