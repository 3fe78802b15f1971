#pragma once

#include <climits>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "feynred/errors.hpp"
#include "feynred/factor.hpp"
#include "feynred/polynomial.hpp"

namespace feynred {

// Provenance tag {lo, hi} over {0, 1..n, infinity}; indices refer to the
// members of the set a step was applied to, counted from 1.
struct Label {
  static constexpr int kZero = 0;
  static constexpr int kInfinity = INT_MAX;

  int lo = 0;
  int hi = 0;

  auto operator<=>(const Label&) const = default;
};

std::string to_string(const Label& l);

struct LabeledPoly {
  Polynomial poly;            // normalized
  std::vector<Label> labels;  // sorted, unique
};

class CompatibilityGraph {
 public:
  CompatibilityGraph() = default;
  explicit CompatibilityGraph(std::size_t n, bool complete = false);

  std::size_t size() const noexcept { return n_; }
  bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  void connect(std::size_t i, std::size_t j);
  std::size_t edge_count() const;
  bool complete() const;

  bool operator==(const CompatibilityGraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
};

// Members in canonical order (compare()), no two equal up to a constant.
struct ReductionSet {
  std::vector<LabeledPoly> members;
  CompatibilityGraph graph;

  std::vector<Polynomial> polys() const;
  // Index of the first member of degree > 1 in v.
  std::optional<std::size_t> nonlinear_member(VarId v) const;
  bool linear_in(VarId v) const { return !nonlinear_member(v); }
  // Same members and edges; labels are not compared.
  bool same_as(const ReductionSet& other) const;
};

class NotLinear : public Error {
 public:
  NotLinear(VarId v, Polynomial member);
  VarId variable() const noexcept { return var_; }
  const Polynomial& member() const noexcept { return member_; }

 private:
  VarId var_;
  Polynomial member_;
};

struct ReductionOptions {
  // Keep a canonical 1 for constants instead of dropping them.
  bool keep_constants = false;
  // A bracket needs every branch to exist rather than at least one.
  bool strict_brackets = false;
  // Every compatibility graph complete.
  bool fubini = false;
  std::size_t max_variables = 12;
  unsigned workers = 1;
  // Directory for per-layer bracket caches; empty disables it.
  std::string cache_dir;
  FactorBudget factor_budget;
};

// Irreducible-factor lists memoized across steps; safe to share between
// threads.
class FactorCache {
 public:
  FactorCache();
  ~FactorCache();
  // Normalized nonconstant irreducible factors, without multiplicity.
  std::vector<Polynomial> factors(const Polynomial& p, const FactorBudget& budget);
  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Normalized, deduplicated input set with the complete graph.
ReductionSet initial_set(const std::vector<Polynomial>& polys, const ReductionOptions& options = {});

// One elimination of v. Throws NotLinear when a member has degree > 1 in v.
ReductionSet reduction_step(const ReductionSet& s, VarId v, const ReductionOptions& options = {},
                            FactorCache* cache = nullptr);

// Members common to both (up to constant factors) with the common edges.
ReductionSet intersect(const ReductionSet& a, const ReductionSet& b);

struct SimpleReduction {
  // sets[k] is the set after k steps; sets[0] is the initial set.
  std::vector<ReductionSet> sets;
  bool completed = false;
  // 1-based step at which the order was blocked; 0 when completed.
  std::size_t failed_step = 0;
  std::optional<Polynomial> offending;
};

SimpleReduction simple_reduction(const std::vector<Polynomial>& polys, const std::vector<VarId>& order,
                                 const ReductionOptions& options = {});

struct Verdict {
  bool reducible = false;
  // Lexicographically least order (by position in the variable list).
  std::vector<VarId> witness;
  std::size_t subsets_defined = 0;
  std::size_t layers_from_cache = 0;
};

// Throws ResourceLimit when vars exceeds options.max_variables or a
// factorization exceeds its budget.
Verdict is_reducible(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                     const ReductionOptions& options = {});
Verdict fubini_is_reducible(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                            ReductionOptions options = {});

struct OrderCheck {
  bool reducible = false;
  // 1-based position in the order whose variable was not admissible; 0 when
  // reducible.
  std::size_t failed_step = 0;
};

// Reducibility with respect to one order, a permutation of vars.
OrderCheck check_order(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                       const std::vector<VarId>& order, const ReductionOptions& options = {});

// Bracket set of the variables selected by `subset` (bit i = vars[i]);
// nullopt when it is undefined.
std::optional<ReductionSet> bracket_set(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                                        std::uint32_t subset, const ReductionOptions& options = {});

}  // namespace feynred
