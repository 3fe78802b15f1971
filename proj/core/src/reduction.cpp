#include "feynred/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "layer_cache.hpp"

namespace feynred {

std::string to_string(const Label& l) {
  auto part = [](int x) { return x == Label::kInfinity ? std::string("inf") : std::to_string(x); };
  return "{" + part(l.lo) + "," + part(l.hi) + "}";
}

CompatibilityGraph::CompatibilityGraph(std::size_t n, bool complete) : n_(n), adj_(n * n, 0) {
  if (complete) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) adj_[i * n + j] = i != j;
  }
}

void CompatibilityGraph::connect(std::size_t i, std::size_t j) {
  if (i == j) return;
  adj_[i * n_ + j] = 1;
  adj_[j * n_ + i] = 1;
}

std::size_t CompatibilityGraph::edge_count() const {
  std::size_t c = 0;
  for (auto x : adj_) c += x;
  return c / 2;
}

bool CompatibilityGraph::complete() const { return edge_count() == n_ * (n_ - (n_ > 0)) / 2; }

std::vector<Polynomial> ReductionSet::polys() const {
  std::vector<Polynomial> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.poly);
  return out;
}

std::optional<std::size_t> ReductionSet::nonlinear_member(VarId v) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!feynred::linear_in(members[i].poly, v)) return i;
  }
  return std::nullopt;
}

bool ReductionSet::same_as(const ReductionSet& other) const {
  if (members.size() != other.members.size() || !(graph == other.graph)) return false;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!(members[i].poly == other.members[i].poly)) return false;
  }
  return true;
}

NotLinear::NotLinear(VarId v, Polynomial member)
    : Error("member not linear in variable: " + member.to_string()), var_(v), member_(std::move(member)) {}

struct FactorCache::Impl {
  mutable std::mutex mutex;
  std::unordered_map<Polynomial, std::vector<Polynomial>, PolynomialHash> table;
};

FactorCache::FactorCache() : impl_(std::make_unique<Impl>()) {}
FactorCache::~FactorCache() = default;

std::vector<Polynomial> FactorCache::factors(const Polynomial& p, const FactorBudget& budget) {
  {
    std::lock_guard lock(impl_->mutex);
    if (auto it = impl_->table.find(p); it != impl_->table.end()) return it->second;
  }
  std::vector<Polynomial> out;
  for (auto& [f, m] : factor_over_q(p, budget).factors) out.push_back(std::move(f));
  std::lock_guard lock(impl_->mutex);
  impl_->table.emplace(p, out);
  return out;
}

std::size_t FactorCache::size() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->table.size();
}

namespace {

struct PolyLess {
  bool operator()(const Polynomial& a, const Polynomial& b) const { return compare(a, b) < 0; }
};

Polynomial unit_like(const Polynomial& p) { return Polynomial::constant(p.ring(), 1); }

// Kinematic invariants and masses are coefficients, so a polynomial free of
// Schwinger variables counts as a constant.
bool coefficient_only(const Polynomial& p) {
  std::uint64_t schwinger = 0;
  for (VarId v : p.ring()->of_kind(VariableKind::kSchwinger)) schwinger |= std::uint64_t{1} << v.index;
  return (p.support() & schwinger) == 0;
}

// Builds members in canonical order and joins members whose labels share
// an element (0 and infinity included).
ReductionSet assemble(std::map<Polynomial, std::set<Label>, PolyLess>& acc, std::size_t universe,
                      bool complete) {
  ReductionSet out;
  const std::size_t words = (universe + 2 + 63) / 64;
  std::vector<std::vector<std::uint64_t>> elements;
  for (auto& [p, labels] : acc) {
    std::vector<std::uint64_t> bits(words, 0);
    for (const auto& l : labels) {
      for (int x : {l.lo, l.hi}) {
        std::size_t pos = x == Label::kInfinity ? universe + 1 : static_cast<std::size_t>(x);
        bits[pos / 64] |= std::uint64_t{1} << (pos % 64);
      }
    }
    elements.push_back(std::move(bits));
    out.members.push_back({p, std::vector<Label>(labels.begin(), labels.end())});
  }
  const std::size_t n = out.members.size();
  out.graph = CompatibilityGraph(n, complete);
  if (!complete) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t w = 0; w < words; ++w) {
          if (elements[i][w] & elements[j][w]) {
            out.graph.connect(i, j);
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

ReductionSet initial_set(const std::vector<Polynomial>& polys, const ReductionOptions& options) {
  std::set<Polynomial, PolyLess> seen;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    if (coefficient_only(p)) {
      if (options.keep_constants) seen.insert(unit_like(p));
      continue;
    }
    seen.insert(normalize(p));
  }
  ReductionSet out;
  for (const auto& p : seen) out.members.push_back({p, {}});
  out.graph = CompatibilityGraph(out.members.size(), true);
  return out;
}

ReductionSet reduction_step(const ReductionSet& s, VarId v, const ReductionOptions& options,
                            FactorCache* cache) {
  if (auto bad = s.nonlinear_member(v)) throw NotLinear(v, s.members[*bad].poly);
  FactorCache local;
  FactorCache& factors = cache ? *cache : local;
  const std::size_t n = s.members.size();
  std::vector<Polynomial> g(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = partial_derivative(s.members[i].poly, v);
    h[i] = eval_zero(s.members[i].poly, v);
  }

  std::map<Polynomial, std::set<Label>, PolyLess> acc;
  auto add = [&](const Polynomial& p, Label l) {
    if (p.is_zero()) return;
    if (coefficient_only(p)) {
      if (options.keep_constants) acc[unit_like(p)].insert(l);
      return;
    }
    bool constant_factor = false;
    for (auto& q : factors.factors(p, options.factor_budget)) {
      if (coefficient_only(q)) {
        constant_factor = true;
        continue;
      }
      acc[std::move(q)].insert(l);
    }
    if (constant_factor && options.keep_constants) acc[unit_like(p)].insert(l);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const int idx = static_cast<int>(i + 1);
    add(g[i], {Label::kZero, idx});
    add(h[i], {idx, Label::kInfinity});
    if (g[i].is_zero()) add(h[i], {Label::kZero, idx});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!options.fubini && !s.graph.adjacent(i, j)) continue;
      add(g[i] * h[j] - h[i] * g[j], {static_cast<int>(i + 1), static_cast<int>(j + 1)});
    }
  }
  return assemble(acc, n, options.fubini);
}

ReductionSet intersect(const ReductionSet& a, const ReductionSet& b) {
  std::vector<std::size_t> ia, ib;
  std::size_t i = 0, j = 0;
  while (i < a.members.size() && j < b.members.size()) {
    auto c = compare(a.members[i].poly, b.members[j].poly);
    if (c < 0) {
      ++i;
    } else if (c > 0) {
      ++j;
    } else {
      ia.push_back(i++);
      ib.push_back(j++);
    }
  }
  ReductionSet out;
  for (std::size_t k : ia) out.members.push_back(a.members[k]);
  out.graph = CompatibilityGraph(ia.size());
  for (std::size_t x = 0; x < ia.size(); ++x) {
    for (std::size_t y = x + 1; y < ia.size(); ++y) {
      if (a.graph.adjacent(ia[x], ia[y]) && b.graph.adjacent(ib[x], ib[y])) out.graph.connect(x, y);
    }
  }
  return out;
}

SimpleReduction simple_reduction(const std::vector<Polynomial>& polys, const std::vector<VarId>& order,
                                 const ReductionOptions& options) {
  SimpleReduction out;
  FactorCache cache;
  out.sets.push_back(initial_set(polys, options));
  for (std::size_t k = 0; k < order.size(); ++k) {
    const ReductionSet& cur = out.sets.back();
    if (auto bad = cur.nonlinear_member(order[k])) {
      out.failed_step = k + 1;
      out.offending = cur.members[*bad].poly;
      return out;
    }
    out.sets.push_back(reduction_step(cur, order[k], options, &cache));
  }
  out.completed = true;
  return out;
}

namespace {

// Brackets of all subsets of `within`, layer by layer.
class BracketLattice {
 public:
  BracketLattice(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                 const ReductionOptions& options)
      : vars_(vars), options_(options), n_(vars.size()) {
    if (n_ > options.max_variables) {
      throw ResourceLimit("reduction over " + std::to_string(n_) + " variables exceeds the budget of " +
                          std::to_string(options.max_variables));
    }
    if (n_ > 24) throw ResourceLimit("reduction limited to 24 variables");
    initial_ = initial_set(polys, options);
    lin_.assign(std::size_t{1} << n_, 0);
    defined_.assign(std::size_t{1} << n_, 0);
    RingPtr ring = polys.empty() ? RingPtr{} : polys.front().ring();
    cache_.emplace(options.cache_dir, cache_key(ring), ring);
  }

  void run(std::uint32_t within, std::size_t top) {
    std::vector<std::vector<std::uint32_t>> by_size(n_ + 1);
    for (std::uint32_t sub = within;; sub = (sub - 1) & within) {
      by_size[std::popcount(sub)].push_back(sub);
      if (sub == 0) break;
    }
    for (auto& layer : by_size) std::sort(layer.begin(), layer.end());

    current_.clear();
    current_.emplace(0u, initial_);
    record(0, initial_);
    for (std::size_t k = 1; k <= top && k <= n_; ++k) {
      const auto& masks = by_size[k];
      std::vector<std::optional<ReductionSet>> results(masks.size());
      bool cached = false;
      if (within == full() && cache_->enabled()) {
        if (auto entries = cache_->load(k); entries && entries->size() == masks.size()) {
          for (std::size_t i = 0; i < masks.size(); ++i) results[i] = std::move((*entries)[i].set);
          cached = true;
          ++layers_from_cache_;
        }
      }
      if (!cached) {
        compute_layer(masks, results);
        if (within == full() && cache_->enabled()) {
          std::vector<LayerEntry> entries;
          for (std::size_t i = 0; i < masks.size(); ++i) entries.push_back({masks[i], results[i]});
          cache_->store(k, entries);
        }
      }
      std::unordered_map<std::uint32_t, ReductionSet> next;
      for (std::size_t i = 0; i < masks.size(); ++i) {
        if (!results[i]) continue;
        record(masks[i], *results[i]);
        next.emplace(masks[i], std::move(*results[i]));
      }
      current_ = std::move(next);
    }
  }

  std::uint32_t full() const { return n_ == 32 ? ~0u : (std::uint32_t{1} << n_) - 1; }
  bool defined(std::uint32_t mask) const { return defined_[mask] != 0; }
  std::uint32_t linear_mask(std::uint32_t mask) const { return lin_[mask]; }
  std::size_t defined_count() const { return defined_count_; }
  std::size_t layers_from_cache() const { return layers_from_cache_; }
  const std::unordered_map<std::uint32_t, ReductionSet>& last_layer() const { return current_; }

 private:
  std::string cache_key(const RingPtr& ring) const {
    std::string key = "v1|";
    if (ring) {
      for (const auto& v : ring->variables()) key += v.name + ",";
    }
    key += "|vars:";
    for (VarId v : vars_) key += std::to_string(v.index) + ",";
    key += "|kc" + std::to_string(options_.keep_constants) + "|st" + std::to_string(options_.strict_brackets) +
           "|fb" + std::to_string(options_.fubini) + "|";
    for (const auto& m : initial_.members) key += m.poly.to_string() + ";";
    return key;
  }

  void record(std::uint32_t mask, const ReductionSet& s) {
    defined_[mask] = 1;
    ++defined_count_;
    std::uint32_t lin = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (s.linear_in(vars_[j])) lin |= std::uint32_t{1} << j;
    }
    lin_[mask] = lin;
  }

  bool branch_exists(std::uint32_t mask, std::size_t i) const {
    std::uint32_t prev = mask & ~(std::uint32_t{1} << i);
    return current_.count(prev) && (lin_[prev] >> i & 1);
  }

  std::optional<ReductionSet> compute(std::uint32_t mask) {
    if (options_.strict_brackets) {
      for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
        if (!branch_exists(mask, std::countr_zero(rest))) return std::nullopt;
      }
    }
    std::optional<ReductionSet> acc;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const std::size_t i = std::countr_zero(rest);
      if (!branch_exists(mask, i)) continue;
      const ReductionSet& prev = current_.at(mask & ~(std::uint32_t{1} << i));
      ReductionSet r = reduction_step(prev, vars_[i], options_, &factors_);
      acc = acc ? intersect(*acc, r) : std::move(r);
      if (acc->members.empty()) break;
    }
    return acc;
  }

  void compute_layer(const std::vector<std::uint32_t>& masks, std::vector<std::optional<ReductionSet>>& results) {
    const unsigned workers = std::max(1u, std::min<unsigned>(options_.workers, masks.size()));
    if (workers == 1) {
      for (std::size_t i = 0; i < masks.size(); ++i) results[i] = compute(masks[i]);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= masks.size()) return;
        try {
          results[i] = compute(masks[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = masks.size();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<VarId> vars_;
  ReductionOptions options_;
  std::size_t n_;
  ReductionSet initial_;
  std::vector<std::uint32_t> lin_;
  std::vector<std::uint8_t> defined_;
  std::size_t defined_count_ = 0;
  std::size_t layers_from_cache_ = 0;
  std::unordered_map<std::uint32_t, ReductionSet> current_;
  FactorCache factors_;
  std::optional<LayerCache> cache_;
};

}  // namespace

Verdict is_reducible(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                     const ReductionOptions& options) {
  Verdict out;
  const std::size_t n = vars.size();
  if (n == 0) {
    out.reducible = true;
    return out;
  }
  BracketLattice lattice(polys, vars, options);
  const std::uint32_t full = lattice.full();
  lattice.run(full, n - 1);
  out.subsets_defined = lattice.defined_count();
  out.layers_from_cache = lattice.layers_from_cache();

  // good[A]: A can be extended to a full order with every prefix linear in
  // the next variable.
  std::vector<std::uint8_t> good(std::size_t{1} << n, 0);
  std::vector<std::uint32_t> masks(std::size_t{1} << n);
  for (std::uint32_t m = 0; m <= full && m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });
  for (std::uint32_t mask : masks) {
    if (mask == full || !lattice.defined(mask)) continue;
    const std::uint32_t lin = lattice.linear_mask(mask);
    for (std::size_t a = 0; a < n && !good[mask]; ++a) {
      std::uint32_t bit = std::uint32_t{1} << a;
      if (mask & bit || !(lin & bit)) continue;
      good[mask] = (mask | bit) == full || good[mask | bit];
    }
  }
  out.reducible = good[0] != 0;
  if (out.reducible) {
    std::uint32_t mask = 0;
    while (mask != full) {
      for (std::size_t a = 0; a < n; ++a) {
        std::uint32_t bit = std::uint32_t{1} << a;
        if (mask & bit || !(lattice.linear_mask(mask) & bit)) continue;
        if ((mask | bit) == full || good[mask | bit]) {
          out.witness.push_back(vars[a]);
          mask |= bit;
          break;
        }
      }
    }
  }
  return out;
}

Verdict fubini_is_reducible(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                            ReductionOptions options) {
  options.fubini = true;
  return is_reducible(polys, vars, options);
}

OrderCheck check_order(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                       const std::vector<VarId>& order, const ReductionOptions& options) {
  std::vector<VarId> sorted_order = order, sorted_vars = vars;
  std::sort(sorted_order.begin(), sorted_order.end());
  std::sort(sorted_vars.begin(), sorted_vars.end());
  if (sorted_order != sorted_vars || std::adjacent_find(sorted_vars.begin(), sorted_vars.end()) != sorted_vars.end()) {
    throw InvalidArgument("order must be a permutation of the reduction variables");
  }
  OrderCheck out;
  if (vars.empty()) {
    out.reducible = true;
    return out;
  }
  BracketLattice lattice(polys, vars, options);
  lattice.run(lattice.full(), vars.size() - 1);
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t pos = std::find(vars.begin(), vars.end(), order[k]) - vars.begin();
    if (!lattice.defined(mask) || !(lattice.linear_mask(mask) >> pos & 1)) {
      out.failed_step = k + 1;
      return out;
    }
    mask |= std::uint32_t{1} << pos;
  }
  out.reducible = true;
  return out;
}

std::optional<ReductionSet> bracket_set(const std::vector<Polynomial>& polys, const std::vector<VarId>& vars,
                                        std::uint32_t subset, const ReductionOptions& options) {
  BracketLattice lattice(polys, vars, options);
  subset &= lattice.full();
  lattice.run(subset, std::popcount(subset));
  const auto& last = lattice.last_layer();
  if (auto it = last.find(subset); it != last.end()) return it->second;
  return std::nullopt;
}

}  // namespace feynred
