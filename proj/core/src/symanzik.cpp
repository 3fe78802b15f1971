#include "feynred/symanzik.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "feynred/errors.hpp"

namespace feynred {

std::string schwinger_name(EdgeId e) { return "a" + std::to_string(e); }

RingPtr symanzik_ring(const Multigraph& g, const KinematicsContext& k) {
  std::vector<Variable> vars;
  for (const auto& e : g.edges()) vars.push_back({schwinger_name(e.id), VariableKind::kSchwinger});
  for (auto& v : k.variables()) vars.push_back(std::move(v));
  return Ring::make(std::move(vars));
}

KinematicsContext massless_context(const Multigraph& g) {
  std::vector<std::string> masses;
  for (const auto& e : g.edges()) {
    if (e.mass) masses.push_back(*e.mass);
  }
  return KinematicsContext(0, {}, std::move(masses));
}

namespace {

std::vector<VarId> edge_vars(const Multigraph& g, const RingPtr& ring) {
  std::vector<VarId> out;
  for (const auto& e : g.edges()) out.push_back(ring->at(schwinger_name(e.id)));
  return out;
}

// Product of the Schwinger variables of edges not in `inside` (sorted ids).
Monomial complement(const Multigraph& g, const std::vector<VarId>& vars, const EdgeSet& inside) {
  Monomial m;
  std::size_t k = 0;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    EdgeId id = g.edges()[i].id;
    while (k < inside.size() && inside[k] < id) ++k;
    if (k < inside.size() && inside[k] == id) continue;
    m.set(vars[i], 1);
  }
  return m;
}

}  // namespace

Polynomial first_symanzik(const Multigraph& g, const RingPtr& ring) {
  const auto vars = edge_vars(g, ring);
  std::vector<Polynomial::Term> terms;
  for_each_spanning_tree(g, [&](const EdgeSet& t) { terms.push_back({complement(g, vars, t), 1}); });
  return Polynomial::from_terms(ring, std::move(terms));
}

Polynomial second_symanzik(const Multigraph& g, const KinematicsContext& k, const RingPtr& ring) {
  const auto vars = edge_vars(g, ring);
  for (const auto& e : g.edges()) {
    if (e.mass) k.mass_square(ring, *e.mass);
  }
  for (VertexId v : g.vertices()) {
    for (int label : g.momentum(v)) {
      if (label < 1 || label > k.momenta()) {
        throw InvalidArgument("vertex " + std::to_string(v) + " carries undeclared momentum p" +
                              std::to_string(label));
      }
    }
  }

  std::vector<Polynomial::Term> terms;
  // Squares only depend on the momentum multiset of one side.
  std::map<Momentum, Polynomial> squares;
  for_each_spanning_2forest(g, [&](const SpanningForestPair& f) {
    Momentum m;
    for (VertexId v : f.part1) m = add_momenta(m, g.momentum(v));
    auto it = squares.find(m);
    if (it == squares.end()) it = squares.emplace(m, k.momentum_square(ring, m)).first;
    if (it->second.is_zero()) return;
    EdgeSet inside = f.tree1;
    inside.insert(inside.end(), f.tree2.begin(), f.tree2.end());
    std::sort(inside.begin(), inside.end());
    Monomial c = complement(g, vars, inside);
    for (const auto& t : it->second.terms()) terms.push_back({t.monomial * c, t.coeff});
  });
  Polynomial phi = Polynomial::from_terms(ring, std::move(terms));

  Polynomial masses(ring);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.edges()[i];
    if (e.mass) masses += Polynomial::variable(ring, vars[i]) * k.mass_square(ring, *e.mass);
  }
  if (!masses.is_zero()) phi += first_symanzik(g, ring) * masses;
  return phi;
}

namespace {

// Determinant by cofactor expansion along rows, memoized on the set of
// columns still available.
class Determinant {
 public:
  explicit Determinant(const std::vector<std::vector<Polynomial>>& m) : m_(m), n_(m.size()) {}

  Polynomial value(const RingPtr& ring) {
    if (n_ == 0) return Polynomial::constant(ring, 1);
    return minor(0, (std::uint32_t{1} << n_) - 1, ring);
  }

 private:
  Polynomial minor(std::size_t row, std::uint32_t cols, const RingPtr& ring) {
    if (row == n_) return Polynomial::constant(ring, 1);
    if (auto it = memo_.find(cols); it != memo_.end()) return it->second;
    Polynomial sum(ring);
    int sign = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      if (!(cols >> c & 1)) continue;
      if (!m_[row][c].is_zero()) {
        Polynomial term = m_[row][c] * minor(row + 1, cols & ~(std::uint32_t{1} << c), ring);
        if (sign > 0) {
          sum += term;
        } else {
          sum -= term;
        }
      }
      sign = -sign;
    }
    memo_.emplace(cols, sum);
    return sum;
  }

  const std::vector<std::vector<Polynomial>>& m_;
  std::size_t n_;
  std::unordered_map<std::uint32_t, Polynomial> memo_;
};

}  // namespace

Polynomial first_symanzik_oracle(const Multigraph& g, const RingPtr& ring) {
  if (!is_connected(g)) throw InvalidArgument("oracle requires a connected graph");
  if (g.num_vertices() > 25) throw ResourceLimit("oracle limited to 25 vertices");
  const auto vars = edge_vars(g, ring);
  const std::size_t n = g.num_vertices();
  // Weighted Laplacian with the last vertex removed; weight of e is a_e.
  std::vector<std::vector<Polynomial>> lap(n - 1, std::vector<Polynomial>(n - 1, Polynomial(ring)));
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.edges()[i];
    if (e.is_loop()) continue;
    Polynomial w = Polynomial::variable(ring, vars[i]);
    std::size_t u = g.vertex_index(e.u), v = g.vertex_index(e.v);
    if (u + 1 < n) lap[u][u] += w;
    if (v + 1 < n) lap[v][v] += w;
    if (u + 1 < n && v + 1 < n) {
      lap[u][v] -= w;
      lap[v][u] -= w;
    }
  }
  Polynomial kirchhoff = Determinant(lap).value(ring);
  // Each monomial of the determinant is a spanning tree; pass to complements.
  std::vector<Polynomial::Term> terms;
  for (const auto& t : kirchhoff.terms()) {
    Monomial c;
    for (VarId v : vars) {
      if (t.monomial[v] > 1) throw Error("internal: non-squarefree Kirchhoff monomial");
      if (t.monomial[v] == 0) c.set(v, 1);
    }
    terms.push_back({c, t.coeff});
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

}  // namespace feynred
