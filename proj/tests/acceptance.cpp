#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "census.hpp"
#include "feynred/builders.hpp"
#include "feynred/errors.hpp"
#include "feynred/factor.hpp"
#include "feynred/graph_io.hpp"
#include "feynred/minors.hpp"
#include "feynred/reduction.hpp"
#include "feynred/symanzik.hpp"
#include "support.hpp"

namespace {

using namespace feynred;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;  // 0: no time limit
  std::function<Outcome()> run;
};

std::string corpus_dir = FEYNRED_CORPUS_DIR;

struct SymanzikSet {
  std::string name;
  GraphFile file;
  RingPtr ring;
  std::vector<Polynomial> polys;
  std::vector<VarId> vars;
  bool four_point = false;
};

SymanzikSet make_set(std::string name, GraphFile file, bool four_point) {
  SymanzikSet s;
  s.name = std::move(name);
  s.file = std::move(file);
  s.four_point = four_point;
  s.ring = symanzik_ring(s.file.graph, s.file.kinematics);
  s.polys.push_back(first_symanzik(s.file.graph, s.ring));
  if (four_point) s.polys.push_back(second_symanzik(s.file.graph, s.file.kinematics, s.ring));
  s.vars = s.ring->of_kind(VariableKind::kSchwinger);
  return s;
}

// Symanzik sets of the corpus, with the census choice of notion.
const std::vector<SymanzikSet>& corpus() {
  static const std::vector<SymanzikSet> sets = [] {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
      if (entry.path().extension() == ".graph") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<SymanzikSet> out;
    for (const auto& p : paths) {
      GraphFile f = read_graph_file(p.string());
      bool four = rooted_vertices(f.graph, f.kinematics.momenta()).size() == 4;
      out.push_back(make_set(p.stem().string(), std::move(f), four));
    }
    return out;
  }();
  return sets;
}

struct CorpusVerdict {
  const SymanzikSet* set;
  Verdict verdict;
};

const std::vector<CorpusVerdict>& corpus_verdicts() {
  static const std::vector<CorpusVerdict> verdicts = [] {
    std::vector<CorpusVerdict> out;
    for (const auto& s : corpus()) out.push_back({&s, is_reducible(s.polys, s.vars)});
    return out;
  }();
  return verdicts;
}

std::string names(const RingPtr& ring, const std::vector<VarId>& vars) {
  std::string out;
  for (VarId v : vars) out += (out.empty() ? "" : ",") + ring->variable(v).name;
  return out;
}

bool reducible(const Multigraph& g, const KinematicsContext& k, bool with_phi) {
  RingPtr ring = symanzik_ring(g, k);
  std::vector<Polynomial> polys{first_symanzik(g, ring)};
  if (with_phi) polys.push_back(second_symanzik(g, k, ring));
  return is_reducible(polys, ring->of_kind(VariableKind::kSchwinger)).reducible;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    const int edges = 1 + static_cast<int>(rng() % 8);
    const int vertices = 1 + static_cast<int>(rng() % (edges + 1));
    Multigraph g = testing::random_connected(rng, vertices, edges);
    RingPtr ring = testing::schwinger_ring(g);
    if (first_symanzik(g, ring) != first_symanzik_oracle(g, ring)) {
      return {false, "mismatch on " + write_graph(g, {})};
    }
  }
  return {true, "200 graphs agree"};
}

Outcome deletion_contraction() {
  std::mt19937_64 rng(202);
  std::size_t edges_checked = 0, bridges = 0;
  for (int i = 0; i < 100; ++i) {
    const int edges = 2 + static_cast<int>(rng() % 6);
    const int vertices = 2 + static_cast<int>(rng() % edges);
    Multigraph g = testing::random_connected(rng, vertices, edges);
    // External momenta on random vertices, random masses on some edges.
    const int r = 2 + static_cast<int>(rng() % 3);
    std::vector<Momentum> at(g.num_vertices());
    for (int label = 1; label <= r; ++label) at[rng() % g.num_vertices()].push_back(label);
    Multigraph h;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) h.add_vertex(g.vertices()[v], at[v]);
    for (const auto& e : g.edges()) {
      std::optional<std::string> mass;
      if (rng() % 4 == 0) mass = rng() % 2 ? "m" : "M";
      h.add_edge(e.id, e.u, e.v, mass);
    }
    std::vector<bool> onshell(r);
    for (int k = 0; k < r; ++k) onshell[k] = rng() % 2;
    std::set<std::string> masses;
    for (const auto& e : h.edges()) {
      if (e.mass) masses.insert(*e.mass);
    }
    KinematicsContext k(r, onshell, {masses.begin(), masses.end()});
    RingPtr ring = symanzik_ring(h, k);
    const Polynomial psi = first_symanzik(h, ring), phi = second_symanzik(h, k, ring);
    for (const auto& e : h.edges()) {
      if (e.is_loop() || e.mass) continue;
      const VarId a = ring->at(schwinger_name(e.id));
      Multigraph del = delete_edge(h, e.id), con = contract_edge(h, e.id);
      const std::string where = " (edge " + std::to_string(e.id) + " of\n" + write_graph(h, k) + ")";
      if (partial_derivative(psi, a) != first_symanzik(del, ring)) return {false, "psi deletion" + where};
      if (eval_zero(psi, a) != first_symanzik(con, ring)) return {false, "psi contraction" + where};
      if (eval_zero(phi, a) != second_symanzik(con, k, ring)) return {false, "phi contraction" + where};
      ++edges_checked;
      // Deleting a bridge disconnects the graph, where the second polynomial
      // is not a deletion minor's polynomial.
      if (!is_connected(del)) {
        ++bridges;
        continue;
      }
      if (partial_derivative(phi, a) != second_symanzik(del, k, ring)) return {false, "phi deletion" + where};
    }
  }
  return {true, std::to_string(edges_checked) + " massless edges, " + std::to_string(bridges) +
                    " bridges skipped for the phi deletion identity"};
}

Outcome loop_identity() {
  std::size_t loops = 0, graphs = 0;
  for (const auto& s : corpus()) {
    bool any = false;
    for (const auto& e : s.file.graph.edges()) {
      if (!e.is_loop()) continue;
      if (e.mass) return {false, s.name + ": massive loop edge"};
      any = true;
      ++loops;
      const VarId a = s.ring->at(schwinger_name(e.id));
      Multigraph del = delete_edge(s.file.graph, e.id);
      const Polynomial alpha = Polynomial::variable(s.ring, a);
      if (first_symanzik(s.file.graph, s.ring) != alpha * first_symanzik(del, s.ring)) {
        return {false, s.name + ": psi identity fails for edge " + std::to_string(e.id)};
      }
      if (second_symanzik(s.file.graph, s.file.kinematics, s.ring) !=
          alpha * second_symanzik(del, s.file.kinematics, s.ring)) {
        return {false, s.name + ": phi identity fails for edge " + std::to_string(e.id)};
      }
    }
    graphs += any;
  }
  if (graphs == 0) return {false, "no loop-bearing corpus graph"};
  return {true, std::to_string(loops) + " loop edges in " + std::to_string(graphs) + " graphs"};
}

Outcome four_cycle() {
  Multigraph g = cycle_graph(4);
  KinematicsContext k = attach_onshell_momenta(g, {0, 1, 2, 3});
  RingPtr ring = symanzik_ring(g, k);
  std::vector<Polynomial> set{first_symanzik(g, ring), second_symanzik(g, k, ring)};
  auto vars = ring->of_kind(VariableKind::kSchwinger);
  Verdict compat = is_reducible(set, vars);
  Verdict fubini = fubini_is_reducible(set, vars);
  std::string detail = std::string("compat ") + (compat.reducible ? "reducible (" + names(ring, compat.witness) + ")"
                                                                   : "not reducible") +
                       ", fubini " +
                       (fubini.reducible ? "reducible (" + names(ring, fubini.witness) + ")" : "not reducible");
  return {compat.reducible && !fubini.reducible, detail};
}

Outcome k4_forbidden() {
  Multigraph g = complete_graph(4);
  KinematicsContext k = attach_onshell_momenta(g, {0, 1, 2, 3});
  if (reducible(g, k, true)) return {false, "K4 itself is reducible"};
  auto minors = single_step_minors(g);
  if (minors.size() != 12) return {false, std::to_string(minors.size()) + " single-step minors"};
  for (const auto& m : minors) {
    if (!reducible(m.graph, k, true)) {
      return {false, std::string(m.contraction ? "contraction" : "deletion") + " of edge " +
                         std::to_string(m.edge) + " is not reducible"};
    }
  }
  return {true, "K4 not reducible, 6 deletions and 6 contractions reducible"};
}

Outcome minor_closed() {
  std::mt19937_64 rng(606);
  std::set<std::string> seen;
  std::size_t graphs = 0, minors_checked = 0;
  for (int attempt = 0; attempt < 2000 && graphs < 10; ++attempt) {
    const int vertices = 4 + static_cast<int>(rng() % 2);
    const int edges = vertices - 1 + static_cast<int>(rng() % (7 - vertices + 1));
    if (edges > 6) continue;
    Multigraph g = testing::random_connected(rng, vertices, edges);
    std::vector<VertexId> roots = g.vertices();
    std::shuffle(roots.begin(), roots.end(), rng);
    roots.resize(4);
    KinematicsContext k = attach_onshell_momenta(g, roots);
    if (!seen.insert(write_graph(g, k)).second) continue;
    if (!reducible(g, k, true)) continue;
    ++graphs;
    for (const auto& m : single_step_minors(g)) {
      if (!is_connected(m.graph)) continue;
      ++minors_checked;
      if (!reducible(m.graph, k, true)) {
        return {false, std::string(m.contraction ? "contraction" : "deletion") + " of edge " +
                           std::to_string(m.edge) + " of\n" + write_graph(g, k) + "is not reducible"};
      }
    }
  }
  if (graphs < 10) return {false, "only " + std::to_string(graphs) + " reducible graphs found"};
  return {true, "10 graphs, " + std::to_string(minors_checked) + " connected single-step minors reducible"};
}

Outcome full_claim() {
  std::size_t sets = 0, checks = 0;
  for (const auto& [s, v] : corpus_verdicts()) {
    if (!v.reducible) continue;
    ++sets;
    for (VarId l : s->vars) {
      std::vector<Polynomial> leading, evaluated;
      for (const auto& p : s->polys) {
        if (p.is_zero()) continue;
        leading.push_back(leading_coefficient(p, l));
        evaluated.push_back(eval_zero(p, l));
      }
      checks += 2;
      if (!check_order(leading, s->vars, v.witness).reducible) {
        return {false, s->name + ": leading coefficients in " + s->ring->variable(l).name + " not reducible"};
      }
      if (!check_order(evaluated, s->vars, v.witness).reducible) {
        return {false, s->name + ": evaluation at " + s->ring->variable(l).name + " = 0 not reducible"};
      }
    }
  }
  return {sets > 0, std::to_string(sets) + " reducible sets, " + std::to_string(checks) + " derived sets"};
}

Outcome lc_resultant() {
  RingPtr ring = Ring::make({{"a1"}, {"a2"}, {"a3"}, {"a4"}, {"s", VariableKind::kKinematic}});
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> coeff(-4, 4);
  auto random_poly = [&] {
    // Degree at most one in a1, at most two in the others.
    Polynomial p(ring);
    const int terms = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t) {
      Monomial m;
      m.set(0, rng() % 2);
      for (std::size_t i = 1; i < ring->size(); ++i) m.set(i, rng() % 3);
      p += Polynomial::monomial(ring, m, coeff(rng));
    }
    return p;
  };
  int done = 0;
  while (done < 1000) {
    Polynomial f = random_poly(), g = random_poly();
    if (f.is_zero() || g.is_zero()) continue;
    VarId vl{static_cast<std::uint32_t>(1 + rng() % 4)};
    if (!lc_resultant_identity_check(f, g, VarId{0}, vl)) {
      return {false, "fails for " + f.to_string() + " and " + g.to_string()};
    }
    ++done;
  }
  return {true, "1000 pairs"};
}

// Copy of a set in a ring with one extra Schwinger variable "az".
struct Extended {
  RingPtr ring;
  std::vector<Polynomial> polys;
  std::vector<VarId> vars;
  Polynomial extra;
};

Extended extend(const SymanzikSet& s) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < s.ring->size(); ++i) vars.push_back(s.ring->variable(VarId{static_cast<std::uint32_t>(i)}));
  vars.push_back({"az"});
  Extended e;
  e.ring = Ring::make(vars);
  for (const auto& p : s.polys) e.polys.push_back(parse_polynomial(e.ring, p.to_string()));
  e.vars = e.ring->of_kind(VariableKind::kSchwinger);
  e.extra = Polynomial::variable(e.ring, e.ring->at("az"));
  return e;
}

bool contained(const ReductionSet& small, const ReductionSet& big) {
  for (const auto& m : small.members) {
    bool found = false;
    for (const auto& b : big.members) found = found || b.poly == m.poly;
    if (!found) return false;
  }
  return true;
}

Outcome property_suites() {
  std::size_t subset_checks = 0, factor_checks = 0, constant_checks = 0;
  for (const auto& [s, v] : corpus_verdicts()) {
    // Subset closure, with bracket inclusion along the witness.
    if (v.reducible && s->polys.size() > 1) {
      for (std::size_t i = 0; i < s->polys.size(); ++i) {
        std::vector<Polynomial> sub{s->polys[i]};
        ++subset_checks;
        if (!is_reducible(sub, s->vars).reducible) return {false, s->name + ": a subset is not reducible"};
        std::uint32_t prefix = 0;
        for (VarId x : v.witness) {
          auto pos = std::find(s->vars.begin(), s->vars.end(), x) - s->vars.begin();
          prefix |= 1u << pos;
          auto small = bracket_set(sub, s->vars, prefix);
          auto big = bracket_set(s->polys, s->vars, prefix);
          if (!small || !big || !contained(*small, *big)) {
            return {false, s->name + ": subset bracket not contained along the witness"};
          }
        }
      }
    }
    // Factoring invariance: {P1 * az, P2, ...} against its factors
    // {P1, az, P2, ...}; both are linear in every variable.
    Extended e = extend(*s);
    std::vector<Polynomial> product = e.polys, factors = e.polys;
    product[0] = product[0] * e.extra;
    factors.push_back(e.extra);
    ++factor_checks;
    const bool rp = is_reducible(product, e.vars).reducible, rf = is_reducible(factors, e.vars).reducible;
    if (rp != rf) return {false, s->name + ": product and factor presentations disagree"};
    if (rf != v.reducible) return {false, s->name + ": adding a monomial changed the verdict"};
    // Constant insensitivity, with constants dropped and kept.
    for (bool keep : {false, true}) {
      ReductionOptions o;
      o.keep_constants = keep;
      std::vector<Polynomial> with = s->polys;
      with.push_back(Polynomial::constant(s->ring, 7));
      ++constant_checks;
      if (is_reducible(with, s->vars, o).reducible != v.reducible ||
          is_reducible(s->polys, s->vars, o).reducible != v.reducible) {
        return {false, s->name + ": a constant changed the verdict"};
      }
    }
  }
  return {true, std::to_string(subset_checks) + " subset, " + std::to_string(factor_checks) + " factoring, " +
                    std::to_string(constant_checks) + " constant checks"};
}

// Canonical text of a multigraph up to vertex relabeling, by brute force over
// the permutations that preserve a degree-based vertex invariant.
std::string canonical(const Multigraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : g.edges()) edges.push_back({int(g.vertex_index(e.u)), int(g.vertex_index(e.v))});
  std::vector<int> degree(n, 0), loops(n, 0);
  for (auto [u, v] : edges) {
    ++degree[u];
    ++degree[v];
    if (u == v) ++loops[u];
  }
  std::vector<std::pair<std::pair<int, int>, std::size_t>> key;
  for (std::size_t i = 0; i < n; ++i) key.push_back({{degree[i], loops[i]}, i});
  std::sort(key.begin(), key.end());
  // order[k] = original vertex placed at position k; permute within blocks.
  std::vector<std::size_t> order;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || key[i].first != key[i - 1].first) blocks.push_back({i, i});
    ++blocks.back().second;
    order.push_back(key[i].second);
  }
  std::string best;
  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == blocks.size()) {
      std::vector<int> pos(n);
      for (std::size_t k = 0; k < n; ++k) pos[order[k]] = static_cast<int>(k);
      std::vector<std::pair<int, int>> mapped;
      for (auto [u, v] : edges) mapped.push_back(std::minmax(pos[u], pos[v]));
      std::sort(mapped.begin(), mapped.end());
      std::string text;
      for (auto [u, v] : mapped) text += std::to_string(u) + "-" + std::to_string(v) + " ";
      if (best.empty() || text < best) best = text;
      return;
    }
    auto [lo, hi] = blocks[b];
    std::sort(order.begin() + lo, order.begin() + hi);
    do {
      rec(b + 1);
    } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  rec(0);
  std::string sig;
  for (auto [k, i] : key) sig += std::to_string(k.first) + "/" + std::to_string(k.second) + " ";
  return std::to_string(n) + "|" + sig + "|" + best;
}

Outcome vertex_width_link() {
  // All connected multigraphs (loops and parallel edges allowed) with 1..6
  // edges, grown one edge at a time and deduplicated up to isomorphism.
  std::map<std::string, Multigraph> level;
  {
    Multigraph g;
    g.add_vertex(0);
    level[canonical(g)] = g;
  }
  std::size_t graphs = 0, scanned = 0;
  for (int edges = 1; edges <= 6; ++edges) {
    std::map<std::string, Multigraph> next;
    for (const auto& [key, g] : level) {
      const int n = static_cast<int>(g.num_vertices());
      auto grow = [&](Multigraph h, int u, int v) {
        if (!h.has_vertex(v)) h.add_vertex(v);
        h.add_edge(edges, u, v);
        next.emplace(canonical(h), std::move(h));
      };
      for (int u = 0; u < n; ++u) {
        for (int v = u; v < n; ++v) grow(g, u, v);
        grow(g, u, n);
      }
    }
    level = std::move(next);
    for (const auto& [key, g] : level) {
      ++graphs;
      if (vertex_width(g) > 3) continue;
      ++scanned;
      RingPtr ring = testing::schwinger_ring(g);
      if (!is_reducible({first_symanzik(g, ring)}, ring->of_kind(VariableKind::kSchwinger)).reducible) {
        return {false, "not reducible:\n" + write_graph(g, {})};
      }
    }
  }
  return {true, std::to_string(graphs) + " graphs up to isomorphism, " + std::to_string(scanned) +
                    " with vertex width <= 3, all reducible"};
}

Outcome k34_obstruction() {
  const auto& catalog = build_catalog();
  auto it = std::find_if(catalog.begin(), catalog.end(), [](const CatalogEntry& e) { return e.name == "K3,4"; });
  const Multigraph& g = it->graph;
  RingPtr ring = testing::schwinger_ring(g);
  const Polynomial psi = first_symanzik(g, ring);
  const auto vars = ring->of_kind(VariableKind::kSchwinger);
  const auto autos = automorphisms(g);
  // Edge permutation induced by each vertex automorphism.
  std::vector<std::vector<std::size_t>> edge_maps;
  for (const auto& perm : autos) {
    std::vector<std::size_t> map(g.num_edges());
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
      const auto& e = g.edges()[i];
      VertexId u = g.vertices()[perm[g.vertex_index(e.u)]], v = g.vertices()[perm[g.vertex_index(e.v)]];
      for (std::size_t j = 0; j < g.num_edges(); ++j) {
        const auto& f = g.edges()[j];
        if ((f.u == u && f.v == v) || (f.u == v && f.v == u)) map[i] = j;
      }
    }
    edge_maps.push_back(map);
  }
  std::mt19937_64 rng(1111);
  std::set<std::vector<std::size_t>> classes;
  std::string detail;
  int tested = 0;
  while (tested < 5) {
    std::vector<std::size_t> order(g.num_edges());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    // Orders equal up to symmetry need only the first 8 positions to agree.
    std::vector<std::size_t> least;
    for (const auto& map : edge_maps) {
      std::vector<std::size_t> image;
      for (std::size_t k = 0; k < 8; ++k) image.push_back(map[order[k]]);
      if (least.empty() || image < least) least = image;
    }
    if (!classes.insert(least).second) continue;
    ++tested;
    std::vector<VarId> prefix;
    for (std::size_t k = 0; k < 8; ++k) prefix.push_back(vars[order[k]]);
    SimpleReduction r = simple_reduction({psi}, prefix);
    detail += (detail.empty() ? "" : "; ") + names(ring, prefix) + ": ";
    if (r.completed) return {false, detail + "no nonlinearity within 8 steps"};
    const VarId blocked = prefix[r.failed_step - 1];
    detail += "step " + std::to_string(r.failed_step) + ", degree " + std::to_string(r.offending->degree(blocked));
  }
  return {true, detail};
}

Outcome census_determinism() {
  fs::path root = fs::temp_directory_path() / ("feynred-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  cli::CensusOptions o;
  o.cache_dir = (root / "cache").string();
  o.output = (root / "first.jsonl").string();
  auto first = cli::run_census(corpus_dir, o);
  o.output = (root / "second.jsonl").string();
  auto second = cli::run_census(corpus_dir, o);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const bool same = slurp(root / "first.jsonl") == slurp(root / "second.jsonl");
  fs::remove_all(root);
  std::ostringstream detail;
  detail << first.records << " records; first run " << first.computed << " computed, second run "
         << second.cache_hits << " cache hits, " << second.computed << " computed; files "
         << (same ? "identical" : "differ");
  return {same && first.records == 20 && second.cache_hits == second.records && second.computed == 0 &&
              first.unreadable.empty(),
          detail.str()};
}

std::vector<Criterion> criteria() {
  return {
      {1, "first polynomial equals the matrix-tree oracle", 10, oracle_equivalence},
      {2, "deletion and contraction identities", 30, deletion_contraction},
      {3, "loop identity on the corpus", 0, loop_identity},
      {4, "four-cycle: compatibility reducible, not Fubini reducible", 60, four_cycle},
      {5, "K4 four-point forbidden minor", 600, k4_forbidden},
      {6, "reducibility is minor closed", 0, minor_closed},
      {7, "leading coefficients and evaluations stay reducible", 0, full_claim},
      {8, "leading-coefficient resultant identity", 5, lc_resultant},
      {9, "subset, factoring and constant property suites", 0, property_suites},
      {10, "vertex width <= 3 implies first polynomial reducible", 600, vertex_width_link},
      {11, "K3,4 obstruction by step 8", 4 * 3600, k34_obstruction},
      {12, "census determinism and idempotence", 0, census_determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks, one line per criterion"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; exit status is 0 when exactly these fail");
  app.add_option("--corpus", corpus_dir, "Census corpus directory")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::set<int> failed;
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      out.pass = false;
      out.detail += "; over the time limit";
    }
    if (!out.pass) failed.insert(c.id);
    const bool expected = std::find(expect_fail.begin(), expect_fail.end(), c.id) != expect_fail.end();
    std::ostringstream time;
    time.precision(3);
    time << secs << " s";
    if (c.limit_s > 0) time << ", limit " << c.limit_s << " s";
    std::cout << "criterion " << (c.id < 10 ? " " : "") << c.id << ": "
              << (out.pass ? "PASS" : expected ? "FAIL (known)" : "FAIL") << "  " << c.title << " [" << time.str()
              << "] " << out.detail << std::endl;
  }
  std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (!only.empty()) {
    std::set<int> selected(only.begin(), only.end());
    std::set<int> kept;
    for (int id : expected) {
      if (selected.count(id)) kept.insert(id);
    }
    expected = kept;
  }
  if (failed != expected) {
    std::cout << "unexpected outcome: " << failed.size() << " failed, " << expected.size() << " expected to fail\n";
    return 1;
  }
  return 0;
}
