#include "feynred/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "feynred/errors.hpp"

namespace feynred {

void Multigraph::add_vertex(VertexId id, Momentum momentum) {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
  if (it != vertices_.end() && *it == id) {
    throw InvalidArgument("duplicate vertex " + std::to_string(id));
  }
  std::sort(momentum.begin(), momentum.end());
  auto pos = it - vertices_.begin();
  vertices_.insert(it, id);
  momenta_.insert(momenta_.begin() + pos, std::move(momentum));
}

void Multigraph::add_edge(EdgeId id, VertexId u, VertexId v, std::optional<std::string> mass) {
  if (!has_vertex(u) || !has_vertex(v)) {
    throw InvalidArgument("edge " + std::to_string(id) + " references an unknown vertex");
  }
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, EdgeId x) { return e.id < x; });
  if (it != edges_.end() && it->id == id) {
    throw InvalidArgument("duplicate edge " + std::to_string(id));
  }
  edges_.insert(it, Edge{id, u, v, std::move(mass)});
}

void Multigraph::set_momentum(VertexId id, Momentum momentum) {
  std::sort(momentum.begin(), momentum.end());
  momenta_[vertex_index(id)] = std::move(momentum);
}

bool Multigraph::has_vertex(VertexId id) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), id);
}

bool Multigraph::has_edge(EdgeId id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, EdgeId x) { return e.id < x; });
  return it != edges_.end() && it->id == id;
}

std::size_t Multigraph::vertex_index(VertexId id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
  if (it == vertices_.end() || *it != id) throw InvalidArgument("unknown vertex " + std::to_string(id));
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t Multigraph::edge_index(EdgeId id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, EdgeId x) { return e.id < x; });
  if (it == edges_.end() || it->id != id) throw InvalidArgument("unknown edge " + std::to_string(id));
  return static_cast<std::size_t>(it - edges_.begin());
}

Momentum add_momenta(const Momentum& a, const Momentum& b) {
  Momentum out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool momentum_nonzero(const Momentum& m, int r) {
  if (m.empty() || r <= 0) return false;
  std::vector<int> count(r + 1, 0);
  for (int label : m) {
    if (label < 1 || label > r) return true;
    ++count[label];
  }
  for (int i = 2; i <= r; ++i) {
    if (count[i] != count[1]) return true;
  }
  return false;
}

std::vector<VertexId> rooted_vertices(const Multigraph& g, int r) {
  std::vector<VertexId> out;
  for (VertexId v : g.vertices()) {
    if (momentum_nonzero(g.momentum(v), r)) out.push_back(v);
  }
  return out;
}

Multigraph delete_edge(const Multigraph& g, EdgeId e) {
  g.edge_index(e);
  Multigraph out;
  for (VertexId v : g.vertices()) out.add_vertex(v, g.momentum(v));
  for (const auto& x : g.edges()) {
    if (x.id != e) out.add_edge(x.id, x.u, x.v, x.mass);
  }
  return out;
}

Multigraph contract_edge(const Multigraph& g, EdgeId e) {
  const Edge& c = g.edge(e);
  if (c.is_loop()) throw InvalidArgument("cannot contract loop edge " + std::to_string(e));
  Multigraph out;
  for (VertexId v : g.vertices()) {
    if (v == c.v) continue;
    Momentum m = g.momentum(v);
    if (v == c.u) m = add_momenta(m, g.momentum(c.v));
    out.add_vertex(v, std::move(m));
  }
  auto image = [&](VertexId v) { return v == c.v ? c.u : v; };
  for (const auto& x : g.edges()) {
    if (x.id != e) out.add_edge(x.id, image(x.u), image(x.v), x.mass);
  }
  return out;
}

Multigraph delete_vertex(const Multigraph& g, VertexId v) {
  g.vertex_index(v);
  Multigraph out;
  for (VertexId w : g.vertices()) {
    if (w != v) out.add_vertex(w, g.momentum(w));
  }
  for (const auto& x : g.edges()) {
    if (x.u != v && x.v != v) out.add_edge(x.id, x.u, x.v, x.mass);
  }
  return out;
}

namespace {

// Union-find without path compression so unions can be undone.
class RollbackDsu {
 public:
  explicit RollbackDsu(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  std::size_t snapshot() const { return history_.size(); }

  void rollback(std::size_t snap) {
    while (history_.size() > snap) {
      std::size_t b = history_.back();
      history_.pop_back();
      std::size_t a = parent_[b];
      size_[a] -= size_[b];
      parent_[b] = b;
    }
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> history_;
};

struct Endpoints {
  std::size_t u, v;
};

std::vector<Endpoints> edge_positions(const Multigraph& g) {
  std::vector<Endpoints> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) out.push_back({g.vertex_index(e.u), g.vertex_index(e.v)});
  return out;
}

// Enumerates acyclic edge subsets of the given size.
class ForestEnumerator {
 public:
  ForestEnumerator(const Multigraph& g, std::size_t target)
      : g_(g), ends_(edge_positions(g)), dsu_(g.num_vertices()), target_(target) {}

  template <typename Fn>
  void run(Fn&& fn) {
    chosen_.clear();
    rec(0, fn);
  }

  const RollbackDsu& dsu() const { return dsu_; }

 private:
  template <typename Fn>
  void rec(std::size_t i, Fn& fn) {
    if (chosen_.size() == target_) {
      fn(chosen_);
      return;
    }
    if (ends_.size() - i < target_ - chosen_.size()) return;
    const auto [u, v] = ends_[i];
    if (u != v && dsu_.find(u) != dsu_.find(v)) {
      auto snap = dsu_.snapshot();
      dsu_.unite(u, v);
      chosen_.push_back(g_.edges()[i].id);
      rec(i + 1, fn);
      chosen_.pop_back();
      dsu_.rollback(snap);
    }
    rec(i + 1, fn);
  }

  const Multigraph& g_;
  std::vector<Endpoints> ends_;
  RollbackDsu dsu_;
  std::size_t target_;
  EdgeSet chosen_;
};

}  // namespace

bool is_connected(const Multigraph& g) {
  if (g.num_vertices() <= 1) return true;
  RollbackDsu dsu(g.num_vertices());
  std::size_t parts = g.num_vertices();
  for (const auto& [u, v] : edge_positions(g)) {
    if (dsu.unite(u, v)) --parts;
  }
  return parts == 1;
}

void for_each_spanning_tree(const Multigraph& g, const std::function<void(const EdgeSet&)>& fn) {
  if (g.num_vertices() == 0 || !is_connected(g)) return;
  ForestEnumerator en(g, g.num_vertices() - 1);
  en.run([&](const EdgeSet& s) { fn(s); });
}

std::vector<EdgeSet> spanning_trees(const Multigraph& g) {
  std::vector<EdgeSet> out;
  for_each_spanning_tree(g, [&](const EdgeSet& s) { out.push_back(s); });
  return out;
}

void for_each_spanning_2forest(const Multigraph& g,
                               const std::function<void(const SpanningForestPair&)>& fn) {
  const std::size_t n = g.num_vertices();
  if (n < 2 || !is_connected(g)) return;
  ForestEnumerator en(g, n - 2);
  SpanningForestPair pair;
  en.run([&](const EdgeSet& s) {
    const auto& dsu = en.dsu();
    std::size_t root1 = dsu.find(0);
    pair.tree1.clear();
    pair.tree2.clear();
    pair.part1.clear();
    pair.part2.clear();
    for (std::size_t i = 0; i < n; ++i) {
      (dsu.find(i) == root1 ? pair.part1 : pair.part2).push_back(g.vertices()[i]);
    }
    for (EdgeId e : s) {
      (dsu.find(g.vertex_index(g.edge(e).u)) == root1 ? pair.tree1 : pair.tree2).push_back(e);
    }
    fn(pair);
  });
}

std::vector<SpanningForestPair> spanning_2forests(const Multigraph& g) {
  std::vector<SpanningForestPair> out;
  for_each_spanning_2forest(g, [&](const SpanningForestPair& p) { out.push_back(p); });
  return out;
}

int vertex_width(const Multigraph& g) {
  const std::size_t m = g.num_edges();
  if (m == 0) throw InvalidArgument("vertex width of an edgeless graph");
  if (m > 20) throw ResourceLimit("vertex width limited to 20 edges");
  if (g.num_vertices() > 64) throw ResourceLimit("vertex width limited to 64 vertices");
  const auto ends = edge_positions(g);
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  std::vector<std::uint64_t> vmask(std::size_t{1} << m, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    int e = std::countr_zero(s);
    vmask[s] = vmask[s & (s - 1)] | (std::uint64_t{1} << ends[e].u) | (std::uint64_t{1} << ends[e].v);
  }
  // best[s]: least achievable maximum separator over orders placing s first.
  std::vector<std::uint8_t> best(std::size_t{1} << m, 0);
  for (std::uint32_t s = 1; s < full; ++s) {
    int sep = std::popcount(vmask[s] & vmask[full & ~s]);
    int low = 255;
    for (std::uint32_t rest = s; rest; rest &= rest - 1) {
      std::uint32_t prev = s & ~(rest & (~rest + 1));
      low = std::min<int>(low, best[prev]);
    }
    best[s] = static_cast<std::uint8_t>(std::max(sep, low));
  }
  int answer = 255;
  for (std::size_t e = 0; e < m; ++e) answer = std::min<int>(answer, best[full & ~(std::uint32_t{1} << e)]);
  return answer;
}

namespace {

// Edge multiplicities between vertex positions; loops on the diagonal.
struct CountMatrix {
  std::size_t n = 0;
  std::vector<int> cell;

  explicit CountMatrix(const Multigraph& g) : n(g.num_vertices()), cell(n * n, 0) {
    for (const auto& [u, v] : edge_positions(g)) {
      ++cell[u * n + v];
      if (u != v) ++cell[v * n + u];
    }
  }
  int operator()(std::size_t i, std::size_t j) const { return cell[i * n + j]; }
};

class MinorSearch {
 public:
  MinorSearch(const Multigraph& g, const Multigraph& h, std::vector<int> root_target)
      : G_(g), H_(h), n_(G_.n), h_(H_.n), root_target_(std::move(root_target)),
        label_(n_, -1), branch_target_(h_, -1) {}

  bool run() {
    if (h_ == 0) return true;
    if (h_ > n_) return false;
    int edges_g = 0, edges_h = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) edges_g += G_(i, j);
    for (std::size_t i = 0; i < h_; ++i)
      for (std::size_t j = i; j < h_; ++j) edges_h += H_(i, j);
    if (edges_h > edges_g) return false;
    rec(0);
    return found_;
  }

 private:
  void rec(std::size_t v) {
    if (found_) return;
    if (v == n_) {
      if (branches_ == h_) found_ = check();
      return;
    }
    if (branches_ + (n_ - v) < h_) return;
    const int t = root_target_[v];
    if (t < 0) {
      label_[v] = -1;
      rec(v + 1);
    }
    for (std::size_t b = 0; b < branches_ && !found_; ++b) {
      if (t >= 0 && branch_target_[b] >= 0 && branch_target_[b] != t) continue;
      int saved = branch_target_[b];
      if (t >= 0) branch_target_[b] = t;
      label_[v] = static_cast<int>(b);
      rec(v + 1);
      branch_target_[b] = saved;
    }
    if (branches_ < h_ && !found_) {
      label_[v] = static_cast<int>(branches_);
      branch_target_[branches_] = t;
      ++branches_;
      rec(v + 1);
      --branches_;
      branch_target_[branches_] = -1;
    }
    label_[v] = -1;
  }

  bool check() {
    // connectivity of each branch set
    std::vector<int> seen(n_, 0);
    size_.assign(h_, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      if (label_[v] >= 0) ++size_[label_[v]];
    }
    std::vector<int> reached(h_, 0);
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n_; ++v) {
      int b = label_[v];
      if (b < 0 || reached[b]) continue;
      reached[b] = 1;
      int count = 0;
      stack.assign(1, v);
      seen[v] = 1;
      while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        ++count;
        for (std::size_t y = 0; y < n_; ++y) {
          if (!seen[y] && label_[y] == b && G_(x, y) > 0) {
            seen[y] = 1;
            stack.push_back(y);
          }
        }
      }
      if (count != size_[b]) return false;
    }
    between_.assign(h_ * h_, 0);
    for (std::size_t x = 0; x < n_; ++x) {
      if (label_[x] < 0) continue;
      for (std::size_t y = x; y < n_; ++y) {
        if (label_[y] < 0 || G_(x, y) == 0) continue;
        std::size_t a = label_[x], b = label_[y];
        between_[a * h_ + b] += G_(x, y);
        if (a != b) between_[b * h_ + a] += G_(x, y);
      }
    }
    assign_.assign(h_, -1);
    used_.assign(h_, 0);
    return match(0);
  }

  bool match(std::size_t a) {
    if (a == h_) return true;
    for (std::size_t x = 0; x < h_; ++x) {
      if (used_[x]) continue;
      if (branch_target_[a] >= 0 && branch_target_[a] != static_cast<int>(x)) continue;
      if (between_[a * h_ + a] - (size_[a] - 1) < H_(x, x)) continue;
      bool ok = true;
      for (std::size_t p = 0; p < a && ok; ++p) {
        ok = between_[a * h_ + p] >= H_(x, assign_[p]);
      }
      if (!ok) continue;
      used_[x] = 1;
      assign_[a] = static_cast<int>(x);
      if (match(a + 1)) return true;
      used_[x] = 0;
    }
    assign_[a] = -1;
    return false;
  }

  CountMatrix G_, H_;
  std::size_t n_, h_;
  std::vector<int> root_target_;
  std::vector<int> label_;
  std::vector<int> branch_target_;
  std::size_t branches_ = 0;
  bool found_ = false;
  std::vector<int> size_, between_, assign_, used_;
};

}  // namespace

bool has_minor(const Multigraph& g, const Multigraph& h) {
  return MinorSearch(g, h, std::vector<int>(g.num_vertices(), -1)).run();
}

bool has_rooted_minor(const Multigraph& g, const Multigraph& h, const std::vector<RootMap>& maps) {
  for (const auto& map : maps) {
    if (map.roots.size() != map.targets.size()) throw InvalidArgument("root map size mismatch");
    std::vector<int> target(g.num_vertices(), -1);
    std::vector<int> hit(h.num_vertices(), 0);
    for (std::size_t i = 0; i < map.roots.size(); ++i) {
      std::size_t gv = g.vertex_index(map.roots[i]);
      std::size_t hv = h.vertex_index(map.targets[i]);
      if (hit[hv]++ || target[gv] >= 0) throw InvalidArgument("root map is not injective");
      target[gv] = static_cast<int>(hv);
    }
    if (MinorSearch(g, h, std::move(target)).run()) return true;
  }
  return false;
}

std::vector<std::vector<std::size_t>> automorphisms(const Multigraph& h) {
  const CountMatrix M(h);
  const std::size_t n = M.n;
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> perm(n);
  std::vector<int> used(n, 0);
  std::vector<int> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) degree[i] += M(i, j);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      out.push_back(perm);
      return;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (used[x] || degree[x] != degree[i] || M(x, x) != M(i, i)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = M(i, j) == M(x, perm[j]);
      if (!ok) continue;
      used[x] = 1;
      perm[i] = x;
      rec(i + 1);
      used[x] = 0;
    }
  };
  rec(0);
  return out;
}

}  // namespace feynred
