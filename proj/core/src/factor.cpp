#include "feynred/factor.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>

#include "feynred/errors.hpp"
#include "poly_internal.hpp"
#include "univariate.hpp"
#include "zp.hpp"

namespace feynred {

namespace {

using univariate::ZPoly;
using zp::u64;

constexpr u64 kPrime = 1073741789;  // largest prime below 2^30

std::mt19937_64& rng() {
  thread_local std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
  return gen;
}

Polynomial one(const RingPtr& ring) { return Polynomial::constant(ring, 1); }

std::vector<VarId> vars_of(std::uint64_t mask) {
  std::vector<VarId> out;
  while (mask) {
    int i = std::countr_zero(mask);
    out.push_back(VarId{static_cast<std::uint32_t>(i)});
    mask &= mask - 1;
  }
  return out;
}

Monomial monomial_content(const Polynomial& p) {
  Monomial m = p.terms().front().monomial;
  const std::size_t n = p.ring()->size();
  for (const auto& t : p.terms()) {
    if (m.is_one()) break;
    for (std::size_t i = 0; i < n; ++i) {
      if (t.monomial[i] < m[i]) m.set(i, t.monomial[i]);
    }
  }
  return m;
}

Polynomial divide_monomial(const Polynomial& p, const Monomial& m) {
  std::vector<Polynomial::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.monomial.quotient(m), t.coeff});
  return PolynomialBuilder::from_sorted(p.ring(), std::move(terms));
}

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exact(a, b);
  if (!q) throw Error("internal: expected exact division");
  return std::move(*q);
}

// Image in Z/p[y] with every other variable set to point[i].
zp::Poly image_mod_p(const zp::Field& F, const Polynomial& p, VarId y,
                     const std::vector<u64>& point) {
  zp::Poly out(p.degree(y) + 1, 0);
  const std::size_t n = p.ring()->size();
  for (const auto& t : p.terms()) {
    u64 c = F.reduce(t.coeff.get_num());
    for (std::size_t i = 0; i < n && c != 0; ++i) {
      unsigned e = t.monomial[i];
      if (e == 0 || i == y.index) continue;
      c = F.mul(c, F.pow(point[i], e));
    }
    auto& slot = out[t.monomial[y]];
    slot = F.add(slot, c);
  }
  zp::trim(out);
  return out;
}

// True when a modular image proves y does not occur in gcd(a, b).
bool gcd_free_of(const Polynomial& a, const Polynomial& b, VarId y) {
  const zp::Field F{kPrime};
  std::uniform_int_distribution<u64> dist(1, kPrime - 1);
  std::vector<u64> point(a.ring()->size());
  for (int attempt = 0; attempt < 3; ++attempt) {
    for (auto& v : point) v = dist(rng());
    zp::Poly ia = image_mod_p(F, a, y, point);
    zp::Poly ib = image_mod_p(F, b, y, point);
    if (zp::deg(ia) != static_cast<int>(a.degree(y)) || zp::deg(ib) != static_cast<int>(b.degree(y))) {
      continue;
    }
    return zp::deg(zp::gcd(F, ia, ib)) == 0;
  }
  return false;
}

Polynomial gcd_normalized(const Polynomial& a, const Polynomial& b);

Polynomial content_in(const Polynomial& p, VarId y) {
  Polynomial g;
  for (auto& c : coefficients(p, y)) {
    if (c.is_zero()) continue;
    if (g.is_zero()) {
      g = normalize(c);
    } else if (!divide_exact(c, g)) {
      g = gcd_normalized(g, normalize(c));
    }
    if (g.is_constant()) break;
  }
  return g;
}

// lc(b)^k * a reduced by b in y.
Polynomial prem(Polynomial a, const Polynomial& b, VarId y) {
  const unsigned db = b.degree(y);
  const Polynomial lb = leading_coefficient(b, y);
  while (!a.is_zero() && a.degree(y) >= db) {
    unsigned shift = a.degree(y) - db;
    Polynomial la = leading_coefficient(a, y);
    a = lb * a - la * Polynomial::variable(a.ring(), y, shift) * b;
  }
  return a;
}

std::optional<Polynomial> gcd_by_lifting(const Polynomial& p, const Polynomial& q, VarId y);

// gcd(a, b) known not to involve y: the gcd of all coefficients in y of
// both, grown from the leading ones.
Polynomial gcd_free_in(const Polynomial& a, const Polynomial& b, VarId y) {
  Polynomial g = gcd_normalized(normalize(leading_coefficient(a, y)), normalize(leading_coefficient(b, y)));
  for (const Polynomial* f : {&a, &b}) {
    for (auto& c : coefficients(*f, y)) {
      if (g.is_constant()) return g;
      if (!c.is_zero() && !divide_exact(c, g)) g = gcd_normalized(g, normalize(c));
    }
  }
  return g;
}

// Both inputs nonzero, normalized.
Polynomial gcd_normalized(const Polynomial& a, const Polynomial& b) {
  const RingPtr& ring = a.ring();
  if (a.is_constant() || b.is_constant()) return one(ring);
  Monomial ma = monomial_content(a), mb = monomial_content(b);
  if (!ma.is_one() || !mb.is_one()) {
    Monomial m;
    for (std::size_t i = 0; i < ring->size(); ++i) m.set(i, std::min(ma[i], mb[i]));
    Polynomial rest = gcd_normalized(divide_monomial(a, ma), divide_monomial(b, mb));
    return Polynomial::monomial(ring, m, 1) * rest;
  }
  const std::uint64_t sa = a.support(), sb = b.support();
  if (std::uint64_t only = sa & ~sb) {
    VarId y{static_cast<std::uint32_t>(std::countr_zero(only))};
    return gcd_normalized(content_in(a, y), b);
  }
  if (std::uint64_t only = sb & ~sa) {
    VarId y{static_cast<std::uint32_t>(std::countr_zero(only))};
    return gcd_normalized(a, content_in(b, y));
  }
  std::optional<VarId> free;
  bool all_free = true;
  for (VarId y : vars_of(sa)) {
    if (gcd_free_of(a, b, y)) {
      if (!free) free = y;
    } else {
      all_free = false;
    }
  }
  if (all_free) return one(ring);
  if (free) return gcd_free_in(a, b, *free);

  VarId y = vars_of(sa).front();
  for (VarId v : vars_of(sa)) {
    if (std::max(a.degree(v), b.degree(v)) < std::max(a.degree(y), b.degree(y))) y = v;
  }
  Polynomial ca = content_in(a, y), cb = content_in(b, y);
  Polynomial c = gcd_normalized(ca, cb);
  Polynomial p = exact(a, ca), q = exact(b, cb);
  if (p.degree(y) < q.degree(y)) std::swap(p, q);
  if (auto g = gcd_by_lifting(p, q, y)) return normalize(c * *g);
  // Pseudo-remainder sequence when no evaluation point worked.
  Polynomial g;
  while (true) {
    Polynomial r = prem(p, q, y);
    if (r.is_zero()) {
      g = q;
      break;
    }
    if (r.degree(y) == 0) {
      g = one(ring);
      break;
    }
    p = std::move(q);
    q = normalize(exact(r, content_in(r, y)));
  }
  g = normalize(exact(g, content_in(g, y)));
  return normalize(c * g);
}

ZPoly to_zpoly(const Polynomial& p, VarId x) {
  ZPoly out(p.degree(x) + 1);
  for (const auto& t : p.terms()) out[t.monomial[x]] = t.coeff.get_num();
  return out;
}

Polynomial from_zpoly(const RingPtr& ring, VarId x, const ZPoly& z) {
  std::vector<Polynomial::Term> terms;
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k] == 0) continue;
    Monomial m;
    m.set(x, static_cast<unsigned>(k));
    terms.push_back({m, mpq_class(z[k])});
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

// Advances idx to the next s-subset of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t s = idx.size();
  std::size_t i = s;
  while (i > 0 && idx[i - 1] == n - s + (i - 1)) --i;
  if (i == 0) return false;
  ++idx[i - 1];
  for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

// Dense univariate polynomials over Q, lowest degree first.
using QPoly = std::vector<mpq_class>;

void qtrim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly qsub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  qtrim(out);
  return out;
}

QPoly qmul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  qtrim(out);
  return out;
}

// {quotient, remainder}; b nonzero.
std::pair<QPoly, QPoly> qdivrem(QPoly a, const QPoly& b) {
  QPoly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    mpq_class c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    qtrim(a);
  }
  qtrim(q);
  return {std::move(q), std::move(a)};
}

// s with s*a == 1 mod b, for coprime a and b.
QPoly qinverse(const QPoly& a, const QPoly& b) {
  QPoly r0 = b, r1 = a, s0, s1{1};
  while (r1.size() > 1) {
    auto [q, r] = qdivrem(r0, r1);
    QPoly s2 = qsub(s0, qmul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw Error("internal: Hensel images are not coprime");
  for (auto& c : s1) c /= r1[0];
  return qdivrem(s1, b).second;
}

QPoly to_qpoly(const Polynomial& p, VarId x) {
  QPoly out(p.is_zero() ? 0 : p.degree(x) + 1);
  for (const auto& t : p.terms()) out[t.monomial[x]] = t.coeff;
  return out;
}

Polynomial from_qpoly(const RingPtr& ring, VarId x, const QPoly& a) {
  std::vector<Polynomial::Term> terms;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    Monomial m;
    m.set(x, static_cast<unsigned>(k));
    terms.push_back({m, a[k]});
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

// Lifts a coprime factorization u0 * w0 of P(x, 0) to P = u * w, with both
// lifted factors carrying the leading coefficient lc (a polynomial free of
// x with lc(0) == lc(u0) == lc(w0)). Evaluation is at y = 0 for every y.
class HenselLift {
 public:
  HenselLift(RingPtr ring, VarId x, std::vector<VarId> ys, std::vector<unsigned> bound)
      : ring_(std::move(ring)), x_(x), ys_(std::move(ys)), bound_(std::move(bound)) {}

  // Lifts u0 * w0 == P at zero to P, imposing lc_u and lc_w as the
  // leading coefficients in x.
  std::optional<Polynomial> run(const Polynomial& P, const Polynomial& lc_u, const Polynomial& lc_w, const QPoly& u0,
                                const QPoly& w0) {
    u0_ = u0;
    w0_ = w0;
    s_ = qinverse(u0, w0);
    Polynomial u = from_qpoly(ring_, x_, u0), w = from_qpoly(ring_, x_, w0);
    const unsigned du = deg(u0), dw = deg(w0);
    for (std::size_t j = 1; j <= ys_.size(); ++j) {
      Polynomial Pj = P, Lu = lc_u, Lw = lc_w;
      for (std::size_t i = j; i < ys_.size(); ++i) {
        Pj = eval_zero(Pj, ys_[i]);
        Lu = eval_zero(Lu, ys_[i]);
        Lw = eval_zero(Lw, ys_[i]);
      }
      std::vector<Polynomial> U(j), W(j);
      U[j - 1] = u;
      W[j - 1] = w;
      for (std::size_t m = j - 1; m > 0; --m) {
        U[m - 1] = eval_zero(U[m], ys_[m - 1]);
        W[m - 1] = eval_zero(W[m], ys_[m - 1]);
      }
      u = with_leading(u, du, Lu);
      w = with_leading(w, dw, Lw);
      const VarId y = ys_[j - 1];
      Polynomial e = Pj - u * w;
      for (unsigned k = 1; k <= bound_[j - 1] && !e.is_zero(); ++k) {
        Polynomial ck = coefficient(e, y, k);
        if (ck.is_zero()) continue;
        auto [sig, tau] = solve(ck, j - 1, U, W);
        Polynomial yk = Polynomial::variable(ring_, y, k);
        Polynomial du = tau * yk, dw = sig * yk;
        e -= du * w + dw * u + du * dw;
        u += du;
        w += dw;
      }
      if (!e.is_zero()) return std::nullopt;
    }
    return u;
  }

 private:
  static unsigned deg(const QPoly& a) { return static_cast<unsigned>(a.size() - 1); }

  Polynomial with_leading(const Polynomial& p, unsigned d, const Polynomial& lead) const {
    Polynomial xd = Polynomial::variable(ring_, x_, d);
    return p - coefficient(p, x_, d) * xd + lead * xd;
  }

  // Drops terms whose degree in ys_[i] (i < m) exceeds bound_[i].
  Polynomial truncate(const Polynomial& p, std::size_t m) const {
    std::vector<Polynomial::Term> terms;
    for (const auto& t : p.terms()) {
      bool keep = true;
      for (std::size_t i = 0; i < m && keep; ++i) keep = t.monomial[ys_[i]] <= bound_[i];
      if (keep) terms.push_back(t);
    }
    if (terms.size() == p.size()) return p;
    return Polynomial::from_terms(ring_, std::move(terms));
  }

  // sig * U[m] + tau * W[m] == c modulo the degree bounds in ys_[0..m),
  // with deg_x sig < deg_x W and deg_x tau < deg_x U.
  std::pair<Polynomial, Polynomial> solve(const Polynomial& c, std::size_t m, const std::vector<Polynomial>& U,
                                          const std::vector<Polynomial>& W) const {
    if (m == 0) {
      QPoly cq = to_qpoly(c, x_);
      QPoly sig = qdivrem(qmul(s_, cq), w0_).second;
      QPoly tau = qdivrem(qsub(cq, qmul(sig, u0_)), w0_).first;
      return {from_qpoly(ring_, x_, sig), from_qpoly(ring_, x_, tau)};
    }
    const VarId y = ys_[m - 1];
    auto [sig, tau] = solve(eval_zero(c, y), m - 1, U, W);
    Polynomial e = truncate(c - sig * U[m] - tau * W[m], m);
    for (unsigned k = 1; k <= bound_[m - 1] && !e.is_zero(); ++k) {
      Polynomial ck = coefficient(e, y, k);
      if (ck.is_zero()) continue;
      auto [sk, tk] = solve(ck, m - 1, U, W);
      Polynomial yk = Polynomial::variable(ring_, y, k);
      Polynomial ds = truncate(sk * yk, m), dt = truncate(tk * yk, m);
      e -= truncate(ds * U[m] + dt * W[m], m);
      sig += ds;
      tau += dt;
    }
    return {sig, tau};
  }

  RingPtr ring_;
  VarId x_;
  std::vector<VarId> ys_;
  std::vector<unsigned> bound_;
  QPoly u0_, w0_, s_;
};

// gcd of p and q, both primitive in y, lifted from a univariate image in y.
// nullopt when no usable evaluation point turns up.
std::optional<Polynomial> gcd_by_lifting(const Polynomial& p, const Polynomial& q, VarId y) {
  const RingPtr& ring = p.ring();
  const Polynomial lc = gcd_normalized(leading_coefficient(p, y), leading_coefficient(q, y));
  std::vector<VarId> ys;
  for (VarId v : vars_of(p.support() | q.support())) {
    if (v != y) ys.push_back(v);
  }
  auto at = [&](Polynomial f, const std::vector<mpz_class>& point) {
    for (VarId v : ys) f = substitute(f, v, mpq_class(point[v.index]));
    return f;
  };
  auto shifted = [&](Polynomial f, const std::vector<mpz_class>& point, int sign) {
    for (VarId v : ys) {
      if (point[v.index] != 0) {
        f = substitute(f, v, Polynomial::variable(ring, v) + Polynomial::constant(ring, mpq_class(sign * point[v.index])));
      }
    }
    return f;
  };
  std::optional<unsigned> min_degree;
  for (int attempt = 0; attempt < 12; ++attempt) {
    // Small, mostly zero points keep the images and the shift small.
    std::bernoulli_distribution is_zero(std::max(0.0, 0.8 - 0.1 * attempt));
    std::uniform_int_distribution<int> dist(1, 1 + attempt / 3);
    std::vector<mpz_class> point(ring->size());
    for (VarId v : ys) {
      if (!is_zero(rng())) point[v.index] = (rng()() & 1) ? dist(rng()) : -dist(rng());
    }
    const Polynomial p0 = at(p, point), q0 = at(q, point);
    const Polynomial lc0 = at(lc, point);
    if (p0.degree(y) != p.degree(y) || q0.degree(y) != q.degree(y) || lc0.is_zero()) continue;
    const ZPoly pz = to_zpoly(normalize(p0), y), qz = to_zpoly(normalize(q0), y);
    const ZPoly gz = univariate::gcd(pz, qz);
    const unsigned d = static_cast<unsigned>(univariate::deg(gz));
    if (d == 0) return one(ring);
    // A larger image degree marks an unlucky point.
    if (min_degree && d > *min_degree) continue;
    min_degree = d;
    for (const Polynomial* f : {&q, &p}) {
      if (d == f->degree(y)) {
        const Polynomial& other = f == &q ? p : q;
        if (divide_exact(other, *f)) return *f;
        continue;
      }
      const ZPoly fz = f == &q ? qz : pz;
      const ZPoly hz = *univariate::divexact(fz, gz);
      if (univariate::deg(univariate::gcd(gz, hz)) > 0) continue;
      const Polynomial fs = shifted(*f, point, 1), lcs = shifted(lc, point, 1);
      const Polynomial P = lcs * fs;
      const mpq_class g_lead = lc0.constant_value(), h_lead = leading_coefficient(at(*f, point), y).constant_value();
      QPoly u0(gz.begin(), gz.end()), w0(hz.begin(), hz.end());
      const mpq_class su = g_lead / u0.back(), sw = h_lead / w0.back();
      for (auto& c : u0) c *= su;
      for (auto& c : w0) c *= sw;
      std::vector<unsigned> bound;
      for (VarId v : ys) bound.push_back(P.degree(v));
      HenselLift lifter(ring, y, ys, bound);
      auto u = lifter.run(P, lcs, leading_coefficient(fs, y), u0, w0);
      if (!u) continue;
      Polynomial g = shifted(*u, point, -1);
      g = normalize(exact(g, content_in(g, y)));
      if (divide_exact(p, g) && divide_exact(q, g)) return g;
    }
  }
  return std::nullopt;
}

class Factorizer {
 public:
  Factorizer(RingPtr ring, const FactorBudget& budget) : ring_(std::move(ring)), budget_(budget) {}

  // q normalized, nonzero.
  void run(Polynomial q, unsigned mult) {
    if (q.is_constant()) return;
    Monomial m = monomial_content(q);
    if (!m.is_one()) {
      for (std::size_t i = 0; i < ring_->size(); ++i) {
        if (m[i] > 0) emit(Polynomial::variable(ring_, VarId{static_cast<std::uint32_t>(i)}), mult * m[i]);
      }
      q = divide_monomial(q, m);
      if (q.is_constant()) return;
    }
    const auto vars = vars_of(q.support());
    if (vars.size() == 1) {
      univariate(q, vars.front(), mult);
      return;
    }

    for (VarId x : vars) {
      if (q.degree(x) != 1) continue;
      Polynomial g = gcd(coefficient(q, x, 1), coefficient(q, x, 0));
      if (g.is_constant()) {
        emit(q, mult);
      } else {
        run(g, mult);
        emit(exact(q, g), mult);
      }
      return;
    }

    VarId x = vars.front();
    for (VarId v : vars) {
      if (q.degree(v) < q.degree(x)) x = v;
    }
    Polynomial c = content_in(q, x);
    if (!c.is_constant()) {
      run(c, mult);
      run(normalize(exact(q, c)), mult);
      return;
    }

    if (squarefree_image(q, x)) {
      squarefree(q, x, mult);
      return;
    }
    Polynomial dq = partial_derivative(q, x);
    Polynomial a0 = gcd(q, dq);
    if (!a0.is_constant()) {
      Polynomial b = exact(q, a0);
      Polynomial d = exact(dq, a0) - partial_derivative(b, x);
      for (unsigned i = 1;; ++i) {
        Polynomial a = d.is_zero() ? normalize(b) : gcd(b, d);
        if (!a.is_constant()) run(a, mult * i);
        b = exact(b, a);
        if (b.degree(x) == 0) break;
        Polynomial c2 = exact(d, a);
        d = c2 - partial_derivative(b, x);
      }
      return;
    }
    squarefree(q, x, mult);
  }

  Factorization finish(const mpq_class& unit) {
    Factorization out;
    out.unit = unit;
    out.factors = std::move(found_);
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& l, const auto& r) { return compare(l.first, r.first) < 0; });
    return out;
  }

 private:
  void emit(const Polynomial& p, unsigned mult) {
    Polynomial n = normalize(p);
    if (n.is_constant()) return;
    for (auto& [f, m] : found_) {
      if (f == n) {
        m += mult;
        return;
      }
    }
    found_.push_back({std::move(n), mult});
  }

  // True when a modular image of q (primitive in x) keeps its degree and is
  // squarefree, which proves q squarefree.
  static bool squarefree_image(const Polynomial& q, VarId x) {
    const zp::Field F{kPrime};
    std::uniform_int_distribution<u64> dist(1, kPrime - 1);
    std::vector<u64> point(q.ring()->size());
    for (int attempt = 0; attempt < 2; ++attempt) {
      for (auto& v : point) v = dist(rng());
      zp::Poly img = image_mod_p(F, q, x, point);
      if (zp::deg(img) != static_cast<int>(q.degree(x))) continue;
      zp::Poly d(img.size() > 1 ? img.size() - 1 : 0, 0);
      for (std::size_t k = 1; k < img.size(); ++k) d[k - 1] = F.mul(img[k], k % kPrime);
      zp::trim(d);
      if (d.empty()) return false;
      return zp::deg(zp::gcd(F, img, d)) == 0;
    }
    return false;
  }

  univariate::Limits limits() const { return {budget_.max_modular_factors}; }

  void univariate(const Polynomial& q, VarId x, unsigned mult) {
    auto fac = univariate::factor(to_zpoly(q, x), limits());
    for (const auto& [f, m] : fac.factors) emit(from_zpoly(ring_, x, f), mult * m);
  }

  // q squarefree, primitive in x, degree >= 2 in every variable.
  void squarefree(const Polynomial& q, VarId x, unsigned mult) {
    if (q.total_degree() > budget_.max_total_degree) {
      throw ResourceLimit("factorization input of total degree " + std::to_string(q.total_degree()) +
                          " exceeds the budget");
    }
    if (irreducible_by_evaluation(q, x)) {
      emit(q, mult);
      return;
    }
    if (!hensel(q, x, mult)) kronecker(q, mult);
  }

  struct Image {
    std::vector<mpz_class> point;  // indexed by variable
    std::vector<ZPoly> factors;
  };

  // A point where q keeps its degree in x, lc_x(q) does not vanish and the
  // image stays squarefree; the best of a few such points.
  std::optional<Image> evaluation_image(const Polynomial& q, VarId x) {
    const std::size_t n = ring_->size();
    std::optional<Image> best;
    std::size_t best_nonzero = 0;
    int good = 0;
    for (int attempt = 0; attempt < 40 && good < 3; ++attempt) {
      // Zero coordinates keep the shifted polynomial sparse.
      const double zero = std::max(0.0, 0.8 - 0.05 * attempt);
      const int range = 1 + attempt / 4;
      std::bernoulli_distribution is_zero(zero);
      std::uniform_int_distribution<int> dist(1, range);
      Image img;
      img.point.assign(n, 0);
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == x.index || !(q.support() >> i & 1) || is_zero(rng())) continue;
        img.point[i] = (rng()() & 1) ? dist(rng()) : -dist(rng());
        ++nonzero;
      }
      Polynomial at = q;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != x.index && (q.support() >> i & 1)) {
          at = substitute(at, VarId{static_cast<std::uint32_t>(i)}, mpq_class(img.point[i]));
        }
      }
      if (at.degree(x) != q.degree(x)) continue;
      ZPoly f = to_zpoly(normalize(at), x);
      if (univariate::deg(univariate::gcd(f, univariate::derivative(f))) > 0) continue;
      try {
        auto fac = univariate::factor(f, limits());
        for (const auto& [g, m] : fac.factors) img.factors.push_back(g);
      } catch (const ResourceLimit&) {
        continue;
      }
      ++good;
      if (!best || img.factors.size() < best->factors.size() ||
          (img.factors.size() == best->factors.size() && nonzero < best_nonzero)) {
        best = std::move(img);
        best_nonzero = nonzero;
      }
      if (best->factors.size() == 1) break;
    }
    return best;
  }

  static Polynomial strip_content(Polynomial u, const std::vector<std::pair<Polynomial, unsigned>>& factors) {
    for (const auto& [f, m] : factors) {
      for (unsigned i = 0; i < m; ++i) {
        auto q = divide_exact(u, f);
        if (!q) break;
        u = std::move(*q);
      }
    }
    return u;
  }

  // Multivariate factorization by Hensel lifting from a univariate image.
  // False when no usable evaluation point was found.
  bool hensel(const Polynomial& q, VarId x, unsigned mult) {
    auto image = evaluation_image(q, x);
    if (!image) return false;
    auto& pool = image->factors;
    if (pool.size() <= 1) {
      emit(q, mult);
      return true;
    }
    std::vector<VarId> ys;
    for (VarId v : vars_of(q.support())) {
      if (v != x) ys.push_back(v);
    }
    auto shifted = [&](Polynomial p, int sign) {
      for (VarId y : ys) {
        const mpz_class& b = image->point[y.index];
        if (b == 0) continue;
        p = substitute(p, y, Polynomial::variable(ring_, y) + Polynomial::constant(ring_, mpq_class(sign * b)));
      }
      return p;
    };
    const Polynomial qs = shifted(q, 1);
    const Polynomial lc = leading_coefficient(qs, x);
    const Polynomial P = lc * qs;
    std::vector<unsigned> bound;
    for (VarId y : ys) bound.push_back(P.degree(y));
    HenselLift lifter(ring_, x, ys, bound);
    Polynomial lcz = lc;
    for (VarId y : ys) lcz = eval_zero(lcz, y);
    const mpq_class lc0 = lcz.constant_value();

    // The content of a lifted factor divides lc; strip it by trial division.
    Factorizer sub(ring_, budget_);
    sub.run(normalize(lc), 1);
    const auto lc_factors = std::move(sub.found_);

    ZPoly all{1};
    for (const auto& f : pool) all = univariate::mul(all, f);
    for (std::size_t s = 1; 2 * s <= pool.size(); ++s) {
      std::vector<std::size_t> idx(s);
      for (std::size_t i = 0; i < s; ++i) idx[i] = i;
      do {
        ZPoly a{1};
        for (std::size_t i : idx) a = univariate::mul(a, pool[i]);
        ZPoly b = *univariate::divexact(all, a);
        QPoly u0(a.begin(), a.end()), w0(b.begin(), b.end());
        const mpq_class ua = lc0 / u0.back(), wb = lc0 / w0.back();
        for (auto& c : u0) c *= ua;
        for (auto& c : w0) c *= wb;
        auto u = lifter.run(P, lc, lc, u0, w0);
        if (!u) continue;
        Polynomial f = normalize(shifted(strip_content(*u, lc_factors), -1));
        auto quo = divide_exact(q, f);
        if (!quo) continue;
        emit(f, mult);
        Polynomial rest = normalize(*quo);
        if (!rest.is_constant()) run(rest, mult);
        return true;
      } while (next_combination(idx, pool.size()));
    }
    emit(q, mult);
    return true;
  }

  bool irreducible_by_evaluation(const Polynomial& q, VarId x) {
    std::uniform_int_distribution<int> dist(-30, 30);
    const std::size_t n = ring_->size();
    std::vector<mpz_class> point(n);
    for (int attempt = 0; attempt < 4; ++attempt) {
      for (auto& v : point) v = dist(rng());
      ZPoly img(q.degree(x) + 1);
      for (const auto& t : q.terms()) {
        mpz_class c = t.coeff.get_num();
        for (std::size_t i = 0; i < n; ++i) {
          unsigned e = t.monomial[i];
          if (e == 0 || i == x.index) continue;
          mpz_class pw;
          mpz_pow_ui(pw.get_mpz_t(), point[i].get_mpz_t(), e);
          c *= pw;
        }
        img[t.monomial[x]] += c;
      }
      univariate::trim(img);
      if (univariate::deg(img) != static_cast<int>(q.degree(x))) continue;
      try {
        if (univariate::is_irreducible(img, limits())) return true;
      } catch (const ResourceLimit&) {
        // inconclusive at this point
      }
    }
    return false;
  }

  void kronecker(Polynomial q, unsigned mult) {
    const auto vars = vars_of(q.support());
    std::vector<mpz_class> base(vars.size());
    std::vector<unsigned> radix(vars.size());
    mpz_class span = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      base[i] = span;
      radix[i] = q.degree(vars[i]) + 1;
      span *= radix[i];
    }
    if (span - 1 > budget_.max_kronecker_degree) {
      throw ResourceLimit("Kronecker image degree exceeds the budget");
    }
    const unsigned long top = span.get_ui() - 1;
    ZPoly img(top + 1);
    for (const auto& t : q.terms()) {
      unsigned long k = 0;
      for (std::size_t i = 0; i < vars.size(); ++i) k += t.monomial[vars[i]] * base[i].get_ui();
      img[k] += t.coeff.get_num();
    }
    univariate::trim(img);
    auto fac = univariate::factor(img, limits());
    std::vector<ZPoly> pool;
    for (const auto& [f, m] : fac.factors) {
      for (int j = 0; j < m; ++j) pool.push_back(f);
    }
    if (pool.size() <= 1) {
      emit(q, mult);
      return;
    }
    if (pool.size() > budget_.max_modular_factors) {
      throw ResourceLimit("Kronecker recombination over " + std::to_string(pool.size()) + " factors");
    }

    auto invert = [&](const ZPoly& z) {
      std::vector<Polynomial::Term> terms;
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (z[k] == 0) continue;
        Monomial m;
        std::size_t rest = k;
        for (std::size_t i = 0; i < vars.size(); ++i) {
          m.set(vars[i], static_cast<unsigned>(rest % radix[i]));
          rest /= radix[i];
        }
        terms.push_back({m, mpq_class(z[k])});
      }
      return Polynomial::from_terms(ring_, std::move(terms));
    };

    std::size_t s = 1;
    while (2 * s <= pool.size()) {
      bool progress = false;
      std::vector<std::size_t> idx(s);
      for (std::size_t i = 0; i < s; ++i) idx[i] = i;
      do {
        ZPoly prod{1};
        for (std::size_t i : idx) prod = univariate::mul(prod, pool[i]);
        Polynomial cand = normalize(invert(prod));
        bool fits = !cand.is_constant();
        for (VarId v : vars) fits = fits && cand.degree(v) <= q.degree(v);
        if (!fits) continue;
        if (auto quo = divide_exact(q, cand)) {
          emit(cand, mult);
          q = normalize(*quo);
          std::vector<ZPoly> next;
          for (std::size_t i = 0, t = 0; i < pool.size(); ++i) {
            if (t < idx.size() && idx[t] == i) {
              ++t;
              continue;
            }
            next.push_back(std::move(pool[i]));
          }
          pool = std::move(next);
          progress = true;
          break;
        }
      } while (next_combination(idx, pool.size()));
      if (!progress) ++s;
    }
    emit(q, mult);
  }

  RingPtr ring_;
  const FactorBudget& budget_;
  std::vector<std::pair<Polynomial, unsigned>> found_;
};

}  // namespace

Polynomial Factorization::expand(const RingPtr& ring) const {
  Polynomial out = Polynomial::constant(ring, unit);
  for (const auto& [f, m] : factors) {
    for (unsigned i = 0; i < m; ++i) out *= f;
  }
  return out;
}

Polynomial normalize(const Polynomial& p, mpq_class* scale) {
  if (p.is_zero()) {
    if (scale) *scale = 1;
    return p;
  }
  mpz_class den = 1, num = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
  }
  mpq_class factor(den, num);
  factor.canonicalize();
  if (p.leading_term().coeff < 0) factor = -factor;
  if (scale) *scale = 1 / factor;
  if (factor == 1) return p;
  return p * factor;
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw InvalidArgument("division by the zero polynomial");
  const RingPtr& ring = common_ring(a, b);
  if (a.is_zero()) return Polynomial(ring);
  if (b.is_constant()) return a * (1 / b.constant_value());
  const auto& lead = b.leading_term();
  if (!lead.monomial.divides(a.leading_term().monomial)) return std::nullopt;
  if (!b.terms().back().monomial.divides(a.terms().back().monomial)) return std::nullopt;

  std::map<Monomial, mpq_class, std::greater<>> rem;
  for (const auto& t : a.terms()) rem.emplace(t.monomial, t.coeff);
  std::vector<Polynomial::Term> quotient;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lead.monomial.divides(it->first)) return std::nullopt;
    Monomial m = it->first.quotient(lead.monomial);
    mpq_class c = it->second / lead.coeff;
    for (const auto& t : b.terms()) {
      auto [slot, inserted] = rem.try_emplace(t.monomial * m, 0);
      slot->second -= c * t.coeff;
      if (slot->second == 0) rem.erase(slot);
    }
    quotient.push_back({m, std::move(c)});
  }
  return PolynomialBuilder::from_sorted(ring, std::move(quotient));
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  common_ring(a, b);
  if (a.is_zero()) return normalize(b);
  if (b.is_zero()) return normalize(a);
  return gcd_normalized(normalize(a), normalize(b));
}

Factorization factor_over_q(const Polynomial& p, const FactorBudget& budget) {
  if (p.is_zero()) throw InvalidArgument("factorization of the zero polynomial");
  mpq_class unit;
  Polynomial q = normalize(p, &unit);
  Factorizer f(p.ring(), budget);
  f.run(q, 1);
  return f.finish(unit);
}

Polynomial pair_resultant(const Polynomial& f, const Polynomial& g, VarId v) {
  if (!linear_in(f, v) || !linear_in(g, v)) {
    throw InvalidArgument("pair_resultant needs inputs linear in the variable");
  }
  return partial_derivative(f, v) * eval_zero(g, v) - partial_derivative(g, v) * eval_zero(f, v);
}

bool lc_resultant_identity_check(const Polynomial& f, const Polynomial& g, VarId v1, VarId vl) {
  if (v1 == vl) throw InvalidArgument("identity check needs two distinct variables");
  if (f.is_zero() || g.is_zero()) throw InvalidArgument("identity check needs nonzero inputs");
  Polynomial lhs = pair_resultant(leading_coefficient(f, vl), leading_coefficient(g, vl), v1);
  if (lhs.is_zero()) return true;
  Polynomial r = pair_resultant(f, g, v1);
  if (r.is_zero()) return false;
  return lhs == leading_coefficient(r, vl);
}

}  // namespace feynred
