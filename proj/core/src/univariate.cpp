#include "univariate.hpp"

#include <algorithm>
#include <random>

#include "feynred/errors.hpp"
#include "zp.hpp"

namespace feynred::univariate {

void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

ZPoly sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  trim(r);
  return r;
}

ZPoly derivative(const ZPoly& a) {
  if (a.size() <= 1) return {};
  ZPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<unsigned long>(i);
  trim(r);
  return r;
}

mpz_class content(const ZPoly& a) {
  mpz_class g = 0;
  for (const auto& c : a) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

ZPoly primitive(const ZPoly& a) {
  ZPoly r = a;
  trim(r);
  if (r.empty()) return r;
  mpz_class c = content(r);
  if (r.back() < 0) c = -c;
  if (c != 1) {
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  }
  return r;
}

std::optional<ZPoly> divexact(const ZPoly& a, const ZPoly& b) {
  if (b.empty()) return std::nullopt;
  ZPoly r = a;
  trim(r);
  if (r.empty()) return ZPoly{};
  int db = deg(b);
  if (deg(r) < db) return std::nullopt;
  ZPoly q(r.size() - b.size() + 1);
  const mpz_class& lb = b.back();
  mpz_class c;
  for (int i = deg(r); i >= db; --i) {
    if (r[i] == 0) continue;
    if (!mpz_divisible_p(r[i].get_mpz_t(), lb.get_mpz_t())) return std::nullopt;
    mpz_divexact(c.get_mpz_t(), r[i].get_mpz_t(), lb.get_mpz_t());
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) {
      mpz_submul(r[i - db + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
    }
  }
  for (int i = 0; i < db && i < static_cast<int>(r.size()); ++i) {
    if (r[i] != 0) return std::nullopt;
  }
  trim(q);
  return q;
}

namespace {

// Pseudo-remainder: lc(b)^k * a mod b.
ZPoly prem(ZPoly a, const ZPoly& b) {
  const mpz_class& lb = b.back();
  int db = deg(b);
  while (!a.empty() && deg(a) >= db) {
    mpz_class c = a.back();
    int shift = deg(a) - db;
    for (auto& x : a) x *= lb;
    for (int j = 0; j <= db; ++j) {
      mpz_submul(a[shift + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
    }
    trim(a);
  }
  return a;
}

}  // namespace

ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  ZPoly A = primitive(a), B = primitive(b);
  if (A.empty()) return B;
  if (B.empty()) return A;
  if (deg(A) < deg(B)) std::swap(A, B);
  while (!B.empty()) {
    if (deg(B) == 0) return ZPoly{1};
    ZPoly R = prem(A, B);
    A = std::move(B);
    B = primitive(R);
  }
  return primitive(A);
}

namespace {

using zp::Field;
using zp::u64;

const std::vector<u64>& primes() {
  static const std::vector<u64> list = [] {
    std::vector<u64> out;
    for (u64 n = (u64{1} << 30) - 1; out.size() < 64; n -= 2) {
      bool prime = true;
      for (u64 d = 3; d * d <= n; d += 2) {
        if (n % d == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return list;
}

zp::Poly reduce(const Field& F, const ZPoly& f) {
  zp::Poly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = F.reduce(f[i]);
  zp::trim(r);
  return r;
}

ZPoly lift(const zp::Poly& a) {
  ZPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<unsigned long>(a[i]);
  return r;
}

bool squarefree_mod(const Field& F, const ZPoly& f) {
  if (F.reduce(f.back()) == 0) return false;
  zp::Poly fp = reduce(F, f);
  return zp::deg(zp::gcd(F, fp, zp::derivative(F, fp))) == 0;
}

// Frobenius map h -> h^p modulo a fixed monic f, as a matrix of x^(p*j).
class Frobenius {
 public:
  Frobenius(const Field& F, const zp::Poly& f) : F_(F), f_(f) {
    int n = zp::deg(f);
    zp::Poly xp = zp::powmod(F, zp::Poly{0, 1}, mpz_class(static_cast<unsigned long>(F.p)), f);
    rows_.reserve(n);
    rows_.push_back(zp::rem(F, zp::Poly{1}, f));
    for (int j = 1; j < n; ++j) rows_.push_back(zp::mulmod(F, rows_.back(), xp, f));
  }

  zp::Poly apply(const zp::Poly& h) const {
    std::vector<u64> acc(f_.size(), 0);
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (h[j] == 0) continue;
      const auto& row = rows_[j];
      for (std::size_t i = 0; i < row.size(); ++i) acc[i] = (acc[i] + h[j] * row[i]) % F_.p;
    }
    zp::trim(acc);
    return acc;
  }

  const zp::Poly& modulus() const { return f_; }

 private:
  Field F_;
  zp::Poly f_;
  std::vector<zp::Poly> rows_;
};

struct DegreeGroup {
  zp::Poly product;
  int degree;
};

std::vector<DegreeGroup> distinct_degree(const Field& F, const Frobenius& frob) {
  std::vector<DegreeGroup> out;
  zp::Poly cur = frob.modulus();
  zp::Poly h{0, 1};
  const zp::Poly x{0, 1};
  for (int d = 1; 2 * d <= zp::deg(cur); ++d) {
    h = frob.apply(h);
    zp::Poly g = zp::gcd(F, cur, zp::sub(F, zp::rem(F, h, cur), zp::rem(F, x, cur)));
    if (zp::deg(g) > 0) {
      out.push_back({g, d});
      cur = zp::quo(F, cur, g);
    }
  }
  if (zp::deg(cur) > 0) out.push_back({cur, zp::deg(cur)});
  return out;
}

void equal_degree(const Field& F, const Frobenius& frob, const zp::Poly& g, int d,
                  std::mt19937_64& rng, std::vector<zp::Poly>& out) {
  if (zp::deg(g) == d) {
    out.push_back(g);
    return;
  }
  const zp::Poly& f = frob.modulus();
  std::uniform_int_distribution<u64> coin(0, F.p - 1);
  while (true) {
    zp::Poly a(zp::deg(g));
    for (auto& c : a) c = coin(rng);
    zp::trim(a);
    if (zp::deg(a) < 1) continue;
    // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
    zp::Poly t = a, acc = a;
    for (int i = 1; i < d; ++i) {
      t = frob.apply(t);
      acc = zp::mulmod(F, acc, t, f);
    }
    acc = zp::rem(F, acc, g);
    zp::Poly b = zp::powmod(F, acc, mpz_class(static_cast<unsigned long>((F.p - 1) / 2)), g);
    zp::Poly u = zp::gcd(F, g, zp::sub(F, b, zp::Poly{1}));
    if (zp::deg(u) > 0 && zp::deg(u) < zp::deg(g)) {
      equal_degree(F, frob, u, d, rng, out);
      equal_degree(F, frob, zp::quo(F, g, u), d, rng, out);
      return;
    }
  }
}

ZPoly mod_symmetric(const ZPoly& a, const mpz_class& m) {
  ZPoly r(a.size());
  mpz_class half = m / 2;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
    if (r[i] > half) r[i] -= m;
  }
  trim(r);
  return r;
}

ZPoly mod_positive(const ZPoly& a, const mpz_class& m) {
  ZPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_fdiv_r(r[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
  }
  trim(r);
  return r;
}

// Lifts F = g*h (mod p), g monic, to F = G*H (mod p^k) with G monic.
void hensel_two(const ZPoly& F, const zp::Poly& g, const zp::Poly& h, const Field& Fp,
                int k, ZPoly& G, ZPoly& H) {
  zp::Poly s, t;
  zp::xgcd(Fp, g, h, s, t);
  G = lift(g);
  H = lift(h);
  mpz_class m = static_cast<unsigned long>(Fp.p);
  for (int step = 1; step < k; ++step) {
    ZPoly diff = sub(F, mul(G, H));
    for (auto& c : diff) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    zp::Poly e = reduce(Fp, diff);
    zp::Poly q, dg;
    zp::divrem(Fp, zp::mul(Fp, t, e), g, q, dg);
    zp::Poly dh = zp::add(Fp, zp::mul(Fp, s, e), zp::mul(Fp, q, h));
    ZPoly DG = lift(dg), DH = lift(dh);
    for (auto& c : DG) c *= m;
    for (auto& c : DH) c *= m;
    G = add(G, DG);
    H = add(H, DH);
    m *= static_cast<unsigned long>(Fp.p);
  }
  G = mod_positive(G, m);
  H = mod_positive(H, m);
}

// Factors a primitive, squarefree f with deg >= 2 and f(0) != 0.
std::vector<ZPoly> zassenhaus(ZPoly f, const Limits& limits) {
  const int n = deg(f);
  struct Choice {
    u64 p;
    std::vector<DegreeGroup> groups;
    std::size_t count;
  };
  std::optional<Choice> best;
  std::optional<Frobenius> best_frob;
  int usable = 0;
  for (u64 p : primes()) {
    Field F{p};
    if (!squarefree_mod(F, f)) continue;
    zp::Poly fp = zp::monic(F, reduce(F, f));
    Frobenius frob(F, fp);
    auto groups = distinct_degree(F, frob);
    std::size_t count = 0;
    for (const auto& grp : groups) count += zp::deg(grp.product) / grp.degree;
    if (count == 1) return {f};
    if (!best || count < best->count) {
      best = Choice{p, std::move(groups), count};
      best_frob.emplace(std::move(frob));
    }
    if (++usable >= 3) break;
  }
  if (!best) throw Error("no prime keeps the polynomial squarefree");
  if (best->count > limits.max_modular_factors) {
    throw ResourceLimit("univariate recombination over " + std::to_string(best->count) +
                        " modular factors exceeds the limit");
  }

  Field F{best->p};
  std::mt19937_64 rng(0x5eed ^ static_cast<u64>(n));
  std::vector<zp::Poly> modular;
  for (const auto& grp : best->groups) equal_degree(F, *best_frob, grp.product, grp.degree, rng, modular);

  // Precision: p^k > 2 |lc| 2^n ||f||_2.
  mpz_class maxc = 0;
  for (const auto& c : f) maxc = std::max(maxc, mpz_class(abs(c)));
  mpz_class bound = abs(f.back()) * maxc * (mpz_class(1) << (n + 2));
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), mpz_class(n + 1).get_mpz_t());
  bound *= root + 1;
  int k = 1;
  mpz_class modulus = static_cast<unsigned long>(F.p);
  while (modulus <= bound) {
    modulus *= static_cast<unsigned long>(F.p);
    ++k;
  }

  std::vector<ZPoly> lifted;
  ZPoly rest = f;
  for (std::size_t i = 0; i + 1 < modular.size(); ++i) {
    zp::Poly h{F.reduce(rest.back())};
    for (std::size_t j = i + 1; j < modular.size(); ++j) h = zp::mul(F, h, modular[j]);
    ZPoly G, H;
    hensel_two(rest, modular[i], h, F, k, G, H);
    lifted.push_back(std::move(G));
    rest = std::move(H);
  }
  {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), rest.back().get_mpz_t(), modulus.get_mpz_t());
    for (auto& c : rest) c *= inv;
    lifted.push_back(mod_positive(rest, modulus));
  }

  std::vector<ZPoly> found;
  std::vector<ZPoly> pool = std::move(lifted);
  std::size_t s = 1;
  while (2 * s <= pool.size()) {
    bool progress = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      mpz_class lc = f.back();
      ZPoly cand{lc};
      for (std::size_t i : idx) cand = mod_positive(mul(cand, pool[i]), modulus);
      cand = mod_symmetric(cand, modulus);
      bool plausible = !cand.empty();
      if (plausible && cand[0] != 0) {
        mpz_class target = lc * f[0];
        plausible = mpz_divisible_p(target.get_mpz_t(), cand[0].get_mpz_t()) != 0;
      } else {
        plausible = false;
      }
      if (plausible) {
        ZPoly w = primitive(cand);
        if (auto q = divexact(f, w)) {
          found.push_back(w);
          f = primitive(*q);
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
      }
      // next combination
      std::size_t i = s;
      while (i > 0 && idx[i - 1] == pool.size() - s + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!progress) ++s;
  }
  if (deg(f) > 0) found.push_back(f);
  return found;
}

std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f) {
  ZPoly df = derivative(f);
  ZPoly a0 = gcd(f, df);
  if (deg(a0) <= 0) return {{f, 1}};
  std::vector<std::pair<ZPoly, int>> out;
  ZPoly b = *divexact(f, a0);
  ZPoly c = *divexact(df, a0);
  ZPoly d = sub(c, derivative(b));
  for (int i = 1;; ++i) {
    ZPoly a = d.empty() ? primitive(b) : gcd(b, d);
    if (deg(a) > 0) out.push_back({a, i});
    b = *divexact(b, a);
    if (deg(b) <= 0) break;
    c = d.empty() ? ZPoly{} : *divexact(d, a);
    d = sub(c, derivative(b));
  }
  return out;
}

bool known_squarefree(const ZPoly& f) {
  int tries = 0;
  for (u64 p : primes()) {
    Field F{p};
    if (F.reduce(f.back()) == 0) continue;
    if (squarefree_mod(F, f)) return true;
    if (++tries >= 4) break;
  }
  return false;
}

}  // namespace

Factorization factor(const ZPoly& input, const Limits& limits) {
  ZPoly f = input;
  trim(f);
  if (f.empty()) throw InvalidArgument("factorization of the zero polynomial");
  Factorization out;
  out.unit = content(f);
  if (f.back() < 0) out.unit = -out.unit;
  f = primitive(f);

  std::size_t low = 0;
  while (f[low] == 0) ++low;
  if (low > 0) {
    out.factors.push_back({ZPoly{0, 1}, static_cast<int>(low)});
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(low));
  }
  if (deg(f) <= 0) return out;

  std::vector<std::pair<ZPoly, int>> parts;
  if (deg(f) == 1 || known_squarefree(f)) {
    parts.push_back({f, 1});
  } else {
    parts = squarefree_decomposition(f);
  }
  for (auto& [part, mult] : parts) {
    if (deg(part) == 1) {
      out.factors.push_back({part, mult});
      continue;
    }
    for (auto& g : zassenhaus(part, limits)) out.factors.push_back({std::move(g), mult});
  }
  return out;
}

bool is_irreducible(const ZPoly& f, const Limits& limits) {
  ZPoly g = f;
  trim(g);
  if (deg(g) < 1) return false;
  auto fac = factor(g, limits);
  return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

}  // namespace feynred::univariate
