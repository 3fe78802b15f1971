#pragma once

// Dense univariate polynomials over Z/pZ for word-sized primes p < 2^31.
// Coefficients are stored lowest degree first; the zero polynomial is empty.

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace feynred::zp {

using u64 = std::uint64_t;
using Poly = std::vector<u64>;

struct Field {
  u64 p;

  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p ? s - p : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
  u64 mul(u64 a, u64 b) const { return (a * b) % p; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    a %= p;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
  // Image of an integer.
  u64 reduce(const mpz_class& z) const {
    return static_cast<u64>(mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p)));
  }
};

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly monic(const Field& F, Poly a) {
  trim(a);
  if (a.empty() || a.back() == 1) return a;
  u64 li = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, li);
  return a;
}

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(r);
  return r;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + a[i] * b[j]) % F.p;
    }
  }
  trim(r);
  return r;
}

inline Poly scale(const Field& F, Poly a, u64 c) {
  for (auto& x : a) x = F.mul(x, c);
  trim(a);
  return a;
}

// a = q*b + r with deg r < deg b; b nonzero.
inline void divrem(const Field& F, const Poly& a, const Poly& b, Poly& q, Poly& r) {
  r = a;
  trim(r);
  int db = deg(b);
  if (deg(r) < db) {
    q.clear();
    return;
  }
  q.assign(r.size() - b.size() + 1, 0);
  u64 li = F.inv(b.back());
  for (int i = deg(r); i >= db; --i) {
    u64 c = F.mul(r[i], li);
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b[j]));
  }
  r.resize(db);
  trim(r);
  trim(q);
}

inline Poly rem(const Field& F, const Poly& a, const Poly& b) {
  Poly q, r;
  divrem(F, a, b, q, r);
  return r;
}

inline Poly quo(const Field& F, const Poly& a, const Poly& b) {
  Poly q, r;
  divrem(F, a, b, q, r);
  return q;
}

// Monic gcd.
inline Poly gcd(const Field& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

// g = s*a + t*b with g monic.
inline Poly xgcd(const Field& F, Poly a, Poly b, Poly& s, Poly& t) {
  Poly s0{1}, s1{}, t0{}, t1{1};
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly q, r;
    divrem(F, a, b, q, r);
    a = std::move(b);
    b = std::move(r);
    Poly s2 = sub(F, s0, mul(F, q, s1));
    Poly t2 = sub(F, t0, mul(F, q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (a.empty()) {
    s = {};
    t = {};
    return a;
  }
  u64 li = F.inv(a.back());
  s = scale(F, s0, li);
  t = scale(F, t0, li);
  return scale(F, a, li);
}

inline Poly derivative(const Field& F, const Poly& a) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.p);
  trim(r);
  return r;
}

inline Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) {
  return rem(F, mul(F, a, b), m);
}

inline Poly powmod(const Field& F, Poly base, const mpz_class& e, const Poly& m) {
  Poly result{1};
  result = rem(F, result, m);
  base = rem(F, base, m);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(F, result, result, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(F, result, base, m);
  }
  return result;
}

}  // namespace feynred::zp
