#include "feynred/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <sstream>

#include "feynred/errors.hpp"
#include "poly_internal.hpp"

namespace feynred {

// ---------------------------------------------------------------- Ring

Ring::Ring(std::vector<Variable> vars) : vars_(std::move(vars)) {
  if (vars_.size() > kMaxVariables) {
    throw ResourceLimit("ring has " + std::to_string(vars_.size()) +
                        " variables; at most " + std::to_string(kMaxVariables) +
                        " are supported");
  }
  for (std::uint32_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name.empty()) throw InvalidArgument("empty variable name");
    if (!index_.emplace(vars_[i].name, VarId{i}).second) {
      throw InvalidArgument("duplicate variable '" + vars_[i].name + "'");
    }
  }
}

std::shared_ptr<const Ring> Ring::make(std::vector<Variable> vars) {
  return std::shared_ptr<const Ring>(new Ring(std::move(vars)));
}

std::optional<VarId> Ring::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId Ring::at(std::string_view name) const {
  auto v = find(name);
  if (!v) throw InvalidArgument("unknown variable '" + std::string(name) + "'");
  return *v;
}

std::vector<VarId> Ring::of_kind(VariableKind kind) const {
  std::vector<VarId> out;
  for (std::uint32_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].kind == kind) out.push_back(VarId{i});
  }
  return out;
}

// ------------------------------------------------------------ Monomial

void Monomial::set(std::size_t i, unsigned e) {
  if (e > 255) throw ResourceLimit("exponent exceeds 255");
  degree_ = static_cast<std::uint16_t>(degree_ - exp_[i] + e);
  exp_[i] = static_cast<std::uint8_t>(e);
}

bool Monomial::divides(const Monomial& other) const noexcept {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (exp_[i] > other.exp_[i]) return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial q;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    q.exp_[i] = static_cast<std::uint8_t>(exp_[i] - divisor.exp_[i]);
  }
  q.degree_ = static_cast<std::uint16_t>(degree_ - divisor.degree_);
  return q;
}

std::uint64_t Monomial::support() const noexcept {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (exp_[i]) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  unsigned overflow = 0;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    unsigned e = unsigned{a.exp_[i]} + b.exp_[i];
    overflow |= e;
    m.exp_[i] = static_cast<std::uint8_t>(e);
  }
  if (overflow > 255) throw ResourceLimit("exponent exceeds 255");
  m.degree_ = static_cast<std::uint16_t>(a.degree_ + b.degree_);
  return m;
}

bool operator==(const Monomial& a, const Monomial& b) noexcept {
  return a.degree_ == b.degree_ && a.exp_ == b.exp_;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  int c = std::memcmp(a.exp_.data(), b.exp_.data(), kMaxVariables);
  return c <=> 0;
}

std::size_t Monomial::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < kMaxVariables; i += 8) {
    std::uint64_t w;
    std::memcpy(&w, exp_.data() + i, 8);
    h ^= w;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------- Polynomial

namespace {

bool term_greater(const Polynomial::Term& a, const Polynomial::Term& b) {
  return a.monomial > b.monomial;
}

}  // namespace

const RingPtr& common_ring(const Polynomial& a, const Polynomial& b) {
  if (!a.ring()) return b.ring();
  if (!b.ring()) return a.ring();
  if (a.ring() != b.ring() && !(*a.ring() == *b.ring())) {
    throw ContextMismatch("polynomials belong to different variable contexts");
  }
  return a.ring();
}

Polynomial Polynomial::constant(RingPtr ring, const mpq_class& c) {
  Polynomial p(std::move(ring));
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Polynomial Polynomial::variable(RingPtr ring, VarId v, unsigned exponent) {
  if (!ring || v.index >= ring->size()) throw InvalidArgument("variable not in ring");
  Monomial m;
  m.set(v, exponent);
  Polynomial p(std::move(ring));
  p.terms_.push_back({m, mpq_class(1)});
  return p;
}

Polynomial Polynomial::monomial(RingPtr ring, const Monomial& m, const mpq_class& c) {
  Polynomial p(std::move(ring));
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

Polynomial Polynomial::from_terms(RingPtr ring, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (auto& t : terms) {
    if (!merged.empty() && merged.back().monomial == t.monomial) {
      merged.back().coeff += t.coeff;
    } else {
      if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
      merged.push_back(std::move(t));
    }
  }
  if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
  return PolynomialBuilder::from_sorted(std::move(ring), std::move(merged));
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

mpq_class Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  const Term& last = terms_.back();
  return last.monomial.is_one() ? last.coeff : mpq_class(0);
}

unsigned Polynomial::total_degree() const noexcept {
  return terms_.empty() ? 0 : terms_.front().monomial.degree();
}

unsigned Polynomial::degree(VarId v) const noexcept {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial[v]);
  return d;
}

std::uint64_t Polynomial::support() const noexcept {
  std::uint64_t mask = 0;
  for (const auto& t : terms_) mask |= t.monomial.support();
  return mask;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff.get_str();
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      unsigned e = t.monomial[i];
      if (e == 0) continue;
      os << '*' << (ring_ ? ring_->variable(VarId{static_cast<std::uint32_t>(i)}).name
                          : "x" + std::to_string(i));
      if (e > 1) os << '^' << e;
    }
  }
  return os.str();
}

std::size_t Polynomial::hash() const noexcept {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    std::size_t th = t.monomial.hash();
    th ^= mpz_get_ui(t.coeff.get_num_mpz_t()) * 0x9e3779b97f4a7c15ull;
    th ^= mpz_get_ui(t.coeff.get_den_mpz_t()) + (th << 6) + (th >> 2);
    if (mpz_sgn(t.coeff.get_num_mpz_t()) < 0) th = ~th;
    h ^= th + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.terms_.empty()) common_ring(a, b);
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].monomial == b.terms_[i].monomial) ||
        a.terms_[i].coeff != b.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

std::strong_ordering compare(const Polynomial& a, const Polynomial& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = x[i].monomial <=> y[i].monomial; c != 0) return c;
    int cc = cmp(x[i].coeff, y[i].coeff);
    if (cc != 0) return cc <=> 0;
  }
  return x.size() <=> y.size();
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
  const RingPtr& ring = common_ring(a, b);
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::vector<Polynomial::Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].monomial > y[j].monomial)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].monomial > x[i].monomial) {
      out.push_back({y[j].monomial, subtract ? mpq_class(-y[j].coeff) : y[j].coeff});
      ++j;
    } else {
      mpq_class c = subtract ? mpq_class(x[i].coeff - y[j].coeff)
                             : mpq_class(x[i].coeff + y[j].coeff);
      if (c != 0) out.push_back({x[i].monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  return PolynomialBuilder::from_sorted(ring, std::move(out));
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  const RingPtr& ring = common_ring(a, b);
  if (a.is_zero() || b.is_zero()) return Polynomial(ring);
  const auto& x = a.size() >= b.size() ? a.terms() : b.terms();
  const auto& y = a.size() >= b.size() ? b.terms() : a.terms();
  if (y.size() == 1) {
    // Multiplying by a single term preserves the order.
    std::vector<Polynomial::Term> out;
    out.reserve(x.size());
    for (const auto& t : x) out.push_back({t.monomial * y[0].monomial, t.coeff * y[0].coeff});
    return PolynomialBuilder::from_sorted(ring, std::move(out));
  }
  // Integer accumulation after clearing denominators.
  auto integral = [](const std::vector<Polynomial::Term>& ts, mpz_class& den) {
    den = 1;
    for (const auto& t : ts) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
    std::vector<mpz_class> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(t.coeff.get_num() * (den / t.coeff.get_den()));
    return out;
  };
  mpz_class dx, dy;
  const std::vector<mpz_class> cx = integral(x, dx), cy = integral(y, dy);
  std::unordered_map<Monomial, mpz_class, MonomialHash> acc;
  acc.reserve(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      auto [it, inserted] = acc.try_emplace(x[i].monomial * y[j].monomial);
      mpz_addmul(it->second.get_mpz_t(), cx[i].get_mpz_t(), cy[j].get_mpz_t());
    }
  }
  const mpz_class den = dx * dy;
  std::vector<Polynomial::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c == 0) continue;
    mpq_class q(c, den);
    q.canonicalize();
    out.push_back({m, std::move(q)});
  }
  std::sort(out.begin(), out.end(), term_greater);
  return PolynomialBuilder::from_sorted(ring, std::move(out));
}

Polynomial operator*(const Polynomial& a, const mpq_class& c) {
  if (c == 0) return Polynomial(a.ring());
  Polynomial r = a;
  for (auto& t : PolynomialBuilder::terms(r)) t.coeff *= c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) { return *this = *this + o; }
Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this = *this - o; }
Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }
Polynomial& Polynomial::operator*=(const mpq_class& c) { return *this = *this * c; }

// ----------------------------------------------------------- calculus

Polynomial partial_derivative(const Polynomial& p, VarId v) {
  std::vector<Polynomial::Term> out;
  for (const auto& t : p.terms()) {
    unsigned e = t.monomial[v];
    if (e == 0) continue;
    Monomial m = t.monomial;
    m.set(v, e - 1);
    out.push_back({m, t.coeff * e});
  }
  return PolynomialBuilder::from_sorted(p.ring(), std::move(out));
}

Polynomial eval_zero(const Polynomial& p, VarId v) {
  std::vector<Polynomial::Term> out;
  for (const auto& t : p.terms()) {
    if (t.monomial[v] == 0) out.push_back(t);
  }
  return PolynomialBuilder::from_sorted(p.ring(), std::move(out));
}

Polynomial coefficient(const Polynomial& p, VarId v, unsigned k) {
  std::vector<Polynomial::Term> out;
  for (const auto& t : p.terms()) {
    if (t.monomial[v] != k) continue;
    Monomial m = t.monomial;
    m.set(v, 0);
    out.push_back({m, t.coeff});
  }
  return PolynomialBuilder::from_sorted(p.ring(), std::move(out));
}

std::vector<Polynomial> coefficients(const Polynomial& p, VarId v) {
  std::vector<std::vector<Polynomial::Term>> buckets(p.degree(v) + 1);
  for (const auto& t : p.terms()) {
    unsigned e = t.monomial[v];
    Monomial m = t.monomial;
    m.set(v, 0);
    buckets[e].push_back({m, t.coeff});
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(PolynomialBuilder::from_sorted(p.ring(), std::move(b)));
  return out;
}

Polynomial leading_coefficient(const Polynomial& p, VarId v) {
  if (p.is_zero()) throw InvalidArgument("leading coefficient of the zero polynomial");
  return coefficient(p, v, p.degree(v));
}

bool linear_in(const Polynomial& p, VarId v) { return p.degree(v) <= 1; }

Polynomial substitute(const Polynomial& p, VarId v, const Polynomial& value) {
  if (!p.contains(v)) return p;
  auto cs = coefficients(p, v);
  Polynomial acc = cs.back();
  for (std::size_t k = cs.size() - 1; k-- > 0;) acc = acc * value + cs[k];
  return acc;
}

Polynomial substitute(const Polynomial& p, VarId v, const mpq_class& value) {
  return substitute(p, v, Polynomial::constant(p.ring(), value));
}

// ------------------------------------------------------------ parsing

namespace {

class PolyParser {
 public:
  PolyParser(const RingPtr& ring, std::string_view text) : ring_(ring), s_(text) {}

  Polynomial parse() {
    Polynomial acc(ring_);
    skip_ws();
    if (pos_ == s_.size()) throw InvalidArgument("empty polynomial text");
    bool first = true;
    while (true) {
      skip_ws();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      acc += term() * mpq_class(sign);
    }
    return acc;
  }

 private:
  Polynomial term() {
    Polynomial t = Polynomial::constant(ring_, 1);
    while (true) {
      skip_ws();
      // A sign directly after '+' (as in "a + -1*b") belongs to this term.
      if (pos_ < s_.size() && s_[pos_] == '-') {
        ++pos_;
        t *= mpq_class(-1);
        continue;
      }
      t *= factor();
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      return t;
    }
  }

  Polynomial factor() {
    skip_ws();
    if (pos_ == s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      std::string den = "1";
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        den = digits();
        if (den.empty()) fail("missing denominator");
      }
      mpz_class d{den};
      if (d == 0) fail("zero denominator");
      mpq_class q{mpz_class{num}, d};
      q.canonicalize();
      return Polynomial::constant(ring_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(s_.substr(start, pos_ - start));
      auto v = ring_->find(name);
      if (!v) fail("unknown variable '" + name + "'");
      unsigned e = 1;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        std::string d = digits();
        if (d.empty()) fail("missing exponent");
        e = static_cast<unsigned>(std::stoul(d));
      }
      return Polynomial::variable(ring_, *v, e);
    }
    if (c == '(') {
      ++pos_;
      std::size_t depth = 1, start = pos_;
      while (pos_ < s_.size() && depth > 0) {
        if (s_[pos_] == '(') ++depth;
        if (s_[pos_] == ')') --depth;
        ++pos_;
      }
      if (depth != 0) fail("unbalanced parentheses");
      Polynomial inner = PolyParser(ring_, s_.substr(start, pos_ - start - 1)).parse();
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        std::string d = digits();
        if (d.empty()) fail("missing exponent");
        Polynomial r = Polynomial::constant(ring_, 1);
        for (unsigned long k = std::stoul(d); k > 0; --k) r *= inner;
        return r;
      }
      return inner;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw InvalidArgument("polynomial text at offset " + std::to_string(pos_) + ": " + what);
  }

  const RingPtr& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const RingPtr& ring, std::string_view text) {
  if (!ring) throw InvalidArgument("parse_polynomial needs a ring");
  return PolyParser(ring, text).parse();
}

}  // namespace feynred
