#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace feynred {

inline constexpr std::size_t kMaxVariables = 64;

enum class VariableKind { kSchwinger, kKinematic };

struct Variable {
  std::string name;
  VariableKind kind = VariableKind::kSchwinger;

  bool operator==(const Variable&) const = default;
};

// Index of a variable inside its Ring.
struct VarId {
  std::uint32_t index = 0;

  auto operator<=>(const VarId&) const = default;
};

// Declared, ordered set of indeterminates. The declaration order fixes the
// monomial order (graded lexicographic, earlier variables rank higher).
class Ring {
 public:
  static std::shared_ptr<const Ring> make(std::vector<Variable> vars);

  std::size_t size() const noexcept { return vars_.size(); }
  const Variable& variable(VarId v) const { return vars_.at(v.index); }
  const std::vector<Variable>& variables() const noexcept { return vars_; }
  std::optional<VarId> find(std::string_view name) const;
  // Throws InvalidArgument for unknown names.
  VarId at(std::string_view name) const;
  std::vector<VarId> of_kind(VariableKind kind) const;

  bool operator==(const Ring& other) const { return vars_ == other.vars_; }

 private:
  explicit Ring(std::vector<Variable> vars);

  std::vector<Variable> vars_;
  std::unordered_map<std::string, VarId> index_;
};

using RingPtr = std::shared_ptr<const Ring>;

class Monomial {
 public:
  Monomial() = default;

  unsigned operator[](std::size_t i) const noexcept { return exp_[i]; }
  unsigned operator[](VarId v) const noexcept { return exp_[v.index]; }
  unsigned degree() const noexcept { return degree_; }
  bool is_one() const noexcept { return degree_ == 0; }

  // Throws ResourceLimit if the exponent does not fit.
  void set(std::size_t i, unsigned e);
  void set(VarId v, unsigned e) { set(v.index, e); }

  bool divides(const Monomial& other) const noexcept;
  // Requires divides(other) from the divisor side; checked by callers.
  Monomial quotient(const Monomial& divisor) const;
  std::uint64_t support() const noexcept;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) noexcept;
  // Graded lexicographic.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  std::array<std::uint8_t, kMaxVariables> exp_{};
  std::uint16_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

// Sparse multivariate polynomial over Q in canonical form: terms sorted by
// descending graded-lex monomial, no zero coefficients. A default-constructed
// polynomial is zero and carries no ring; it adopts the ring of whatever it is
// combined with.
class Polynomial {
 public:
  struct Term {
    Monomial monomial;
    mpq_class coeff;
  };

  Polynomial() = default;
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr ring, const mpq_class& c);
  static Polynomial variable(RingPtr ring, VarId v, unsigned exponent = 1);
  static Polynomial monomial(RingPtr ring, const Monomial& m, const mpq_class& c);
  // Accepts terms in any order; merges duplicates and drops zeros.
  static Polynomial from_terms(RingPtr ring, std::vector<Term> terms);

  const RingPtr& ring() const noexcept { return ring_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  // Value of a constant polynomial (0 for zero).
  mpq_class constant_value() const;
  const Term& leading_term() const { return terms_.front(); }

  unsigned total_degree() const noexcept;
  unsigned degree(VarId v) const noexcept;
  bool contains(VarId v) const noexcept { return degree(v) > 0; }
  // Bitmask of variables that occur.
  std::uint64_t support() const noexcept;

  std::string to_string() const;
  std::size_t hash() const noexcept;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const mpq_class& c);

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  friend class PolynomialBuilder;

  RingPtr ring_;
  std::vector<Term> terms_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const mpq_class& c);
inline Polynomial operator*(const mpq_class& c, const Polynomial& a) { return a * c; }

inline Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

// Throws ContextMismatch when both rings are set and differ; returns the
// ring to use for the result.
const RingPtr& common_ring(const Polynomial& a, const Polynomial& b);

// Total order used to sort polynomial sets canonically.
std::strong_ordering compare(const Polynomial& a, const Polynomial& b);

struct PolynomialHash {
  std::size_t operator()(const Polynomial& p) const noexcept { return p.hash(); }
};

Polynomial partial_derivative(const Polynomial& p, VarId v);
// p with v set to 0.
Polynomial eval_zero(const Polynomial& p, VarId v);
// p with v replaced by `value`.
Polynomial substitute(const Polynomial& p, VarId v, const Polynomial& value);
Polynomial substitute(const Polynomial& p, VarId v, const mpq_class& value);
// Coefficient of v^k, as a polynomial free of v.
Polynomial coefficient(const Polynomial& p, VarId v, unsigned k);
// All coefficients in v; index = power of v.
std::vector<Polynomial> coefficients(const Polynomial& p, VarId v);
// Coefficient of the highest power of v; p itself when v is absent.
// Throws InvalidArgument on zero input.
Polynomial leading_coefficient(const Polynomial& p, VarId v);
// deg(p, v) <= 1; constants count as linear.
bool linear_in(const Polynomial& p, VarId v);

// Reads the text form produced by to_string, and the usual variations
// ("a1 - 2/3*a2^2", implicit unit coefficients, whitespace).
Polynomial parse_polynomial(const RingPtr& ring, std::string_view text);

}  // namespace feynred
