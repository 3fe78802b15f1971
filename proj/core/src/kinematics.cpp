#include "feynred/kinematics.hpp"

#include <algorithm>

#include "feynred/errors.hpp"

namespace feynred {

namespace {

std::string pair_name(int i, int j) { return "s_" + std::to_string(i) + "_" + std::to_string(j); }

}  // namespace

KinematicsContext::KinematicsContext(int r, std::vector<bool> onshell, std::vector<std::string> masses)
    : r_(r), onshell_(std::move(onshell)), masses_(std::move(masses)) {
  if (r < 0) throw InvalidArgument("negative momentum count");
  if (static_cast<int>(onshell_.size()) != r) throw InvalidArgument("on-shell flags do not match r");
  std::sort(masses_.begin(), masses_.end());
  masses_.erase(std::unique(masses_.begin(), masses_.end()), masses_.end());
  if (r <= 1) return;

  const int k = r - 1;
  pairs_.assign(static_cast<std::size_t>(k * k), {});
  auto symbol = [&](const std::string& name) {
    invariants_.push_back(name);
    return invariants_.size() - 1;
  };
  auto set = [&](int i, int j, Form f) {
    pairs_[(i - 1) * k + (j - 1)] = f;
    pairs_[(j - 1) * k + (i - 1)] = std::move(f);
  };

  if (r == 2) {
    if (!onshell_[0] && !onshell_[1]) set(1, 1, {{symbol(pair_name(1, 1)), 1}});
    return;
  }

  const int ei = r - 2, ej = r - 1;  // eliminated pair
  for (int i = 1; i <= k; ++i) {
    for (int j = i; j <= k; ++j) {
      if (i == j) {
        if (!onshell_[i - 1]) set(i, i, {{symbol(pair_name(i, i)), 1}});
      } else if (!(i == ei && j == ej)) {
        set(i, j, {{symbol(pair_name(i, j)), 1}});
      }
    }
  }
  // pr^2 = sum_{i<r} pi^2 + sum_{i<j<r} 2 pi.pj
  Form elim;
  if (!onshell_[r - 1]) elim.push_back({symbol(pair_name(r, r)), 1});
  for (int i = 1; i <= k; ++i) {
    for (int j = i; j <= k; ++j) {
      if (i == ei && j == ej) continue;
      for (auto [s, c] : pair(i, j)) elim.push_back({s, -c});
    }
  }
  set(ei, ej, std::move(elim));
}

std::vector<std::string> KinematicsContext::mass_symbols() const {
  std::vector<std::string> out;
  for (const auto& m : masses_) out.push_back(mass_symbol(m));
  return out;
}

std::vector<Variable> KinematicsContext::variables() const {
  std::vector<Variable> out;
  for (const auto& s : invariants_) out.push_back({s, VariableKind::kKinematic});
  for (const auto& s : mass_symbols()) out.push_back({s, VariableKind::kKinematic});
  return out;
}

Polynomial KinematicsContext::momentum_square(const RingPtr& ring, const Momentum& m) const {
  std::vector<long> count(r_ + 1, 0);
  for (int label : m) {
    if (label < 1 || label > r_) throw InvalidArgument("unknown momentum label p" + std::to_string(label));
    ++count[label];
  }
  Polynomial out(ring);
  if (r_ <= 1) return out;
  std::vector<mpq_class> coeff(invariants_.size());
  const int k = r_ - 1;
  std::vector<long> d(k + 1, 0);
  for (int i = 1; i <= k; ++i) d[i] = count[i] - count[r_];
  for (int i = 1; i <= k; ++i) {
    if (d[i] == 0) continue;
    for (int j = i; j <= k; ++j) {
      if (d[j] == 0) continue;
      // (sum d_i pi)^2 = sum d_i^2 pi^2 + sum_{i<j} d_i d_j (2 pi.pj)
      long w = d[i] * d[j];
      for (auto [s, c] : pair(i, j)) coeff[s] += mpq_class(w * c);
    }
  }
  std::vector<Polynomial::Term> terms;
  for (std::size_t s = 0; s < coeff.size(); ++s) {
    if (coeff[s] == 0) continue;
    Monomial mono;
    mono.set(ring->at(invariants_[s]), 1);
    terms.push_back({mono, coeff[s]});
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

Polynomial KinematicsContext::mass_square(const RingPtr& ring, const std::string& mass) const {
  if (!std::binary_search(masses_.begin(), masses_.end(), mass)) {
    throw InvalidArgument("undeclared mass " + mass);
  }
  return Polynomial::variable(ring, ring->at(mass_symbol(mass)));
}

}  // namespace feynred
