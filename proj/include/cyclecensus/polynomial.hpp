#pragma once

// Polynomials over F_q with FieldElement coefficients, constant term first.

#include "cyclecensus/field.hpp"

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cyclecensus {

struct Polynomial {
  std::vector<FieldElement> coeffs;  // coeffs[i] multiplies x^i

  Polynomial() = default;
  explicit Polynomial(std::vector<FieldElement> c) : coeffs(std::move(c)) {}

  /// Degree after ignoring trailing zeros; -1 for the zero polynomial.
  int degree() const noexcept {
    for (std::size_t i = coeffs.size(); i-- > 0;)
      if (coeffs[i].idx != 0) return static_cast<int>(i);
    return -1;
  }
  bool is_zero() const noexcept { return degree() < 0; }
  FieldElement leading() const noexcept {
    const int d = degree();
    return d < 0 ? FieldElement{0} : coeffs[static_cast<std::size_t>(d)];
  }
  void trim() {
    while (!coeffs.empty() && coeffs.back().idx == 0) coeffs.pop_back();
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    Polynomial x = a, y = b;
    x.trim();
    y.trim();
    return x.coeffs == y.coeffs;
  }
};

inline Polynomial make_polynomial(const FieldSpec& field, std::initializer_list<std::uint32_t> indices) {
  Polynomial f;
  for (auto i : indices) f.coeffs.push_back(field.element(i));
  return f;
}

inline FieldElement evaluate(const FieldSpec& field, std::span<const FieldElement> coeffs, FieldElement x) {
  std::uint32_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = field.add_idx(field.mul_idx(acc, x.idx), coeffs[i].idx);
  return FieldElement{acc};
}

inline FieldElement evaluate(const FieldSpec& field, const Polynomial& f, FieldElement x) {
  return evaluate(field, std::span<const FieldElement>(f.coeffs), x);
}

/// Remainder of a modulo b (b nonzero).
inline Polynomial poly_mod(const FieldSpec& field, Polynomial a, const Polynomial& b) {
  const int db = b.degree();
  if (db < 0) throw std::domain_error("polynomial division by zero");
  a.trim();
  const std::uint32_t inv_lead = field.inv_idx(b.leading().idx);
  while (a.degree() >= db) {
    const auto da = static_cast<std::size_t>(a.degree());
    const std::size_t shift = da - static_cast<std::size_t>(db);
    const std::uint32_t factor = field.mul_idx(a.coeffs[da].idx, inv_lead);
    for (int i = 0; i <= db; ++i) {
      const std::uint32_t sub = field.mul_idx(factor, b.coeffs[static_cast<std::size_t>(i)].idx);
      auto& slot = a.coeffs[shift + static_cast<std::size_t>(i)].idx;
      slot = field.add_idx(slot, field.neg_idx(sub));
    }
    a.trim();
  }
  return a;
}

/// Monic gcd (zero polynomial when both inputs are zero).
inline Polynomial poly_gcd(const FieldSpec& field, Polynomial a, Polynomial b) {
  a.trim();
  b.trim();
  while (!b.is_zero()) {
    Polynomial r = poly_mod(field, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  const std::uint32_t inv_lead = field.inv_idx(a.leading().idx);
  for (auto& c : a.coeffs) c.idx = field.mul_idx(c.idx, inv_lead);
  return a;
}

inline bool coprime(const FieldSpec& field, const Polynomial& a, const Polynomial& b) {
  return poly_gcd(field, a, b).degree() == 0;
}

}  // namespace cyclecensus
