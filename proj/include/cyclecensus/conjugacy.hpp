#pragma once

// Affine conjugacy classes of degree-d polynomials.
//
// The group {x -> a x + b, a != 0} acts by f -> l^-1 o f o l and preserves
// cycle spectra, so a census only needs one representative per orbit
// weighted by the orbit size. Normal forms: translate away the x^(d-1)
// coefficient (needs p not dividing d), scale the leading coefficient into a
// fixed transversal of F_q^* / (F_q^*)^(d-1), then take the lexicographic
// minimum over the residual scalings a^(d-1) = 1.

#include "cyclecensus/field.hpp"
#include "cyclecensus/polynomial.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclecensus {

struct AffineMap {
  FieldElement scale{1};
  FieldElement shift{0};
};

/// (outer o inner)(x) = outer(inner(x)).
inline AffineMap compose(const FieldSpec& field, AffineMap outer, AffineMap inner) {
  return {field.mul(outer.scale, inner.scale), field.add(field.mul(outer.scale, inner.shift), outer.shift)};
}

/// l^-1 o f o l, coefficients padded to deg f + 1 entries.
inline Polynomial conjugate(const FieldSpec& field, const Polynomial& f, AffineMap l) {
  if (l.scale.idx == 0) throw std::invalid_argument("conjugate: affine map must be invertible");
  const std::size_t len = f.coeffs.size();
  std::vector<std::uint32_t> acc(len, 0);
  // Horner in the polynomial ring: acc = acc * (a x + b) + c_j.
  for (std::size_t j = len; j-- > 0;) {
    std::uint32_t carry = 0;
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint32_t shifted = field.add_idx(field.mul_idx(acc[i], l.shift.idx), carry);
      carry = field.mul_idx(acc[i], l.scale.idx);
      acc[i] = shifted;
    }
    acc[0] = field.add_idx(acc[0], f.coeffs[j].idx);
  }
  // l^-1(y) = (y - b) / a.
  acc[0] = field.add_idx(acc[0], field.neg_idx(l.shift.idx));
  const std::uint32_t inv_scale = field.inv_idx(l.scale.idx);
  Polynomial g;
  g.coeffs.resize(len);
  for (std::size_t i = 0; i < len; ++i) g.coeffs[i] = FieldElement{field.mul_idx(acc[i], inv_scale)};
  return g;
}

struct ConjugacyClass {
  Polynomial representative;
  std::uint64_t orbit_size = 0;
};

struct NormalForm {
  Polynomial representative;
  AffineMap map;  // conjugate(f, map) == representative
};

class ReductionUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConjugacyReduction {
 public:
  /// Builds the class list and runs the applicability self-test; throws
  /// ReductionUnavailable when the normal form does not apply.
  static ConjugacyReduction build(const FieldSpec& field, unsigned degree) {
    if (degree < 2) throw ReductionUnavailable("conjugacy reduction requires degree >= 2");
    if (degree % field.p() == 0)
      throw ReductionUnavailable("characteristic " + std::to_string(field.p()) + " divides degree " +
                                 std::to_string(degree) + "; no centering translation");
    ConjugacyReduction r(field, degree);
    r.enumerate_classes();
    r.self_test();
    return r;
  }

  /// Returns nullopt (with the reason in `why`) instead of throwing.
  static std::optional<ConjugacyReduction> try_build(const FieldSpec& field, unsigned degree, std::string* why = nullptr) {
    try {
      return build(field, degree);
    } catch (const ReductionUnavailable& e) {
      if (why) *why = e.what();
      return std::nullopt;
    }
  }

  const std::vector<ConjugacyClass>& classes() const noexcept { return classes_; }
  const FieldSpec& field() const noexcept { return field_; }
  unsigned degree() const noexcept { return degree_; }

  NormalForm normal_form(const Polynomial& f) const {
    if (f.degree() != static_cast<int>(degree_)) throw std::invalid_argument("normal_form: wrong degree");
    const FieldSpec& F = field_;
    const FieldElement lead = f.coeffs[degree_];
    // Translation killing the x^(d-1) coefficient: b = -c_{d-1} / (d * lead).
    const FieldElement denom = F.mul(F.from_integer(degree_), lead);
    const AffineMap translate{FieldSpec::one(), F.neg(F.div(f.coeffs[degree_ - 1], denom))};
    const Polynomial centered = conjugate(F, f, translate);
    // Scaling by a multiplies the leading coefficient by a^(d-1).
    AffineMap scaling{};
    bool found = false;
    for (std::uint32_t a = 1; a < F.q() && !found; ++a) {
      const FieldElement new_lead = F.mul(lead, F.pow(FieldElement{a}, degree_ - 1));
      if (std::binary_search(transversal_.begin(), transversal_.end(), new_lead)) {
        scaling = {FieldElement{a}, FieldSpec::zero()};
        found = true;
      }
    }
    if (!found) throw std::logic_error("normal_form: leading coefficient has no transversal image");
    const Polynomial scaled = conjugate(F, centered, scaling);
    auto [rep, residual] = residual_minimum(scaled);
    return {std::move(rep), compose(F, compose(F, translate, scaling), residual)};
  }

  /// Number of affine maps fixing f under conjugation, by testing all q(q-1).
  std::uint64_t stabilizer_size(const Polynomial& f) const {
    const FieldSpec& F = field_;
    const FieldElement lead = f.leading();
    std::uint64_t count = 0;
    for (std::uint32_t a = 1; a < F.q(); ++a) {
      // Conjugation by a x + b scales the leading coefficient by a^(d-1).
      if (F.mul(lead, F.pow(FieldElement{a}, degree_ - 1)) != lead) continue;
      for (std::uint32_t b = 0; b < F.q(); ++b)
        if (conjugate(F, f, {FieldElement{a}, FieldElement{b}}) == f) ++count;
    }
    return count;
  }

 private:
  ConjugacyReduction(FieldSpec field, unsigned degree) : field_(std::move(field)), degree_(degree) {
    const FieldSpec& F = field_;
    const std::uint32_t index = std::gcd(degree_ - 1, F.q() - 1);
    FieldElement g = FieldSpec::one();
    for (std::uint32_t i = 0; i < index; ++i) {
      transversal_.push_back(g);
      g = F.mul(g, F.generator());
    }
    std::sort(transversal_.begin(), transversal_.end());
    for (std::uint32_t a = 1; a < F.q(); ++a)
      if (F.pow(FieldElement{a}, degree_ - 1) == FieldSpec::one()) residual_.push_back(FieldElement{a});
  }

  std::pair<Polynomial, AffineMap> residual_minimum(const Polynomial& f) const {
    Polynomial best = f;
    AffineMap best_map{};
    for (auto a : residual_) {
      Polynomial g = conjugate(field_, f, {a, FieldSpec::zero()});
      if (lex_less(g, best)) {
        best = std::move(g);
        best_map = {a, FieldSpec::zero()};
      }
    }
    return {best, best_map};
  }

  static bool lex_less(const Polynomial& a, const Polynomial& b) {
    return std::lexicographical_compare(a.coeffs.rbegin(), a.coeffs.rend(), b.coeffs.rbegin(), b.coeffs.rend());
  }

  void enumerate_classes() {
    const FieldSpec& F = field_;
    const std::uint32_t q = F.q();
    // Candidates: lead in the transversal, x^(d-1) coefficient zero, c_0..c_{d-2} free.
    const std::size_t free_count = degree_ - 1;
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < free_count; ++i) combos *= q;
    for (auto lead : transversal_) {
      for (std::uint64_t code = 0; code < combos; ++code) {
        Polynomial f;
        f.coeffs.assign(degree_ + 1, FieldSpec::zero());
        f.coeffs[degree_] = lead;
        std::uint64_t c = code;
        for (std::size_t i = 0; i < free_count; ++i) {
          f.coeffs[i] = FieldElement{static_cast<std::uint32_t>(c % q)};
          c /= q;
        }
        if (residual_minimum(f).first.coeffs != f.coeffs) continue;
        const std::uint64_t stab = stabilizer_size(f);
        const std::uint64_t group = std::uint64_t{q} * (q - 1);
        classes_.push_back({std::move(f), group / stab});
      }
    }
  }

  // Applicability: every sampled polynomial conjugates onto a listed class
  // representative, and the orbit sizes partition the whole family.
  void self_test() const {
    const FieldSpec& F = field_;
    const std::uint32_t q = F.q();
    std::uint64_t total = q - 1;
    for (unsigned i = 0; i < degree_; ++i) total *= q;
    std::uint64_t orbit_sum = 0;
    std::set<std::vector<FieldElement>> reps;
    for (const auto& c : classes_) {
      if (q * std::uint64_t{q - 1} % c.orbit_size != 0) throw ReductionUnavailable("self-test: orbit size does not divide group order");
      orbit_sum += c.orbit_size;
      reps.insert(c.representative.coeffs);
    }
    if (orbit_sum != total)
      throw ReductionUnavailable("self-test: orbit sizes sum to " + std::to_string(orbit_sum) + ", expected " + std::to_string(total));
    std::mt19937_64 rng(0x5eed0000ULL + q * 131ULL + degree_);
    std::uniform_int_distribution<std::uint32_t> any(0, q - 1), nonzero(1, q - 1);
    for (int trial = 0; trial < 100; ++trial) {
      Polynomial f;
      f.coeffs.resize(degree_ + 1);
      for (unsigned j = 0; j < degree_; ++j) f.coeffs[j] = FieldElement{any(rng)};
      f.coeffs[degree_] = FieldElement{nonzero(rng)};
      const NormalForm nf = normal_form(f);
      if (conjugate(F, f, nf.map) != nf.representative) throw ReductionUnavailable("self-test: normal-form map does not conjugate onto representative");
      if (!reps.count(nf.representative.coeffs)) throw ReductionUnavailable("self-test: normal form is not a listed representative");
    }
  }

  FieldSpec field_;
  unsigned degree_;
  std::vector<FieldElement> transversal_;
  std::vector<FieldElement> residual_;
  std::vector<ConjugacyClass> classes_;
};

inline std::vector<ConjugacyClass> conjugacy_classes(const FieldSpec& field, unsigned degree) {
  return ConjugacyReduction::build(field, degree).classes();
}

}  // namespace cyclecensus
