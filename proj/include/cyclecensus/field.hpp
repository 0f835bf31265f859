#pragma once

// Finite fields F_q, q = p^n, with elements coded as dense indices in [0, q).
//
// An element sum c_i t^i (mod modulus) has index sum c_i p^i. Index 0 is the
// additive identity and index 1 the multiplicative identity for every q.
// Fields with q <= 256 carry full addition/multiplication tables; larger
// fields reduce directly. Both paths give identical results.

#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclecensus {

struct FieldElement {
  std::uint32_t idx = 0;

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

inline constexpr std::uint64_t kMaxFieldOrder = 1U << 16;
inline constexpr std::uint32_t kTableThreshold = 256;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct PrimePower {
  std::uint32_t p = 0;
  std::uint32_t n = 0;
};

/// (p, n) with q = p^n, or nullopt when q is not a prime power.
inline std::optional<PrimePower> prime_power_decompose(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = q;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  std::uint32_t n = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++n;
  }
  if (rest != 1) return std::nullopt;
  return PrimePower{static_cast<std::uint32_t>(p), n};
}

inline std::vector<std::uint32_t> prime_powers_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t q = std::max<std::uint64_t>(lo, 2); q <= hi; ++q)
    if (prime_power_decompose(q)) out.push_back(static_cast<std::uint32_t>(q));
  return out;
}

namespace detail {

// Polynomials over F_p as coefficient vectors, constant term first.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint64_t inverse_mod_prime(std::uint64_t a, std::uint64_t p) {
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint64_t e = p - 2;
  while (e != 0) {
    if (e & 1U) result = result * base % p;
    base = base * base % p;
    e >>= 1U;
  }
  return result;
}

// Remainder of f modulo g (g nonzero) over F_p.
inline PrimePoly poly_mod(PrimePoly f, const PrimePoly& g, std::uint32_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const std::uint64_t inv_lead = inverse_mod_prime(g.back(), p);
  while (f.size() > dg) {
    const std::size_t shift = f.size() - 1 - dg;
    const std::uint64_t factor = f.back() * inv_lead % p;
    for (std::size_t i = 0; i <= dg; ++i) {
      const std::uint64_t sub = factor * g[i] % p;
      f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - sub) % p);
    }
    trim(f);
  }
  return f;
}

}  // namespace detail

/// True iff the monic polynomial `poly` (constant term first) has no monic
/// divisor of degree 1..deg/2 over F_p. Exhaustive trial division.
inline bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
  if (!is_prime(p)) throw std::invalid_argument("is_irreducible: characteristic must be prime");
  if (poly.size() < 2) throw std::invalid_argument("is_irreducible: degree must be >= 1");
  if (poly.back() != 1) throw std::invalid_argument("is_irreducible: polynomial must be monic");
  for (auto c : poly)
    if (c >= p) throw std::invalid_argument("is_irreducible: coefficient out of range");
  const std::size_t degree = poly.size() - 1;
  for (std::size_t dd = 1; dd <= degree / 2; ++dd) {
    // All monic divisors of degree dd: p^dd choices of lower coefficients.
    std::vector<std::uint32_t> divisor(dd + 1, 0);
    divisor[dd] = 1;
    while (true) {
      if (detail::poly_mod(poly, divisor, p).empty()) return false;
      std::size_t i = 0;
      while (i < dd && ++divisor[i] == p) divisor[i++] = 0;
      if (i == dd) break;
    }
  }
  return true;
}

class FieldSpec {
 public:
  /// F_{p^n} with the smallest monic irreducible modulus of degree n, where
  /// candidates are ordered by the base-p integer sum c_i p^i.
  static FieldSpec build(std::uint32_t p, std::uint32_t n) {
    if (!is_prime(p)) throw std::invalid_argument("build_field: p=" + std::to_string(p) + " is not prime");
    if (n < 1) throw std::invalid_argument("build_field: extension degree must be >= 1");
    const std::uint64_t q = checked_order(p, n);
    std::vector<std::uint32_t> modulus(n + 1, 0);
    modulus[n] = 1;
    for (std::uint64_t code = 0; code < q; ++code) {
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < n; ++i) {
        modulus[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      if (is_irreducible(p, modulus)) return FieldSpec(p, n, modulus);
    }
    throw std::logic_error("build_field: no irreducible polynomial found (internal error)");
  }

  static FieldSpec with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    if (!is_prime(p)) throw std::invalid_argument("with_modulus: p is not prime");
    if (modulus.size() < 2) throw std::invalid_argument("with_modulus: modulus degree must be >= 1");
    if (!is_irreducible(p, modulus)) throw std::invalid_argument("with_modulus: modulus is reducible");
    const auto n = static_cast<std::uint32_t>(modulus.size() - 1);
    checked_order(p, n);
    return FieldSpec(p, n, std::move(modulus));
  }

  /// Field of order q using build(p, n); q must be a prime power.
  static FieldSpec of_order(std::uint64_t q) {
    const auto pp = prime_power_decompose(q);
    if (!pp) throw std::invalid_argument("field order " + std::to_string(q) + " is not a prime power");
    return build(pp->p, pp->n);
  }

  std::uint32_t p() const noexcept { return impl_->p; }
  std::uint32_t n() const noexcept { return impl_->n; }
  std::uint32_t q() const noexcept { return impl_->q; }
  /// Monic modulus, constant term first (n + 1 entries).
  const std::vector<std::uint32_t>& modulus() const noexcept { return impl_->modulus; }
  bool has_tables() const noexcept { return !impl_->mul.empty(); }

  FieldElement element(std::uint64_t idx) const {
    if (idx >= q()) throw std::out_of_range("field element index " + std::to_string(idx) + " out of range for q=" + std::to_string(q()));
    return FieldElement{static_cast<std::uint32_t>(idx)};
  }
  static constexpr FieldElement zero() noexcept { return FieldElement{0}; }
  static constexpr FieldElement one() noexcept { return FieldElement{1}; }

  FieldElement add(FieldElement a, FieldElement b) const { check(a), check(b); return {add_idx(a.idx, b.idx)}; }
  FieldElement sub(FieldElement a, FieldElement b) const { check(a), check(b); return {add_idx(a.idx, neg_idx(b.idx))}; }
  FieldElement neg(FieldElement a) const { check(a); return {neg_idx(a.idx)}; }
  FieldElement mul(FieldElement a, FieldElement b) const { check(a), check(b); return {mul_idx(a.idx, b.idx)}; }
  FieldElement inv(FieldElement a) const {
    check(a);
    if (a.idx == 0) throw std::domain_error("inverse of zero");
    return {inv_idx(a.idx)};
  }
  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
  FieldElement pow(FieldElement a, std::uint64_t e) const {
    check(a);
    std::uint32_t result = 1;
    std::uint32_t base = a.idx;
    while (e != 0) {
      if (e & 1U) result = mul_idx(result, base);
      base = mul_idx(base, base);
      e >>= 1U;
    }
    return {result};
  }
  /// Image of the integer m under Z -> F_q.
  FieldElement from_integer(std::int64_t m) const {
    const auto r = static_cast<std::uint32_t>(((m % static_cast<std::int64_t>(p())) + p()) % p());
    return {r};
  }

  /// Element of multiplicative order q-1 (smallest index).
  FieldElement generator() const { return {impl_->generator}; }

  // Unchecked index arithmetic for inner loops; callers guarantee a, b < q.
  std::uint32_t add_idx(std::uint32_t a, std::uint32_t b) const noexcept {
    if (has_tables()) return impl_->add[a * impl_->q + b];
    return direct_add(*impl_, a, b);
  }
  std::uint32_t neg_idx(std::uint32_t a) const noexcept {
    if (has_tables()) return impl_->neg[a];
    return direct_neg(*impl_, a);
  }
  std::uint32_t mul_idx(std::uint32_t a, std::uint32_t b) const noexcept {
    if (has_tables()) return impl_->mul[a * impl_->q + b];
    return direct_mul(*impl_, a, b);
  }
  std::uint32_t inv_idx(std::uint32_t a) const noexcept {
    if (has_tables()) return impl_->inv[a];
    return direct_inv(*impl_, a);
  }

  /// Reference arithmetic by explicit digit/polynomial reduction, table-free.
  std::uint32_t direct_add_idx(std::uint32_t a, std::uint32_t b) const noexcept { return direct_add(*impl_, a, b); }
  std::uint32_t direct_mul_idx(std::uint32_t a, std::uint32_t b) const noexcept { return direct_mul(*impl_, a, b); }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.p() == b.p() && a.modulus() == b.modulus();
  }

 private:
  struct Impl {
    std::uint32_t p = 0, n = 0, q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<std::uint32_t> pow_p;  // p^i for i < n
    std::vector<std::uint16_t> add, mul, neg, inv;
    std::uint32_t generator = 1;
  };

  FieldSpec(std::uint32_t p, std::uint32_t n, std::vector<std::uint32_t> modulus) {
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->n = n;
    impl->q = static_cast<std::uint32_t>(checked_order(p, n));
    impl->modulus = std::move(modulus);
    impl->pow_p.resize(n);
    std::uint32_t pw = 1;
    for (std::uint32_t i = 0; i < n; ++i, pw *= p) impl->pow_p[i] = pw;
    const std::uint32_t q = impl->q;
    if (q <= kTableThreshold) {
      impl->add.resize(std::size_t{q} * q);
      impl->mul.resize(std::size_t{q} * q);
      impl->neg.resize(q);
      impl->inv.resize(q);
      for (std::uint32_t a = 0; a < q; ++a) {
        impl->neg[a] = static_cast<std::uint16_t>(direct_neg(*impl, a));
        for (std::uint32_t b = 0; b < q; ++b) {
          impl->add[a * q + b] = static_cast<std::uint16_t>(direct_add(*impl, a, b));
          impl->mul[a * q + b] = static_cast<std::uint16_t>(direct_mul(*impl, a, b));
        }
      }
      for (std::uint32_t a = 1; a < q; ++a) impl->inv[a] = static_cast<std::uint16_t>(direct_inv(*impl, a));
    }
    impl->generator = find_generator(*impl);
    impl_ = std::move(impl);
  }

  static std::uint64_t checked_order(std::uint32_t p, std::uint32_t n) {
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      q *= p;
      if (q > kMaxFieldOrder) throw std::invalid_argument("field order exceeds 2^16");
    }
    return q;
  }

  void check(FieldElement a) const {
    if (a.idx >= q()) throw std::out_of_range("field element index " + std::to_string(a.idx) + " out of range for q=" + std::to_string(q()));
  }

  static std::uint32_t direct_add(const Impl& f, std::uint32_t a, std::uint32_t b) noexcept {
    if (f.n == 1) return (a + b) % f.p;
    std::uint32_t out = 0;
    for (std::uint32_t i = 0; i < f.n; ++i) {
      const std::uint32_t da = a % f.p, db = b % f.p;
      a /= f.p;
      b /= f.p;
      out += ((da + db) % f.p) * f.pow_p[i];
    }
    return out;
  }

  static std::uint32_t direct_neg(const Impl& f, std::uint32_t a) noexcept {
    if (f.n == 1) return (f.p - a) % f.p;
    std::uint32_t out = 0;
    for (std::uint32_t i = 0; i < f.n; ++i) {
      const std::uint32_t da = a % f.p;
      a /= f.p;
      out += ((f.p - da) % f.p) * f.pow_p[i];
    }
    return out;
  }

  static std::uint32_t direct_mul(const Impl& f, std::uint32_t a, std::uint32_t b) noexcept {
    if (f.n == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % f.p);
    const std::uint32_t n = f.n, p = f.p;
    std::vector<std::uint64_t> da(n), db(n), prod(2 * n - 1, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      da[i] = a % p;
      a /= p;
      db[i] = b % p;
      b /= p;
    }
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    // Reduce with the monic modulus: t^n = -(m_0 + ... + m_{n-1} t^{n-1}).
    for (std::size_t top = 2 * n - 2; top >= n; --top) {
      const std::uint64_t c = prod[top];
      if (c == 0) continue;
      prod[top] = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        prod[top - n + i] = (prod[top - n + i] + (p - c) * f.modulus[i]) % p;
    }
    std::uint32_t out = 0;
    for (std::uint32_t i = 0; i < n; ++i) out += static_cast<std::uint32_t>(prod[i]) * f.pow_p[i];
    return out;
  }

  static std::uint32_t direct_pow(const Impl& f, std::uint32_t a, std::uint64_t e) noexcept {
    std::uint32_t result = 1;
    while (e != 0) {
      if (e & 1U) result = direct_mul(f, result, a);
      a = direct_mul(f, a, a);
      e >>= 1U;
    }
    return result;
  }

  static std::uint32_t direct_inv(const Impl& f, std::uint32_t a) noexcept { return direct_pow(f, a, f.q - 2); }

  static std::uint32_t find_generator(const Impl& f) {
    const std::uint32_t order = f.q - 1;
    if (order == 1) return 1;
    std::vector<std::uint32_t> prime_factors;
    std::uint32_t rest = order;
    for (std::uint32_t d = 2; d * d <= rest; ++d) {
      if (rest % d == 0) {
        prime_factors.push_back(d);
        while (rest % d == 0) rest /= d;
      }
    }
    if (rest > 1) prime_factors.push_back(rest);
    for (std::uint32_t g = 2; g < f.q; ++g) {
      bool primitive = true;
      for (auto r : prime_factors) {
        if (direct_pow(f, g, order / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) return g;
    }
    throw std::logic_error("no primitive element found (internal error)");
  }

  std::shared_ptr<const Impl> impl_;
};

inline FieldSpec build_field(std::uint32_t p, std::uint32_t n) { return FieldSpec::build(p, n); }

}  // namespace cyclecensus
