#pragma once

// Function tables (functional graphs in evaluated form) and their cycle spectra.

#include "cyclecensus/field.hpp"
#include "cyclecensus/polynomial.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclecensus {

/// A self-map of {0, ..., m-1}. For maps on P^1(F_q), index q is the point at infinity.
class FunctionTable {
 public:
  FunctionTable() = default;
  explicit FunctionTable(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    const auto m = images_.size();
    for (std::size_t v = 0; v < m; ++v)
      if (images_[v] >= m)
        throw std::out_of_range("function table image " + std::to_string(images_[v]) + " at vertex " +
                                std::to_string(v) + " outside domain of size " + std::to_string(m));
  }

  std::size_t domain_size() const noexcept { return images_.size(); }
  std::span<const std::uint32_t> images() const noexcept { return images_; }
  std::uint32_t operator()(std::uint32_t v) const { return images_.at(v); }

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

/// Number of k-cycles for each length k; lengths never written read as zero.
class CycleSpectrum {
 public:
  std::uint64_t operator[](std::size_t k) const noexcept { return k < counts_.size() ? counts_[k] : 0; }

  void add(std::size_t k, std::uint64_t n = 1) {
    if (k == 0) throw std::invalid_argument("cycle length must be positive");
    if (k >= counts_.size()) counts_.resize(k + 1, 0);
    counts_[k] += n;
  }

  CycleSpectrum& operator+=(const CycleSpectrum& other) {
    add_scaled(other, 1);
    return *this;
  }

  void add_scaled(const CycleSpectrum& other, std::uint64_t factor) {
    if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
    for (std::size_t k = 1; k < other.counts_.size(); ++k) counts_[k] += other.counts_[k] * factor;
  }

  /// Largest k with a nonzero count, 0 if empty.
  std::size_t max_length() const noexcept {
    for (std::size_t k = counts_.size(); k-- > 1;)
      if (counts_[k] != 0) return k;
    return 0;
  }

  std::uint64_t total_cycles() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  std::uint64_t periodic_points() const noexcept {
    std::uint64_t s = 0;
    for (std::size_t k = 1; k < counts_.size(); ++k) s += k * counts_[k];
    return s;
  }

  std::vector<std::pair<std::size_t, std::uint64_t>> nonzero() const {
    std::vector<std::pair<std::size_t, std::uint64_t>> out;
    for (std::size_t k = 1; k < counts_.size(); ++k)
      if (counts_[k] != 0) out.emplace_back(k, counts_[k]);
    return out;
  }

  friend bool operator==(const CycleSpectrum& a, const CycleSpectrum& b) {
    const std::size_t n = std::max(a.counts_.size(), b.counts_.size());
    for (std::size_t k = 0; k < n; ++k)
      if (a[k] != b[k]) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> counts_;
};

/// Reusable scratch space for linear-time cycle decomposition.
///
/// Each vertex gets a global visit order; a walk that runs into a vertex
/// visited during the same walk has closed a cycle of length (now - order).
/// Vertices visited on earlier walks are finished and contribute nothing.
class CycleWalker {
 public:
  void accumulate(std::span<const std::uint32_t> images, CycleSpectrum& out) {
    const std::size_t m = images.size();
    prepare(m);
    for (std::size_t start = 0; start < m; ++start) {
      if (stamp_[start] == epoch_) continue;
      const std::uint64_t walk_begin = clock_;
      std::uint32_t v = static_cast<std::uint32_t>(start);
      while (stamp_[v] != epoch_) {
        stamp_[v] = epoch_;
        order_[v] = clock_++;
        v = images[v];
      }
      if (order_[v] >= walk_begin) out.add(static_cast<std::size_t>(clock_ - order_[v]));
    }
  }

  std::uint64_t count_components(std::span<const std::uint32_t> images) {
    const std::size_t m = images.size();
    prepare(m);
    std::uint64_t components = 0;
    for (std::size_t start = 0; start < m; ++start) {
      if (stamp_[start] == epoch_) continue;
      const std::uint64_t walk_begin = clock_;
      std::uint32_t v = static_cast<std::uint32_t>(start);
      while (stamp_[v] != epoch_) {
        stamp_[v] = epoch_;
        order_[v] = clock_++;
        v = images[v];
      }
      if (order_[v] >= walk_begin) ++components;
    }
    return components;
  }

 private:
  void prepare(std::size_t m) {
    if (stamp_.size() < m) {
      stamp_.assign(m, 0);
      order_.assign(m, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint64_t> order_;
  std::uint32_t epoch_ = 0;
  std::uint64_t clock_ = 0;
};

inline CycleSpectrum cycle_spectrum(const FunctionTable& table) {
  CycleSpectrum s;
  CycleWalker walker;
  walker.accumulate(table.images(), s);
  return s;
}

inline std::uint64_t component_count(const FunctionTable& table) {
  CycleWalker walker;
  return walker.count_components(table.images());
}

/// Write f(a) for every a in F_q into `images` (size q). No validation.
inline void fill_polynomial_images(const FieldSpec& field, std::span<const FieldElement> coeffs,
                                   std::span<std::uint32_t> images) {
  const std::uint32_t q = field.q();
  for (std::uint32_t a = 0; a < q; ++a) images[a] = evaluate(field, coeffs, FieldElement{a}).idx;
}

inline FunctionTable poly_to_table(const FieldSpec& field, std::span<const FieldElement> coeffs) {
  if (coeffs.empty() || coeffs.back().idx == 0)
    throw std::invalid_argument("poly_to_table: leading coefficient must be nonzero");
  for (auto c : coeffs) field.element(c.idx);
  std::vector<std::uint32_t> images(field.q());
  fill_polynomial_images(field, coeffs, images);
  return FunctionTable(std::move(images));
}

inline FunctionTable poly_to_table(const FieldSpec& field, const Polynomial& f) {
  return poly_to_table(field, std::span<const FieldElement>(f.coeffs));
}

/// Images of num/den on P^1(F_q) (size q+1, index q = infinity); assumes the
/// pair is coprime with den nonzero.
inline void fill_rational_images(const FieldSpec& field, const Polynomial& num, const Polynomial& den,
                                 std::span<std::uint32_t> images) {
  const std::uint32_t q = field.q();
  const std::uint32_t infinity = q;
  for (std::uint32_t a = 0; a < q; ++a) {
    const std::uint32_t h = evaluate(field, den, FieldElement{a}).idx;
    if (h == 0) {
      images[a] = infinity;
    } else {
      const std::uint32_t g = evaluate(field, num, FieldElement{a}).idx;
      images[a] = field.mul_idx(g, field.inv_idx(h));
    }
  }
  const int dg = num.degree(), dh = den.degree();
  if (dg > dh) {
    images[infinity] = infinity;
  } else if (dg == dh) {
    images[infinity] = field.mul_idx(num.leading().idx, field.inv_idx(den.leading().idx));
  } else {
    images[infinity] = 0;
  }
}

inline FunctionTable rat_to_table(const FieldSpec& field, const Polynomial& num, const Polynomial& den) {
  for (auto c : num.coeffs) field.element(c.idx);
  for (auto c : den.coeffs) field.element(c.idx);
  if (den.is_zero()) throw std::invalid_argument("rat_to_table: zero denominator");
  if (!coprime(field, num, den)) throw std::invalid_argument("rat_to_table: numerator and denominator share a factor");
  std::vector<std::uint32_t> images(std::size_t{field.q()} + 1);
  fill_rational_images(field, num, den, images);
  return FunctionTable(std::move(images));
}

}  // namespace cyclecensus
