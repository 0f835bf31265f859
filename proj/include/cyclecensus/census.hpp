#pragma once

// Exhaustive censuses: every degree-d polynomial over F_q, or every degree-d
// rational map on P^1(F_q), with cycle spectra summed into one aggregate.

#include "cyclecensus/conjugacy.hpp"
#include "cyclecensus/dynamics.hpp"
#include "cyclecensus/exact.hpp"
#include "cyclecensus/field.hpp"
#include "cyclecensus/parallel.hpp"
#include "cyclecensus/polynomial.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclecensus {

enum class Family { polynomial, rational };
enum class CensusMode { full, reduced };

inline std::string to_string(Family f) { return f == Family::polynomial ? "polynomial" : "rational"; }
inline std::string to_string(CensusMode m) { return m == CensusMode::full ? "full" : "reduced"; }

inline Family parse_family(const std::string& s) {
  if (s == "polynomial" || s == "poly") return Family::polynomial;
  if (s == "rational") return Family::rational;
  throw std::invalid_argument("unknown family '" + s + "'");
}

/// Number of degree-d maps: q^(d+1) - q^d polynomials or q^(2d+1) - q^(2d-1) rational maps.
inline std::uint64_t family_size(std::uint64_t q, unsigned d, Family family) {
  if (family == Family::polynomial) return ipow_u64(q, d + 1) - ipow_u64(q, d);
  if (d == 0) throw std::invalid_argument("rational family requires degree >= 1");
  return ipow_u64(q, 2 * d + 1) - ipow_u64(q, 2 * d - 1);
}

/// Domain size of the family's functional graphs: q, or q + 1 on P^1.
inline std::uint32_t domain_size(std::uint32_t q, Family family) { return family == Family::polynomial ? q : q + 1; }

struct CensusRecord {
  std::uint32_t q = 0;
  unsigned d = 0;
  Family family = Family::polynomial;
  std::uint64_t total_maps = 0;
  CycleSpectrum aggregate;                  // entry k is the total number of k-cycles
  CensusMode mode = CensusMode::full;       // provenance only
  std::vector<std::uint32_t> modulus;       // field modulus, constant term first
  std::string note;                         // e.g. why reduction fell back to full

  /// Content equality; mode and note are provenance and ignored.
  friend bool operator==(const CensusRecord& a, const CensusRecord& b) {
    return a.q == b.q && a.d == b.d && a.family == b.family && a.total_maps == b.total_maps &&
           a.aggregate == b.aggregate && a.modulus == b.modulus;
  }
};

// ---------------------------------------------------------------------------
// Polynomial enumeration. Polynomial number i in [0, (q-1) q^d) has
// c_j = floor(i / q^j) mod q for j < d and c_d = 1 + floor(i / q^d), so the
// stream runs in lexicographic order of (c_d, ..., c_0) with c_0 fastest.

inline std::uint64_t polynomial_count(std::uint32_t q, unsigned d) { return family_size(q, d, Family::polynomial); }

inline Polynomial polynomial_at(const FieldSpec& field, unsigned d, std::uint64_t index) {
  const std::uint32_t q = field.q();
  Polynomial f;
  f.coeffs.resize(d + 1);
  for (unsigned j = 0; j < d; ++j) {
    f.coeffs[j] = FieldElement{static_cast<std::uint32_t>(index % q)};
    index /= q;
  }
  if (index + 1 >= q) throw std::out_of_range("polynomial index out of range");
  f.coeffs[d] = FieldElement{static_cast<std::uint32_t>(index + 1)};
  return f;
}

/// Calls visit(coeffs) for every polynomial of degree exactly d, in stream order.
template <class Visit>
void enumerate_polynomials(const FieldSpec& field, unsigned d, Visit&& visit) {
  if (d == 0) throw std::invalid_argument("enumerate_polynomials: degree must be >= 1");
  const std::uint64_t n = polynomial_count(field.q(), d);
  Polynomial f = polynomial_at(field, d, 0);
  const std::uint32_t q = field.q();
  for (std::uint64_t i = 0; i < n; ++i) {
    visit(static_cast<const Polynomial&>(f));
    // Increment the base-q counter c_0, c_1, ...; the leading digit lives in [1, q).
    unsigned j = 0;
    while (j < d && ++f.coeffs[j].idx == q) f.coeffs[j++].idx = 0;
    if (j == d) ++f.coeffs[d].idx;
  }
}

namespace detail {

// Census of polynomials with index in [first_group * q, last_group * q):
// the non-constant part is evaluated once per group and the constant
// term is added through the addition table.
inline void census_poly_groups(const FieldSpec& field, unsigned d, std::uint64_t first_group, std::uint64_t last_group,
                               CycleSpectrum& out) {
  const std::uint32_t q = field.q();
  std::vector<std::uint32_t> partial(q), images(q);
  CycleWalker walker;
  for (std::uint64_t g = first_group; g < last_group; ++g) {
    Polynomial f = polynomial_at(field, d, g * q);
    for (std::uint32_t a = 0; a < q; ++a) partial[a] = evaluate(field, f, FieldElement{a}).idx;
    for (std::uint32_t c0 = 0; c0 < q; ++c0) {
      for (std::uint32_t a = 0; a < q; ++a) images[a] = field.add_idx(partial[a], c0);
      walker.accumulate(images, out);
    }
  }
}

inline constexpr std::uint64_t kGroupsPerBlock = 64;

}  // namespace detail

struct CensusOptions {
  unsigned threads = 1;
};

inline CensusRecord census_poly_full(const FieldSpec& field, unsigned d, CensusOptions opts = {}) {
  if (d == 0) throw std::invalid_argument("census_poly: degree must be >= 1");
  const std::uint32_t q = field.q();
  const std::uint64_t groups = polynomial_count(q, d) / q;
  const std::uint64_t blocks = (groups + detail::kGroupsPerBlock - 1) / detail::kGroupsPerBlock;
  CensusRecord rec;
  rec.q = q;
  rec.d = d;
  rec.family = Family::polynomial;
  rec.total_maps = polynomial_count(q, d);
  rec.mode = CensusMode::full;
  rec.modulus = field.modulus();
  rec.aggregate = parallel_reduce_blocks<CycleSpectrum>(
      blocks, opts.threads, [] { return CycleSpectrum{}; },
      [&](std::uint64_t b, CycleSpectrum& acc) {
        const std::uint64_t lo = b * detail::kGroupsPerBlock;
        const std::uint64_t hi = std::min(groups, lo + detail::kGroupsPerBlock);
        detail::census_poly_groups(field, d, lo, hi, acc);
      });
  return rec;
}

inline CensusRecord census_poly_reduced(const ConjugacyReduction& reduction, CensusOptions opts = {}) {
  const FieldSpec& field = reduction.field();
  const auto& classes = reduction.classes();
  CensusRecord rec;
  rec.q = field.q();
  rec.d = reduction.degree();
  rec.family = Family::polynomial;
  rec.total_maps = polynomial_count(rec.q, rec.d);
  rec.mode = CensusMode::reduced;
  rec.modulus = field.modulus();
  constexpr std::uint64_t kClassesPerBlock = 256;
  const std::uint64_t blocks = (classes.size() + kClassesPerBlock - 1) / kClassesPerBlock;
  rec.aggregate = parallel_reduce_blocks<CycleSpectrum>(
      blocks, opts.threads, [] { return CycleSpectrum{}; },
      [&](std::uint64_t b, CycleSpectrum& acc) {
        std::vector<std::uint32_t> images(field.q());
        CycleWalker walker;
        const std::uint64_t hi = std::min<std::uint64_t>(classes.size(), (b + 1) * kClassesPerBlock);
        for (std::uint64_t i = b * kClassesPerBlock; i < hi; ++i) {
          fill_polynomial_images(field, classes[i].representative.coeffs, images);
          CycleSpectrum one;
          walker.accumulate(images, one);
          acc.add_scaled(one, classes[i].orbit_size);
        }
      });
  return rec;
}

/// Full or conjugacy-reduced census. A reduced request whose applicability
/// test fails runs in full mode and records the reason in `note`.
inline CensusRecord census_poly(const FieldSpec& field, unsigned d, CensusMode mode, CensusOptions opts = {}) {
  if (d == 0) throw std::invalid_argument("census_poly: degree must be >= 1");
  if (mode == CensusMode::reduced) {
    std::string why;
    if (auto reduction = ConjugacyReduction::try_build(field, d, &why)) return census_poly_reduced(*reduction, opts);
    CensusRecord rec = census_poly_full(field, d, opts);
    rec.note = "reduction unavailable, ran full: " + why;
    return rec;
  }
  return census_poly_full(field, d, opts);
}

// ---------------------------------------------------------------------------
// Rational maps in canonical form: monic denominator h, coprime numerator g,
// max(deg g, deg h) = d. Stream order: denominators by degree then index,
// numerators by index within each denominator.

/// All monic polynomials of exact degree e, in index order.
inline std::vector<Polynomial> monic_polynomials(const FieldSpec& field, unsigned e) {
  const std::uint32_t q = field.q();
  const std::uint64_t n = ipow_u64(q, e);
  std::vector<Polynomial> out;
  out.reserve(n);
  for (std::uint64_t code = 0; code < n; ++code) {
    Polynomial h;
    h.coeffs.resize(e + 1);
    std::uint64_t c = code;
    for (unsigned j = 0; j < e; ++j) {
      h.coeffs[j] = FieldElement{static_cast<std::uint32_t>(c % q)};
      c /= q;
    }
    h.coeffs[e] = FieldSpec::one();
    out.push_back(std::move(h));
  }
  return out;
}

inline std::vector<Polynomial> canonical_denominators(const FieldSpec& field, unsigned d) {
  std::vector<Polynomial> out;
  for (unsigned e = 0; e <= d; ++e) {
    auto part = monic_polynomials(field, e);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

namespace detail {

// Numerators g for denominator h: if deg h == d every nonzero g of degree
// <= d qualifies by degree; otherwise g must have degree exactly d.
template <class Visit>
void rational_numerators(const FieldSpec& field, unsigned d, const Polynomial& den, Visit&& visit) {
  const std::uint32_t q = field.q();
  const bool den_full = den.degree() == static_cast<int>(d);
  const std::uint64_t n = ipow_u64(q, d + 1);
  Polynomial g;
  g.coeffs.assign(d + 1, FieldSpec::zero());
  for (std::uint64_t code = 0; code < n; ++code) {
    std::uint64_t c = code;
    for (unsigned j = 0; j <= d; ++j) {
      g.coeffs[j] = FieldElement{static_cast<std::uint32_t>(c % q)};
      c /= q;
    }
    if (g.is_zero()) continue;
    if (!den_full && g.coeffs[d].idx == 0) continue;
    if (!coprime(field, g, den)) continue;
    visit(static_cast<const Polynomial&>(g), den);
  }
}

}  // namespace detail

/// Calls visit(num, den) once per degree-d rational map.
template <class Visit>
void enumerate_rational_maps(const FieldSpec& field, unsigned d, Visit&& visit) {
  if (d == 0) throw std::invalid_argument("enumerate_rational_maps: degree must be >= 1");
  for (const auto& den : canonical_denominators(field, d)) detail::rational_numerators(field, d, den, visit);
}

inline CensusRecord census_rational(const FieldSpec& field, unsigned d, CensusOptions opts = {}) {
  if (d == 0) throw std::invalid_argument("census_rational: degree must be >= 1");
  const auto dens = canonical_denominators(field, d);
  CensusRecord rec;
  rec.q = field.q();
  rec.d = d;
  rec.family = Family::rational;
  rec.total_maps = family_size(rec.q, d, Family::rational);
  rec.mode = CensusMode::full;
  rec.modulus = field.modulus();
  struct Partial {
    CycleSpectrum spectrum;
    std::uint64_t maps = 0;
    Partial& operator+=(const Partial& o) {
      spectrum += o.spectrum;
      maps += o.maps;
      return *this;
    }
  };
  Partial total = parallel_reduce_blocks<Partial>(
      dens.size(), opts.threads, [] { return Partial{}; },
      [&](std::uint64_t b, Partial& acc) {
        std::vector<std::uint32_t> images(std::size_t{field.q()} + 1);
        CycleWalker walker;
        detail::rational_numerators(field, d, dens[b], [&](const Polynomial& g, const Polynomial& h) {
          fill_rational_images(field, g, h, images);
          walker.accumulate(images, acc.spectrum);
          ++acc.maps;
        });
      });
  if (total.maps != rec.total_maps)
    throw std::logic_error("census_rational: enumerated " + std::to_string(total.maps) + " maps, expected " +
                           std::to_string(rec.total_maps));
  rec.aggregate = std::move(total.spectrum);
  return rec;
}

// ---------------------------------------------------------------------------

struct CensusStats {
  struct Entry {
    std::size_t k = 0;
    Rational average;  // P(q,d,k) or R(q,d,k)
    double average_float = 0.0;
  };
  std::vector<Entry> per_length;  // nonzero lengths only
  Rational mean_components;       // P(q,d) or R(q,d)
  double mean_components_float = 0.0;

  /// Average count for length k (zero when absent).
  Rational average(std::size_t k) const {
    for (const auto& e : per_length)
      if (e.k == k) return e.average;
    return 0;
  }
};

inline CensusStats record_stats(const CensusRecord& rec) {
  if (rec.total_maps == 0) throw std::invalid_argument("record_stats: empty record");
  CensusStats stats;
  stats.mean_components = 0;
  for (auto [k, count] : rec.aggregate.nonzero()) {
    Rational avg(BigInt(count), BigInt(rec.total_maps));
    stats.mean_components += avg;
    stats.per_length.push_back({k, avg, to_double(avg)});
  }
  stats.mean_components_float = to_double(stats.mean_components);
  return stats;
}

}  // namespace cyclecensus
