#pragma once

// The consistent-set probability model.
//
// Sample space: all size-k consistent sets C (partial function graphs) over a
// domain of size m (m = q for polynomials, q + 1 on P^1). X(C) = 1 iff C is a
// single k-cycle; Y(C) = number of degree-d maps satisfying every pair of C.
// Summing X*Y over all sets counts, over the family, the k-cycles of each
// map, so E[XY] * |sets| equals the census total for length k.

#include "cyclecensus/census.hpp"
#include "cyclecensus/exact.hpp"
#include "cyclecensus/field.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclecensus {

struct MapPair {
  std::uint32_t abscissa = 0;
  std::uint32_t ordinate = 0;

  friend constexpr auto operator<=>(MapPair, MapPair) = default;
};

class ConsistentSet {
 public:
  ConsistentSet() = default;
  /// Validates that abscissas are pairwise distinct; stores pairs sorted by abscissa.
  explicit ConsistentSet(std::vector<MapPair> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    for (std::size_t i = 1; i < pairs_.size(); ++i)
      if (pairs_[i].abscissa == pairs_[i - 1].abscissa) throw std::invalid_argument("inconsistent set: repeated abscissa " + std::to_string(pairs_[i].abscissa));
  }

  std::size_t size() const noexcept { return pairs_.size(); }
  const std::vector<MapPair>& pairs() const noexcept { return pairs_; }

 private:
  friend class ConsistentSetEnumerator;
  std::vector<MapPair> pairs_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, BigInt required)
      : std::runtime_error(what + " (would require " + required.str() + ")"), required_(std::move(required)) {}
  const BigInt& required() const noexcept { return required_; }

 private:
  BigInt required_;
};

struct EnumerationBudget {
  std::uint64_t max_operations = 400'000'000;
};

/// m^k * binomial(m, k).
inline BigInt consistent_set_count(std::uint64_t m, std::uint64_t k) {
  return ipow(BigInt(m), k) * binomial(static_cast<std::int64_t>(m), static_cast<std::int64_t>(k));
}

class ConsistentSetEnumerator {
 public:
  template <class Visit>
  static void run(std::uint32_t m, std::uint32_t k, Visit&& visit) {
    ConsistentSet set;
    set.pairs_.resize(k);
    std::vector<std::uint32_t> abscissas(k);
    for (std::uint32_t i = 0; i < k; ++i) abscissas[i] = i;
    while (true) {
      for (std::uint32_t i = 0; i < k; ++i) set.pairs_[i] = {abscissas[i], 0};
      while (true) {
        visit(static_cast<const ConsistentSet&>(set));
        std::uint32_t i = 0;
        while (i < k && ++set.pairs_[i].ordinate == m) set.pairs_[i++].ordinate = 0;
        if (i == k) break;
      }
      // Next k-subset of {0..m-1} in lexicographic order.
      std::int64_t pos = static_cast<std::int64_t>(k) - 1;
      while (pos >= 0 && abscissas[static_cast<std::size_t>(pos)] == m - k + static_cast<std::uint32_t>(pos)) --pos;
      if (pos < 0) break;
      ++abscissas[static_cast<std::size_t>(pos)];
      for (std::size_t j = static_cast<std::size_t>(pos) + 1; j < k; ++j) abscissas[j] = abscissas[j - 1] + 1;
    }
  }
};

/// Visits every size-k consistent set over an m-point domain exactly once.
template <class Visit>
void enum_consistent(std::uint32_t m, std::uint32_t k, Visit&& visit, EnumerationBudget budget = {}) {
  if (k > m) throw std::invalid_argument("enum_consistent: k exceeds domain size");
  const BigInt count = consistent_set_count(m, k);
  if (count > budget.max_operations) throw BudgetExceeded("enum_consistent: m=" + std::to_string(m) + " k=" + std::to_string(k) + " exceeds budget", count);
  ConsistentSetEnumerator::run(m, k, std::forward<Visit>(visit));
}

/// True iff the pairs form one directed cycle through all k abscissas.
inline bool is_cycle(const ConsistentSet& set) {
  const auto& pairs = set.pairs();
  const std::size_t k = pairs.size();
  if (k == 0) return false;
  auto image = [&](std::uint32_t a) -> std::optional<std::uint32_t> {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), MapPair{a, 0},
                               [](MapPair x, MapPair y) { return x.abscissa < y.abscissa; });
    if (it == pairs.end() || it->abscissa != a) return std::nullopt;
    return it->ordinate;
  };
  const std::uint32_t start = pairs.front().abscissa;
  std::uint32_t v = start;
  for (std::size_t step = 1; step <= k; ++step) {
    const auto next = image(v);
    if (!next) return false;
    v = *next;
    if (v == start) return step == k;
  }
  return false;
}

/// Images of every map in the degree-d family, stored densely for repeated
/// satisfaction queries.
class FamilyTables {
 public:
  static FamilyTables build(const FieldSpec& field, unsigned d, Family family, EnumerationBudget budget = {}) {
    FamilyTables t;
    t.m_ = domain_size(field.q(), family);
    const std::uint64_t maps = family_size(field.q(), d, family);
    if (BigInt(maps) * t.m_ > budget.max_operations)
      throw BudgetExceeded("FamilyTables: family too large", BigInt(maps) * t.m_);
    t.images_.reserve(maps * t.m_);
    std::vector<std::uint32_t> images(t.m_);
    if (family == Family::polynomial) {
      enumerate_polynomials(field, d, [&](const Polynomial& f) {
        fill_polynomial_images(field, f.coeffs, images);
        t.images_.insert(t.images_.end(), images.begin(), images.end());
      });
    } else {
      enumerate_rational_maps(field, d, [&](const Polynomial& g, const Polynomial& h) {
        fill_rational_images(field, g, h, images);
        t.images_.insert(t.images_.end(), images.begin(), images.end());
      });
    }
    t.count_ = maps;
    return t;
  }

  std::uint64_t map_count() const noexcept { return count_; }
  std::uint32_t domain() const noexcept { return m_; }

  std::uint64_t count_satisfying(const ConsistentSet& set) const {
    std::uint64_t n = 0;
    for (std::uint64_t f = 0; f < count_; ++f) {
      const std::uint32_t* row = images_.data() + f * m_;
      bool ok = true;
      for (auto [a, b] : set.pairs())
        if (row[a] != b) {
          ok = false;
          break;
        }
      if (ok) ++n;
    }
    return n;
  }

 private:
  std::uint32_t m_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint32_t> images_;
};

enum class SatisfyMethod { automatic, brute_force };

/// Number of degree-d family members f with f(a) = b for all (a, b) in the set.
/// For polynomials with k <= d the Lagrange count q^(d+1-k) - q^(d-k) is
/// returned unless brute force is requested.
inline std::uint64_t count_satisfying_maps(const FieldSpec& field, unsigned d, const ConsistentSet& set, Family family,
                                           SatisfyMethod method = SatisfyMethod::automatic, EnumerationBudget budget = {}) {
  const std::uint32_t m = domain_size(field.q(), family);
  for (auto [a, b] : set.pairs())
    if (a >= m || b >= m) throw std::out_of_range("count_satisfying_maps: pair outside domain");
  const std::size_t k = set.size();
  if (family == Family::polynomial && method == SatisfyMethod::automatic && k <= d)
    return ipow_u64(field.q(), static_cast<unsigned>(d + 1 - k)) - ipow_u64(field.q(), static_cast<unsigned>(d - k));
  return FamilyTables::build(field, d, family, budget).count_satisfying(set);
}

/// E[X] = (k-1)! / m^k.
inline Rational expected_x(std::uint32_t q, unsigned k, Family family) {
  const BigInt m = domain_size(q, family);
  return Rational(factorial(static_cast<std::int64_t>(k) - 1), ipow(m, k));
}

/// E[Y] = q^(d+1-k) - q^(d-k) for polynomials; (q^(2d+1) - q^(2d-1)) / (q+1)^k for rational maps.
inline Rational expected_y(std::uint32_t q, unsigned d, unsigned k, Family family) {
  if (family == Family::polynomial) {
    const auto dk = static_cast<std::int64_t>(d) - static_cast<std::int64_t>(k);
    return rational_pow(BigInt(q), dk + 1) - rational_pow(BigInt(q), dk);
  }
  return Rational(BigInt(family_size(q, d, family)), ipow(BigInt(q) + 1, k));
}

/// Total k-cycle count forced by exact noncorrelation:
/// (q^(d+1) - q^d) q(q-1)...(q-k+1) / (k q^k). Zero for k > q.
inline Rational uncorrelated_prediction(std::uint32_t q, unsigned d, unsigned k) {
  if (k == 0) throw std::invalid_argument("uncorrelated_prediction: k must be positive");
  const BigInt maps = ipow(BigInt(q), d + 1) - ipow(BigInt(q), d);
  return Rational(maps * falling_factorial(q, k), BigInt(k) * ipow(BigInt(q), k));
}

enum class ExpectationPath { enumeration, census, both };

inline std::string to_string(ExpectationPath p) {
  switch (p) {
    case ExpectationPath::enumeration: return "enumeration";
    case ExpectationPath::census: return "census";
    case ExpectationPath::both: return "both";
  }
  return "?";
}

struct ModelReport {
  std::uint32_t q = 0;
  unsigned d = 0;
  unsigned k = 0;
  Family family = Family::polynomial;
  BigInt count_sets;
  Rational e_x, e_y, e_xy;
  Rational residual;         // e_xy - e_x * e_y
  Rational scaled_residual;  // residual * q^(2k-d), or q^(2k-2d) for rational maps
  ExpectationPath path = ExpectationPath::enumeration;
  // Enumeration oracles for the closed forms, when requested and computed.
  std::optional<Rational> e_x_enumerated, e_y_enumerated;
};

struct ExpectationRequest {
  const CensusRecord* census = nullptr;  // enables the census path
  ExpectationPath path = ExpectationPath::enumeration;
  bool verify_moments = false;  // also enumerate E[X] and E[Y]
  EnumerationBudget budget;
};

inline std::int64_t residual_exponent(unsigned d, unsigned k, Family family) {
  const auto kk = static_cast<std::int64_t>(k), dd = static_cast<std::int64_t>(d);
  return family == Family::polynomial ? 2 * kk - dd : 2 * kk - 2 * dd;
}

namespace detail {

struct EnumeratedMoments {
  BigInt sum_xy = 0, cycles = 0, sum_y = 0;
};

// Literal enumeration over every consistent set; Y is only evaluated on
// cycles unless all moments are requested.
inline EnumeratedMoments enumerate_moments(const FieldSpec& field, unsigned d, unsigned k, Family family, bool all_y,
                                           EnumerationBudget budget) {
  const std::uint32_t m = domain_size(field.q(), family);
  const BigInt sets = consistent_set_count(m, k);
  const BigInt maps = family_size(field.q(), d, family);
  const BigInt y_evaluations = all_y ? sets : BigInt(falling_factorial(m, k) / k);
  const BigInt ops = sets * k + y_evaluations * maps * k;
  if (ops > budget.max_operations)
    throw BudgetExceeded("expectations: enumeration for q=" + std::to_string(field.q()) + " d=" + std::to_string(d) +
                             " k=" + std::to_string(k) + " exceeds budget",
                         ops);
  const FamilyTables tables = FamilyTables::build(field, d, family, budget);
  std::uint64_t xy = 0, cycles = 0, ysum = 0;
  enum_consistent(m, k, [&](const ConsistentSet& set) {
    const bool cycle = is_cycle(set);
    if (!cycle && !all_y) return;
    const std::uint64_t y = tables.count_satisfying(set);
    if (cycle) {
      ++cycles;
      xy += y;
    }
    ysum += y;
  }, EnumerationBudget{UINT64_MAX});
  return {BigInt(xy), BigInt(cycles), BigInt(ysum)};
}

}  // namespace detail

/// Exact E[X], E[Y], E[XY] and the correlation residual for one (q, d, k).
inline ModelReport expectations(const FieldSpec& field, unsigned d, unsigned k, Family family, const ExpectationRequest& req = {}) {
  const std::uint32_t q = field.q();
  const std::uint32_t m = domain_size(q, family);
  if (k < 1 || k > m) throw std::invalid_argument("expectations: k must lie in [1, domain size]");
  ModelReport r;
  r.q = q;
  r.d = d;
  r.k = k;
  r.family = family;
  r.count_sets = consistent_set_count(m, k);
  r.e_x = expected_x(q, k, family);
  r.e_y = expected_y(q, d, k, family);
  r.path = req.path;

  std::optional<Rational> via_census, via_enumeration;
  if (req.path != ExpectationPath::enumeration) {
    const CensusRecord* c = req.census;
    if (!c) throw std::invalid_argument("expectations: census path requested without a census record");
    if (c->q != q || c->d != d || c->family != family) throw std::invalid_argument("expectations: census record does not match (q, d, family)");
    via_census = Rational(BigInt(c->aggregate[k]), r.count_sets);
  }
  if (req.path != ExpectationPath::census || req.verify_moments) {
    const auto mom = detail::enumerate_moments(field, d, k, family, req.verify_moments, req.budget);
    if (req.path != ExpectationPath::census) via_enumeration = Rational(mom.sum_xy, r.count_sets);
    if (req.verify_moments) {
      r.e_x_enumerated = Rational(mom.cycles, r.count_sets);
      r.e_y_enumerated = Rational(mom.sum_y, r.count_sets);
    }
  }
  if (via_census && via_enumeration && *via_census != *via_enumeration)
    throw std::logic_error("expectations: census and enumeration disagree on E[XY] at q=" + std::to_string(q) +
                           " d=" + std::to_string(d) + " k=" + std::to_string(k));
  r.e_xy = via_enumeration ? *via_enumeration : *via_census;
  r.residual = r.e_xy - r.e_x * r.e_y;
  r.scaled_residual = r.residual * rational_pow(BigInt(q), residual_exponent(d, k, family));
  return r;
}

}  // namespace cyclecensus
