#pragma once

// Random-mapping baselines and comparisons of census data against the
// interpolation predictions.

#include "cyclecensus/census.hpp"
#include "cyclecensus/dynamics.hpp"
#include "cyclecensus/exact.hpp"
#include "cyclecensus/model.hpp"
#include "cyclecensus/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclecensus {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct KruskalValue {
  std::uint64_t n = 0;
  Rational exact_sum;
  double asymptotic = 0.0;  // (1/2) ln n + (ln 2 + gamma) / 2
  double gap = 0.0;         // exact_sum - asymptotic
};

/// Expected component count of a uniform random self-map of an n-set:
/// sum_{k=1..n} n(n-1)...(n-k+1) / (k n^k).
inline KruskalValue kruskal_exact(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("kruskal_exact: n must be >= 1");
  // Over the common denominator n^n * lcm(1..n); term_k = n!/(n-k)! * n^(n-k).
  BigInt lcm = 1;
  for (std::uint64_t i = 2; i <= n; ++i) lcm = boost::multiprecision::lcm(lcm, BigInt(i));
  const BigInt nn = ipow(BigInt(n), n);
  BigInt term = nn;
  BigInt acc = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    acc += term * (lcm / k);
    term = term / n * (n - k);
  }
  KruskalValue v;
  v.n = n;
  v.exact_sum = Rational(acc, nn * lcm);
  v.asymptotic = 0.5 * std::log(static_cast<double>(n)) + (std::log(2.0) + kEulerGamma) / 2.0;
  v.gap = to_double(v.exact_sum) - v.asymptotic;
  return v;
}

struct MonteCarloResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kMonteCarloBlock = 4096;

/// Sample mean and standard error of the component count of uniform random
/// maps on n points. Block b of kMonteCarloBlock samples draws from a
/// mt19937_64 stream keyed by (seed, b), so results do not depend on threads.
inline MonteCarloResult random_map_mc(std::uint32_t n, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1) {
  if (n < 1 || samples < 1) throw std::invalid_argument("random_map_mc: n and samples must be >= 1");
  struct Partial {
    std::uint64_t sum = 0, sum_sq = 0;
    Partial& operator+=(const Partial& o) {
      sum += o.sum;
      sum_sq += o.sum_sq;
      return *this;
    }
  };
  const std::uint64_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  const Partial total = parallel_reduce_blocks<Partial>(
      blocks, threads, [] { return Partial{}; },
      [&](std::uint64_t b, Partial& acc) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32U)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::uint32_t> draw(0, n - 1);
        std::vector<std::uint32_t> images(n);
        CycleWalker walker;
        const std::uint64_t hi = std::min(samples, (b + 1) * kMonteCarloBlock);
        for (std::uint64_t s = b * kMonteCarloBlock; s < hi; ++s) {
          for (auto& v : images) v = draw(rng);
          const std::uint64_t c = walker.count_components(images);
          acc.sum += c;
          acc.sum_sq += c * c;
        }
      });
  MonteCarloResult r;
  r.samples = samples;
  const double N = static_cast<double>(samples);
  r.mean = static_cast<double>(total.sum) / N;
  if (samples > 1) {
    // Exact integer moments keep the variance independent of summation order.
    const Rational var = (Rational(BigInt(total.sum_sq)) - Rational(BigInt(total.sum)) * BigInt(total.sum) / BigInt(samples)) /
                         BigInt(samples - 1);
    r.standard_error = std::sqrt(to_double(var) / N);
  }
  return r;
}

/// q(q-1)...(q-k+1) / (k q^k): the predicted mean number of k-cycles (zero for k > q).
inline Rational interpolation_mean(std::uint32_t q, unsigned k) {
  return Rational(falling_factorial(q, k), BigInt(k) * ipow(BigInt(q), k));
}

/// Predicted total G(q,d,k) = (q^(d+1) - q^d) q(q-1)...(q-k+1) / (k q^k).
inline Rational g_predicted(std::uint32_t q, unsigned d, unsigned k) {
  if (k < 1 || k > q) throw std::invalid_argument("g_predicted: k must lie in [1, q]");
  return Rational(ipow(BigInt(q), d + 1) - ipow(BigInt(q), d)) * interpolation_mean(q, k);
}

/// Predicted mean k-cycle count on P^1: (q+1)q...(q-k+2) / (k (q+1)^k).
inline Rational rational_prediction(std::uint32_t q, unsigned k) { return interpolation_mean(q + 1, k); }

inline Rational predicted_mean(std::uint32_t q, unsigned k, Family family) {
  return family == Family::polynomial ? interpolation_mean(q, k) : rational_prediction(q, k);
}

/// Largest sweep bound for degree d (the reference set of prime powers), 0 if none.
inline std::uint32_t reference_q_max(unsigned d) {
  if (d == 2) return 241;
  if (d == 3) return 73;
  return 0;
}

struct CkEntry {
  unsigned k = 0;
  Rational value;             // max over q of q * |P(q,d,k) - g(q,k)|
  std::uint32_t argmax_q = 0;
  bool observed = false;      // some record has a k-cycle
  std::uint32_t first_q = 0;  // smallest q with a k-cycle, 0 if none
};

struct CkTable {
  unsigned d = 0;
  std::vector<std::uint32_t> q_values;  // records used, ascending
  bool provisional = true;              // records do not cover the reference sweep
  std::vector<CkEntry> entries;         // k = 1..k_max

  const CkEntry& at(unsigned k) const {
    for (const auto& e : entries)
      if (e.k == k) return e;
    throw std::out_of_range("CkTable: no entry for k=" + std::to_string(k));
  }
};

namespace detail {

inline std::vector<const CensusRecord*> sorted_records(std::span<const CensusRecord> records) {
  std::vector<const CensusRecord*> out;
  for (const auto& r : records) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->q < b->q; });
  return out;
}

}  // namespace detail

inline CkTable ck_table(std::span<const CensusRecord> records, unsigned k_max) {
  if (records.empty()) throw std::invalid_argument("ck_table: no census records");
  const auto sorted = detail::sorted_records(records);
  CkTable t;
  t.d = sorted.front()->d;
  for (auto* r : sorted) {
    if (r->d != t.d || r->family != Family::polynomial) throw std::invalid_argument("ck_table: records must be polynomial with one degree");
    t.q_values.push_back(r->q);
  }
  const std::uint32_t ref = reference_q_max(t.d);
  if (ref != 0) {
    const auto expected = prime_powers_in_range(2, ref);
    t.provisional = !std::includes(t.q_values.begin(), t.q_values.end(), expected.begin(), expected.end());
  }
  for (unsigned k = 1; k <= k_max; ++k) {
    CkEntry e;
    e.k = k;
    e.value = 0;
    for (auto* r : sorted) {
      const Rational observed(BigInt(r->aggregate[k]), BigInt(r->total_maps));
      const Rational dev = abs_value(observed - interpolation_mean(r->q, k)) * BigInt(r->q);
      if (dev > e.value) {
        e.value = dev;
        e.argmax_q = r->q;
      }
      if (r->aggregate[k] != 0 && !e.observed) {
        e.observed = true;
        e.first_q = r->q;
      }
    }
    t.entries.push_back(std::move(e));
  }
  return t;
}

struct ConjectureRow {
  std::uint32_t q = 0;
  Rational observed;   // P(q,d,k) or R(q,d,k)
  Rational predicted;
  Rational deviation_times_q;  // (observed - predicted) * q
};

inline std::vector<ConjectureRow> conjecture_check(std::span<const CensusRecord> records, unsigned d, unsigned k, Family family) {
  std::vector<ConjectureRow> rows;
  for (auto* r : detail::sorted_records(records)) {
    if (r->d != d || r->family != family) continue;
    ConjectureRow row;
    row.q = r->q;
    row.observed = Rational(BigInt(r->aggregate[k]), BigInt(r->total_maps));
    row.predicted = predicted_mean(r->q, k, family);
    row.deviation_times_q = (row.observed - row.predicted) * BigInt(r->q);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct MeanComponentsRow {
  std::uint32_t q = 0;
  Rational mean;      // P(q,d) or R(q,d)
  Rational kruskal;   // K(q), or K(q+1) for rational maps
  Rational gap;
  double running_max_abs_gap = 0.0;
};

inline std::vector<MeanComponentsRow> mean_components(std::span<const CensusRecord> records) {
  std::vector<MeanComponentsRow> rows;
  double running = 0.0;
  for (auto* r : detail::sorted_records(records)) {
    MeanComponentsRow row;
    row.q = r->q;
    row.mean = Rational(BigInt(r->aggregate.total_cycles()), BigInt(r->total_maps));
    row.kruskal = kruskal_exact(domain_size(r->q, r->family)).exact_sum;
    row.gap = row.mean - row.kruskal;
    running = std::max(running, std::abs(to_double(row.gap)));
    row.running_max_abs_gap = running;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CycleSupportRow {
  unsigned k = 0;
  std::uint32_t first_q = 0;   // 0 when absent everywhere
  BigInt total;                 // summed over all records
  std::vector<std::uint32_t> present_q;
};

inline std::vector<CycleSupportRow> cycle_support(std::span<const CensusRecord> records, unsigned k_max) {
  const auto sorted = detail::sorted_records(records);
  std::vector<CycleSupportRow> rows;
  for (unsigned k = 1; k <= k_max; ++k) {
    CycleSupportRow row;
    row.k = k;
    row.total = 0;
    for (auto* r : sorted) {
      if (r->aggregate[k] == 0) continue;
      if (row.first_q == 0) row.first_q = r->q;
      row.total += r->aggregate[k];
      row.present_q.push_back(r->q);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ResidualRow {
  std::uint32_t q = 0;
  unsigned k = 0;
  Rational scaled_residual;
};

struct ResidualSummary {
  std::vector<ResidualRow> rows;
  Rational max_abs;
  std::uint32_t argmax_q = 0;
  unsigned argmax_k = 0;
  // Same maximum restricted to lengths that occur in the census.
  Rational max_abs_observed;
  std::uint32_t argmax_observed_q = 0;
  unsigned argmax_observed_k = 0;
};

/// Scaled correlation residuals |E[XY] - E[X]E[Y]| q^(2k-d) from census
/// records (the census path of the model), for q <= q_max and 1 <= k <= m.
inline ResidualSummary heuristic_residuals(std::span<const CensusRecord> records, std::uint32_t q_max) {
  ResidualSummary s;
  s.max_abs = 0;
  s.max_abs_observed = 0;
  for (auto* r : detail::sorted_records(records)) {
    if (r->q > q_max) continue;
    const FieldSpec field = FieldSpec::with_modulus(prime_power_decompose(r->q)->p, r->modulus);
    const std::uint32_t m = domain_size(r->q, r->family);
    ExpectationRequest req;
    req.census = r;
    req.path = ExpectationPath::census;
    for (unsigned k = 1; k <= m; ++k) {
      const ModelReport rep = expectations(field, r->d, k, r->family, req);
      const Rational mag = abs_value(rep.scaled_residual);
      if (mag > s.max_abs) {
        s.max_abs = mag;
        s.argmax_q = r->q;
        s.argmax_k = k;
      }
      if (r->aggregate[k] != 0 && mag > s.max_abs_observed) {
        s.max_abs_observed = mag;
        s.argmax_observed_q = r->q;
        s.argmax_observed_k = k;
      }
      s.rows.push_back({r->q, k, rep.scaled_residual});
    }
  }
  return s;
}

}  // namespace cyclecensus
