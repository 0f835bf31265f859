// Prints the aggregate cycle spectrum of all quadratics over F_q.
//
//   quadratic_spectrum 25

#include "cyclecensus/census.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  using namespace cyclecensus;
  const std::uint32_t q = argc > 1 ? static_cast<std::uint32_t>(std::strtoul(argv[1], nullptr, 10)) : 25;
  const FieldSpec field = FieldSpec::of_order(q);
  const CensusRecord rec = census_poly(field, 2, CensusMode::reduced);
  const CensusStats stats = record_stats(rec);
  std::cout << "q=" << q << " maps=" << rec.total_maps << " mode=" << to_string(rec.mode) << "\n";
  for (const auto& e : stats.per_length)
    std::cout << "k=" << e.k << " total=" << rec.aggregate[e.k] << " mean=" << to_fraction_string(e.average) << "\n";
  std::cout << "mean components " << format_double(stats.mean_components) << "\n";
}
