// Walks every degree-1 rational map on P^1(F_q) and prints its cycle spectrum.

#include "cyclecensus/census.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  using namespace cyclecensus;
  const std::uint32_t q = argc > 1 ? static_cast<std::uint32_t>(std::strtoul(argv[1], nullptr, 10)) : 3;
  const FieldSpec field = FieldSpec::of_order(q);
  enumerate_rational_maps(field, 1, [&](const Polynomial& num, const Polynomial& den) {
    const CycleSpectrum s = cycle_spectrum(rat_to_table(field, num, den));
    std::cout << "(" << num.coeffs[1].idx << "x+" << num.coeffs[0].idx << ")/(";
    if (den.degree() == 1) std::cout << "x+" << den.coeffs[0].idx; else std::cout << "1";
    std::cout << "):";
    for (auto [k, n] : s.nonzero()) std::cout << " " << n << "x" << k << "-cycle";
    std::cout << "\n";
  });
}
