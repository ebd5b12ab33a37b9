// Prints the L2 discrepancy of order-1 and order-2 nets side by side, then
// the integration error for a smooth product integrand.

#include <cmath>
#include <cstdio>

#include "hods/hods.hpp"

int main() {
  std::printf("%3s %8s %14s %14s %14s\n", "m", "N", "L2 order1", "L2 order2", "m^(1/2)/N");
  for (std::size_t m = 2; m <= 12; ++m) {
    const double l1 = hods::l2_exact(hods::net_points(hods::niederreiter_set(2, 2 * m, m)));
    const double l2 = hods::l2_exact(hods::net_points(hods::interlaced_niederreiter(2, 2 * m, m)));
    std::printf("%3zu %8llu %14.6e %14.6e %14.6e\n", m, 1ULL << m, l1, l2, hods::thm2_bound(1ULL << m, 2, 2));
  }

  std::printf("\nintegral of x^2 - 1/3 + 1 over [0,1)\n%3s %14s %14s\n", "m", "err order1", "err order2");
  for (std::size_t m = 4; m <= 14; ++m) {
    const auto e1 = hods::qmc_integrate(hods::net_points(hods::niederreiter_set(1, 2 * m, m)),
                                        hods::TestFunction::product_quadratic);
    const auto e2 = hods::qmc_integrate(hods::net_points(hods::interlaced_niederreiter(1, 2 * m, m)),
                                        hods::TestFunction::product_quadratic);
    std::printf("%3zu %14.6e %14.6e\n", m, e1.abs_error, e2.abs_error);
  }
}
