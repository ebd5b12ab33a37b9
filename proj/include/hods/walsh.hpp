#pragma once

// Dyadic Walsh functions and exact Walsh coefficients.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "hods/duality.hpp"
#include "hods/error.hpp"
#include "hods/points.hpp"
#include "hods/rational.hpp"

namespace hods {

/// Finest dyadic grid (2^-20) used by the cell-sum integrals.
inline constexpr unsigned kMaxWalshResolution = 20;

/// Digits x_1..x_W of numerator/2^W moved to bits 0..W-1.
constexpr std::uint64_t reverse_digits(std::uint64_t numerator, unsigned precision) {
  if (precision == 0) return 0;
  std::uint64_t r = 0;
  for (unsigned i = 0; i < precision; ++i) r |= ((numerator >> (precision - 1 - i)) & 1U) << i;
  return r;
}

/// wal_k(x) = (-1)^(x_1 kappa_0 + x_2 kappa_1 + ...).
inline int wal(std::uint64_t k, const DyadicValue& x) {
  return (std::popcount(reverse_digits(x.numerator, x.precision) & k) & 1) ? -1 : 1;
}

inline int wal(std::span<const std::uint64_t> k, std::span<const DyadicValue> x) {
  if (k.size() != x.size()) throw InvalidInput("Walsh index and point dimension differ");
  int sign = 1;
  for (std::size_t j = 0; j < k.size(); ++j) sign *= wal(k[j], x[j]);
  return sign;
}

/// Exact integral of wal_k * wal_l over [0,1) as a cell sum at the coarsest
/// grid on which both are constant.
inline Rational walsh_inner_product(std::uint64_t k, std::uint64_t l) {
  const unsigned r = std::max(mu1(k), mu1(l));
  if (r > kMaxWalshResolution) throw BudgetExceeded("Walsh index above 2^20");
  std::int64_t total = 0;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << r); ++c) {
    const DyadicValue cell{c, r};
    total += wal(k, cell) * wal(l, cell);
  }
  return Rational(BigInt(total), BigInt(1) << r);
}

/// (1/2^m) sum_n wal_k(x_n) over the net of g, accumulated as an integer.
inline Rational character_sum(const GeneratingMatrixSet& g, std::span<const std::uint64_t> k) {
  if (k.size() != g.dimension()) throw InvalidInput("character_sum index dimension mismatch");
  const PointSet net = net_points(g);
  std::vector<std::uint64_t> rk(k.size());
  std::int64_t total = 0;
  for (std::size_t n = 0; n < net.size(); ++n) {
    int parity = 0;
    for (std::size_t j = 0; j < k.size(); ++j)
      parity ^= std::popcount(reverse_digits(net.numerator(n, j), net.precision()) & k[j]) & 1;
    total += parity ? -1 : 1;
  }
  return Rational(BigInt(total), BigInt(net.size()));
}

/// Integral of theta * wal_l(theta) over [0,1): 1/2 for l = 0,
/// -2^(-a-1) for l = 2^(a-1), and 0 otherwise.
inline Rational theta_walsh_coefficient(std::uint64_t l) {
  if (l == 0) return Rational(1, 2);
  if (std::has_single_bit(l)) return -Rational(BigInt(1), BigInt(1) << (mu1(l) + 1));
  return Rational(0);
}

/// Walsh coefficient of the local discrepancy function at index l:
/// (1/N) sum_n prod_j I(x_nj, l_j) - prod_j T(l_j), where
/// I(x, l) = integral over theta > x of wal_l is summed over the 2^-R grid.
inline Rational delta_walsh_coefficient(const PointSet& p, std::span<const std::uint64_t> l) {
  detail::require_unscaled(p, "delta_walsh_coefficient");
  const std::size_t s = p.dimension();
  if (l.size() != s) throw InvalidInput("Walsh index dimension does not match the point set");
  unsigned r = p.precision();
  for (auto v : l) r = std::max(r, mu1(v));
  if (r > kMaxWalshResolution)
    throw BudgetExceeded("delta_walsh_coefficient needs a 2^-" + std::to_string(r) + " grid; limit is 2^-20");

  // tail[j][c] = sum_{c' >= c} wal_{l_j}(c' 2^-R).
  const std::uint64_t cells = std::uint64_t{1} << r;
  std::vector<std::vector<std::int64_t>> tail(s, std::vector<std::int64_t>(cells + 1, 0));
  for (std::size_t j = 0; j < s; ++j)
    for (std::uint64_t c = cells; c-- > 0;) tail[j][c] = tail[j][c + 1] + wal(l[j], DyadicValue{c, r});

  const unsigned up = r - p.precision();
  BigInt sum = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    BigInt term = 1;
    for (std::size_t j = 0; j < s; ++j) term *= tail[j][p.numerator(n, j) << up];
    sum += term;
  }
  Rational volume = 1;
  for (auto v : l) volume *= theta_walsh_coefficient(v);
  return Rational(sum, BigInt(p.size()) * (BigInt(1) << (r * s))) - volume;
}

}  // namespace hods
