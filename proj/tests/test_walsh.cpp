#include <gtest/gtest.h>

#include <random>

#include "hods/walsh.hpp"
#include "oracles.hpp"

namespace {

using hods::DyadicValue;
using hods::PointSet;
using hods::Rational;

TEST(Wal, Examples) {
  EXPECT_EQ(hods::wal(0, DyadicValue{3, 2}), 1);
  EXPECT_EQ(hods::wal(1, DyadicValue{1, 1}), -1);
  EXPECT_EQ(hods::wal(3, DyadicValue{1, 2}), -1);
  const std::vector<std::uint64_t> k{1, 3};
  const std::vector<DyadicValue> x{DyadicValue{1, 1}, DyadicValue{1, 2}};
  EXPECT_EQ(hods::wal(k, x), 1);
  EXPECT_THROW(hods::wal(std::vector<std::uint64_t>{1}, x), hods::InvalidInput);
}

TEST(Wal, AgreesWithDigitDefinition) {
  for (std::uint64_t k = 0; k < 128; ++k)
    for (std::uint64_t c = 0; c < 256; ++c) {
      const DyadicValue x{c, 8};
      EXPECT_EQ(hods::wal(k, x), oracle::walsh(k, x.exact()));
    }
}

TEST(Wal, Orthonormal) {
  for (std::uint64_t k = 0; k < 64; ++k)
    for (std::uint64_t l = 0; l < 64; ++l) EXPECT_EQ(hods::walsh_inner_product(k, l), Rational(k == l ? 1 : 0));
}

TEST(CharacterSum, Examples) {
  const auto vdc = hods::niederreiter_set(1, 2, 1);
  EXPECT_EQ(hods::character_sum(vdc, std::vector<std::uint64_t>{0}), Rational(1));
  EXPECT_EQ(hods::character_sum(vdc, std::vector<std::uint64_t>{1}), Rational(0));
  EXPECT_EQ(hods::character_sum(vdc, std::vector<std::uint64_t>{2}), Rational(1));
}

TEST(CharacterSum, IndicatorOfTheDualSet) {
  const auto g = hods::interlaced_niederreiter(2, 6, 3);
  for (std::uint64_t a = 0; a < 64; ++a)
    for (std::uint64_t b = 0; b < 64; ++b) {
      const std::vector<std::uint64_t> k{a, b};
      EXPECT_EQ(hods::character_sum(g, k), Rational(oracle::in_dual(g, k) ? 1 : 0));
    }
}

TEST(ThetaCoefficient, ClosedForms) {
  EXPECT_EQ(hods::theta_walsh_coefficient(0), Rational(1, 2));
  EXPECT_EQ(hods::theta_walsh_coefficient(1), Rational(-1, 4));
  EXPECT_EQ(hods::theta_walsh_coefficient(4), Rational(-1, 16));
  EXPECT_EQ(hods::theta_walsh_coefficient(3), Rational(0));
  // Direct cell integration of theta * wal_l on a fine grid.
  for (std::uint64_t l = 0; l < 32; ++l) {
    const unsigned r = 6;
    Rational sum = 0;
    for (std::uint64_t c = 0; c < (1U << r); ++c) {
      const Rational lo(hods::BigInt(c), hods::BigInt(1) << r);
      const Rational hi(hods::BigInt(c + 1), hods::BigInt(1) << r);
      sum += oracle::walsh(l, lo) * (hi * hi - lo * lo) / 2;
    }
    EXPECT_EQ(hods::theta_walsh_coefficient(l), sum) << l;
  }
}

PointSet singleton(std::uint64_t num, unsigned w) {
  PointSet p(1, w, hods::Provenance::net);
  p.push_back(std::vector<std::uint64_t>{num});
  return p;
}

TEST(DeltaCoefficient, SingletonAtOrigin) {
  const PointSet p = singleton(0, 1);
  EXPECT_EQ(hods::delta_walsh_coefficient(p, std::vector<std::uint64_t>{0}), Rational(1, 2));
  EXPECT_EQ(hods::delta_walsh_coefficient(p, std::vector<std::uint64_t>{1}), Rational(1, 4));
}

TEST(DeltaCoefficient, MatchesMidpointOracle) {
  const PointSet p1 = hods::net_points(hods::interlaced_niederreiter(1, 6, 3));
  for (std::uint64_t l = 0; l < 16; ++l) {
    const std::vector<std::uint64_t> idx{l};
    const Rational got = hods::delta_walsh_coefficient(p1, idx);
    const unsigned r = 10;
    const Rational want = oracle::delta_coefficient_by_midpoints(p1, idx, r);
    EXPECT_LE(boost::multiprecision::abs(got - want), Rational(hods::BigInt(1), hods::BigInt(1) << r)) << l;
  }
  const PointSet p2 = hods::net_points(hods::interlaced_niederreiter(2, 4, 2));
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b) {
      const std::vector<std::uint64_t> idx{a, b};
      const unsigned r = 6;
      const Rational got = hods::delta_walsh_coefficient(p2, idx);
      const Rational want = oracle::delta_coefficient_by_midpoints(p2, idx, r);
      EXPECT_LE(boost::multiprecision::abs(got - want), Rational(hods::BigInt(1), hods::BigInt(1) << r));
    }
}

TEST(DeltaCoefficient, ParsevalAgainstL2) {
  // sum_l delta_hat(l)^2 over l < 2^R equals the integral of the projection
  // of delta onto functions constant on 2^-R cells; it increases to L2^2.
  const PointSet p = hods::net_points(hods::interlaced_niederreiter(1, 4, 2));
  const unsigned r = 10;
  Rational energy = 0;
  for (std::uint64_t l = 0; l < (1U << r); ++l) {
    const Rational c = hods::delta_walsh_coefficient(p, std::vector<std::uint64_t>{l});
    energy += c * c;
  }
  const double l2 = oracle::l2_by_grid(p, 16);
  EXPECT_LE(hods::to_double(energy), l2 * l2 + 1e-12);
  EXPECT_NEAR(hods::to_double(energy), l2 * l2, 1e-5);
}

TEST(DeltaCoefficient, Errors) {
  const PointSet p = singleton(0, 1);
  EXPECT_THROW(hods::delta_walsh_coefficient(p, std::vector<std::uint64_t>{std::uint64_t{1} << 21}),
               hods::BudgetExceeded);
  EXPECT_THROW(hods::delta_walsh_coefficient(p, std::vector<std::uint64_t>{0, 0}), hods::InvalidInput);
}

}  // namespace
