// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hods/hods.hpp"
#include "oracles.hpp"

namespace {

using hods::BigInt;
using hods::GeneratingMatrixSet;
using hods::PointSet;
using hods::Rational;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome fail(std::string why) { return {false, std::move(why)}; }

// ---------------------------------------------------------------------------

Outcome construction_exactness() {
  for (std::size_t m = 1; m <= 24; ++m) {
    if (hods::niederreiter_matrix(1, m, m) != hods::BitMatrix::identity(m))
      return fail("C_1 is not the identity at size " + std::to_string(m));
    const hods::BitMatrix tall = hods::niederreiter_matrix(1, 2 * m, m);
    for (std::size_t r = 0; r < 2 * m; ++r)
      for (std::size_t c = 0; c < m; ++c)
        if (tall.get(r, c) != (r == c)) return fail("C_1 has a stray entry below the leading square");
  }
  const PointSet p = hods::net_points(hods::niederreiter_set(1, 4, 4));
  for (std::uint64_t n = 0; n < 16; ++n)
    if (p.exact(n, 0) != oracle::radical_inverse(n)) return fail("point " + std::to_string(n) + " is not the radical inverse");
  return {true, "identity up to 24x24, 16 radical-inverse points"};
}

Outcome interlacing_equivalence() {
  int cases = 0;
  for (std::size_t s = 1; s <= 3; ++s)
    for (std::size_t m = 1; m <= 10; ++m) {
      const GeneratingMatrixSet src = hods::niederreiter_set(2 * s, m, m);
      const PointSet point_level = hods::interlace_points(hods::net_points(src));
      const PointSet matrix_level = hods::net_points(hods::interlace_matrix_set(src, 2 * m));
      if (!(point_level == matrix_level))
        return fail("net mismatch at s=" + std::to_string(s) + " m=" + std::to_string(m));
      ++cases;
    }
  // The interlaced sequence: points of the 2s-dimensional sequence, interlaced,
  // equal the sequence of the interlaced matrices.
  for (std::size_t s = 1; s <= 3; ++s) {
    const GeneratingMatrixSet src = hods::niederreiter_set(2 * s, 16, 12);
    const PointSet a = hods::interlace_points(hods::sequence_points(src, 3000, 16));
    const PointSet b = hods::sequence_points(hods::interlace_matrix_set(src, 32), 3000, 32);
    if (!(a == b)) return fail("sequence mismatch at s=" + std::to_string(s));
    ++cases;
  }
  return {true, std::to_string(cases) + " cases bit-exact"};
}

Outcome block_shift() {
  long blocks = 0;
  for (std::size_t s = 1; s <= 3; ++s) {
    const GeneratingMatrixSet d = hods::interlaced_niederreiter(s, 16, 13);
    for (std::size_t m = 1; m <= 8; ++m) {
      const auto w = static_cast<unsigned>(2 * m);
      const PointSet net = hods::net_points(hods::upper_left(d, 2 * m, m));
      const std::uint64_t per = std::uint64_t{1} << m;
      for (std::uint64_t beta = 0; beta <= 16; ++beta) {
        const PointSet shifted = hods::digital_shift(net, hods::block_shift_vector(d, m, beta));
        for (std::uint64_t i = 0; i < per; ++i) {
          const auto pt = hods::sequence_point(d, beta * per + i, w);
          for (std::size_t j = 0; j < s; ++j)
            if (pt[j].numerator != shifted.numerator(i, j))
              return fail("block mismatch at s=" + std::to_string(s) + " m=" + std::to_string(m) +
                          " beta=" + std::to_string(beta));
        }
        ++blocks;
      }
    }
  }
  return {true, std::to_string(blocks) + " blocks bit-exact"};
}

Outcome classical_strength() {
  const unsigned budget = hods::kDefaultBudgetBits;
  int cases = 0, skipped = 0;
  for (std::size_t s = 1; s <= 3; ++s)
    for (std::size_t m = 1; m <= 6; ++m) {
      if (2 * m * s - m > budget) {
        ++skipped;
        continue;
      }
      const GeneratingMatrixSet g = hods::niederreiter_set(s, 2 * m, m);
      const auto basis = hods::dual_set_basis(g);
      if (basis.rank() != 2 * m * s - m) return fail("kernel dimension is not 2ms - m");
      const auto w = hods::minimal_weights(basis, {budget, 1});
      const long tp = static_cast<long>(hods::niederreiter_t_value(g.polys));
      const long need = static_cast<long>(m) - tp + 1;
      if (static_cast<long>(w.rho1) < need)
        return fail("rho1 = " + std::to_string(w.rho1) + " < " + std::to_string(need) + " at s=" + std::to_string(s) +
                    " m=" + std::to_string(m));
      if (2 * m * s <= 18) {
        const auto box = oracle::minimal_weights_by_box(g);
        if (box.rho1 != w.rho1) return fail("box scan disagrees with kernel walk");
      }
      ++cases;
    }
  return {true, std::to_string(cases) + " cases within budget 2ms-m <= 26 (" + std::to_string(skipped) + " above)"};
}

Outcome order_two_strength() {
  int cases = 0;
  for (std::size_t s = 1; s <= 2; ++s)
    for (std::size_t m = 1; m <= 6; ++m) {
      const GeneratingMatrixSet d = hods::interlaced_niederreiter(s, 2 * m, m);
      const auto w = hods::minimal_weights(hods::dual_set_basis(d));
      const std::size_t t = std::min(hods::construction_t_bound(d), 2 * m);
      if (static_cast<long>(w.rho2) < static_cast<long>(2 * m) - static_cast<long>(t) + 1)
        return fail("rho2 = " + std::to_string(w.rho2) + " below 2m - t + 1 at s=" + std::to_string(s) +
                    " m=" + std::to_string(m));
      for (std::size_t tt = 0; tt <= 2 * m; ++tt) {
        const bool search = hods::verify_order2_net(d, tt);
        const bool weight = w.rho2 > 2 * m - tt;
        if (search != weight)
          return fail("row search and rho2 disagree at s=" + std::to_string(s) + " m=" + std::to_string(m) +
                      " t=" + std::to_string(tt));
        ++cases;
      }
    }
  return {true, std::to_string(cases) + " (s, m, t) cases agree"};
}

Outcome character_property() {
  std::mt19937_64 rng(20240601);
  long dual = 0, non_dual = 0;
  for (std::size_t s = 1; s <= 2; ++s)
    for (std::size_t m = 1; m <= 5; ++m)
      for (bool inter : {false, true}) {
        const GeneratingMatrixSet g =
            inter ? hods::interlaced_niederreiter(s, 2 * m, m) : hods::niederreiter_set(s, 2 * m, m);
        for (const auto& e : hods::dual_elements(hods::dual_set_basis(g))) {
          if (!oracle::in_dual(g, e.k)) return fail("enumerated element fails the direct dual test");
          if (hods::character_sum(g, e.k) != Rational(1)) return fail("character sum != 1 on a dual element");
          ++dual;
        }
        const std::uint64_t mask = (std::uint64_t{1} << (2 * m)) - 1;
        for (int found = 0; found < 1000;) {
          std::vector<std::uint64_t> k(s);
          for (auto& v : k) v = rng() & mask;
          if (oracle::in_dual(g, k)) continue;
          if (hods::character_sum(g, k) != Rational(0)) return fail("character sum != 0 off the dual set");
          ++found;
          ++non_dual;
        }
      }
  return {true, std::to_string(dual) + " dual and " + std::to_string(non_dual) + " non-dual indices"};
}

Outcome walsh_analysis() {
  for (std::uint64_t k = 0; k < 64; ++k)
    for (std::uint64_t l = 0; l < 64; ++l)
      if (hods::walsh_inner_product(k, l) != Rational(k == l ? 1 : 0)) return fail("orthogonality fails");
  PointSet origin(1, 1, hods::Provenance::net);
  origin.push_back(std::vector<std::uint64_t>{0});
  if (hods::delta_walsh_coefficient(origin, std::vector<std::uint64_t>{0}) != Rational(1, 2))
    return fail("singleton coefficient at l=0 is not 1/2");
  if (hods::delta_walsh_coefficient(origin, std::vector<std::uint64_t>{1}) != Rational(1, 4))
    return fail("singleton coefficient at l=1 is not 1/4");

  Rational worst = 0;
  const unsigned r1 = 10;
  const PointSet p1 = hods::net_points(hods::interlaced_niederreiter(1, 8, 4));
  for (std::uint64_t l = 0; l < 64; ++l) {
    const std::vector<std::uint64_t> idx{l};
    worst = std::max<Rational>(worst, boost::multiprecision::abs(hods::delta_walsh_coefficient(p1, idx) -
                                                                 oracle::delta_coefficient_by_midpoints(p1, idx, r1)));
    if (worst > Rational(BigInt(1), BigInt(1) << r1)) return fail("s=1 coefficient off the midpoint oracle");
  }
  const unsigned r2 = 6;
  const PointSet p2 = hods::net_points(hods::interlaced_niederreiter(2, 6, 3));
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      const std::vector<std::uint64_t> idx{a, b};
      const Rational diff = boost::multiprecision::abs(hods::delta_walsh_coefficient(p2, idx) -
                                                       oracle::delta_coefficient_by_midpoints(p2, idx, r2));
      if (diff > Rational(BigInt(1), BigInt(1) << r2)) return fail("s=2 coefficient off the midpoint oracle");
      worst = std::max(worst, diff);
    }
  return {true, "max |coefficient - midpoint oracle| = " + fmt("%.3g", hods::to_double(worst))};
}

Outcome discrepancy_oracles() {
  PointSet half(1, 1, hods::Provenance::net), origin(1, 1, hods::Provenance::net);
  half.push_back(std::vector<std::uint64_t>{1});
  origin.push_back(std::vector<std::uint64_t>{0});
  const double e1 = std::abs(hods::l2_exact(half) - 1 / std::sqrt(12.0));
  const double e2 = std::abs(hods::l2_exact(origin) - 1 / std::sqrt(3.0));
  if (e1 > 1e-12 || e2 > 1e-12) return fail("closed forms off by " + fmt("%.3g", std::max(e1, e2)));

  double grid_err = 0;
  for (std::size_t s = 1; s <= 2; ++s)
    for (std::size_t m = 1; m <= 6; ++m) {
      const PointSet p = hods::net_points(hods::interlaced_niederreiter(s, 2 * m, m));
      grid_err = std::max(grid_err, std::abs(hods::l2_exact(p) - oracle::l2_by_grid(p, 12)));
    }
  const PointSet prop = hods::propagation_point_set(hods::interlaced_niederreiter(2, 12, 6), 41);
  grid_err = std::max(grid_err, std::abs(hods::l2_exact(prop) - oracle::l2_by_grid(prop, 12)));
  if (grid_err > 1e-3) return fail("grid quadrature off by " + fmt("%.3g", grid_err));

  const PointSet p = hods::net_points(hods::interlaced_niederreiter(2, 12, 6));
  const double exact = hods::l2_exact(p);
  double worst_z = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto est = hods::lq_estimate(p, 2, 20000, seed);
    const double z = std::abs(est.estimate - exact) / est.std_error;
    worst_z = std::max(worst_z, z);
  }
  if (worst_z > 3) return fail("a Monte-Carlo run is " + fmt("%.2f", worst_z) + " standard errors away");
  return {true, "grid err " + fmt("%.2g", grid_err) + ", worst MC z " + fmt("%.2f", worst_z)};
}

Outcome net_envelope() {
  std::vector<double> norm2;
  for (std::size_t m = 4; m <= 14; ++m) {
    const PointSet p = hods::net_points(hods::interlaced_niederreiter(2, 2 * m, m));
    const double l2 = hods::l2_exact(p);
    norm2.push_back(l2 * std::ldexp(1.0, static_cast<int>(m)) / std::sqrt(static_cast<double>(m)));
  }
  const auto tail = std::vector<double>(norm2.end() - 3, norm2.end());
  const double ratio = *std::max_element(tail.begin(), tail.end()) / *std::min_element(tail.begin(), tail.end());
  if (ratio > 2) return fail("s=2 plateau ratio " + fmt("%.3f", ratio));

  // One point per interval of length 1/N in one dimension gives |delta| <= 1/N.
  double worst = 0;
  for (std::size_t m = 4; m <= 14; ++m) {
    const PointSet p = hods::net_points(hods::interlaced_niederreiter(1, 2 * m, m));
    worst = std::max(worst, hods::l2_exact(p) * std::ldexp(1.0, static_cast<int>(m)));
  }
  if (worst > 1.0) return fail("s=1 N*L2 reaches " + fmt("%.3f", worst));
  return {true, "s=2 tail ratio " + fmt("%.3f", ratio) + ", s=1 max N*L2 " + fmt("%.3f", worst)};
}

Outcome propagation() {
  {
    const GeneratingMatrixSet d = hods::interlaced_niederreiter(2, 20, 10);
    for (std::uint64_t n = 2; n <= 1024; ++n) {
      const PointSet p = hods::propagation_point_set(d, n);
      if (p.size() != n) return fail("|P| != N at N=" + std::to_string(n));
      std::vector<int> bucket(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const Rational x = p.exact(i, 0) * Rational(BigInt(n));
        const BigInt a = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
        if (a < 0 || a >= n) return fail("rescaled coordinate outside [0,1) at N=" + std::to_string(n));
        ++bucket[static_cast<std::size_t>(a)];
      }
      if (std::any_of(bucket.begin(), bucket.end(), [](int c) { return c != 1; }))
        return fail("stratification fails at N=" + std::to_string(n));
    }
  }
  const std::uint64_t n_max = 4096, n_fit = 64;
  const GeneratingMatrixSet d = hods::interlaced_niederreiter(2, 24, 12);
  double c_fit = 0, c_all = 0;
  std::uint64_t arg = 0;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    const double ratio = hods::l2_exact(hods::propagation_point_set(d, n)) / hods::propagation_bound(n, 2);
    if (n <= n_fit) c_fit = std::max(c_fit, ratio);
    if (ratio > c_all) {
      c_all = ratio;
      arg = n;
    }
  }
  if (c_all > c_fit)
    return fail("C fitted on N <= 64 (" + fmt("%.3f", c_fit) + ") is exceeded at N=" + std::to_string(arg) + " (" +
                fmt("%.3f", c_all) + ")");
  return {true, "C = " + fmt("%.3f", c_all) + " at N=" + std::to_string(arg) + ", fitted on N <= 64 holds to 4096"};
}

Outcome integration_demo() {
  std::vector<double> ms, e1, e2;
  for (std::size_t m = 4; m <= 12; ++m) {
    ms.push_back(static_cast<double>(m));
    const auto r2 = hods::qmc_integrate(hods::net_points(hods::interlaced_niederreiter(1, 2 * m, m)),
                                        hods::TestFunction::product_quadratic);
    const auto r1 = hods::qmc_integrate(hods::net_points(hods::niederreiter_set(1, 2 * m, m)),
                                        hods::TestFunction::product_quadratic);
    e2.push_back(std::log2(r2.abs_error));
    e1.push_back(std::log2(r1.abs_error));
  }
  const double slope2 = hods::least_squares_slope(ms, e2);
  const double slope1 = hods::least_squares_slope(ms, e1);
  const std::string detail = "order-2 slope " + fmt("%.3f", slope2) + " (order-1 " + fmt("%.3f", slope1) + ")";
  if (!(slope2 <= -1.7)) return fail(detail);
  return {true, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "construction exactness", 1, construction_exactness},
      {2, "interlacing equivalence", 10, interlacing_equivalence},
      {3, "block shift lemma", 30, block_shift},
      {4, "classical strength", 120, classical_strength},
      {5, "order-2 strength", 300, order_two_strength},
      {6, "character property", 60, character_property},
      {7, "Walsh analysis", 60, walsh_analysis},
      {8, "discrepancy oracles", 120, discrepancy_oracles},
      {9, "net envelope plateau", 600, net_envelope},
      {10, "propagation rule", 900, propagation},
      {11, "higher-order integration", 60, integration_demo},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.pass && secs > c.time_limit_s) out = fail(out.detail + "; over the " + fmt("%.0f", c.time_limit_s) + " s limit");
    if (!out.pass) ++failures;
    std::printf("[%s] %2d. %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
