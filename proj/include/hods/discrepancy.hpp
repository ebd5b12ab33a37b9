#pragma once

// Local discrepancy, L2 (Warnock) and Monte-Carlo Lq discrepancy, the
// asymptotic envelopes, convergence studies and a QMC integration demo.
//
// Coordinates become floating point only in this header.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hods/error.hpp"
#include "hods/genmat.hpp"
#include "hods/mix.hpp"
#include "hods/points.hpp"
#include "hods/rational.hpp"

namespace hods {

inline constexpr std::size_t kMaxWarnockPoints = std::size_t{1} << 16;

namespace detail {

/// Sums values[lo, hi) by recursive halving; the tree shape depends only on
/// the length, so the result is reproducible.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Runs body(i) for i in [0, count) on up to `threads` workers, interleaved.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// delta(P; theta) = #{x_n in [0, theta)} / N - prod theta_j.
inline double local_discrepancy(const PointSet& p, std::span<const double> theta) {
  const std::size_t s = p.dimension();
  if (theta.size() != s) throw InvalidInput("theta dimension does not match the point set");
  double volume = 1;
  for (double t : theta) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("theta must lie in [0,1]^s");
    volume *= t;
  }
  std::size_t count = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    bool inside = true;
    for (std::size_t j = 0; j < s && inside; ++j) inside = p.value(n, j) < theta[j];
    count += inside ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(p.size()) - volume;
}

/// Exact rational local discrepancy; valid for rescaled sets too.
inline Rational local_discrepancy_exact(const PointSet& p, std::span<const Rational> theta) {
  const std::size_t s = p.dimension();
  if (theta.size() != s) throw InvalidInput("theta dimension does not match the point set");
  Rational volume = 1;
  for (const auto& t : theta) {
    if (t < 0 || t > 1) throw InvalidInput("theta must lie in [0,1]^s");
    volume *= t;
  }
  std::size_t count = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    bool inside = true;
    for (std::size_t j = 0; j < s && inside; ++j) inside = p.exact(n, j) < theta[j];
    count += inside ? 1 : 0;
  }
  return Rational(BigInt(count), BigInt(p.size())) - volume;
}

/// L2 discrepancy from the closed-form expansion of the integral of delta^2:
/// 3^-s - (2^(1-s)/N) sum_n prod_j (1 - x_nj^2) + (1/N^2) sum_{n,n'} prod_j (1 - max(x_nj, x_n'j)).
inline double l2_exact(const PointSet& p, unsigned threads = 1) {
  const std::size_t n_pts = p.size();
  const std::size_t s = p.dimension();
  if (n_pts == 0) throw InvalidInput("l2_exact of an empty point set");
  if (n_pts > kMaxWarnockPoints)
    throw BudgetExceeded("l2_exact is quadratic in N; limit is 2^16 points, got " + std::to_string(n_pts));
  const std::vector<double> x = p.to_doubles();

  std::vector<double> single(n_pts);
  for (std::size_t n = 0; n < n_pts; ++n) {
    double prod = 1;
    for (std::size_t j = 0; j < s; ++j) prod *= 1.0 - x[n * s + j] * x[n * s + j];
    single[n] = prod;
  }

  // rows[n] = prod_j (1 - x_nj) + 2 sum_{n' > n} prod_j (1 - max), blocked.
  std::vector<double> rows(n_pts);
  detail::parallel_for(n_pts, threads, [&](std::size_t n) {
    const double* xn = &x[n * s];
    double diag = 1;
    for (std::size_t j = 0; j < s; ++j) diag *= 1.0 - xn[j];
    double total = 0;
    constexpr std::size_t kBlock = 256;
    for (std::size_t start = n + 1; start < n_pts; start += kBlock) {
      const std::size_t stop = std::min(n_pts, start + kBlock);
      double block = 0;
      for (std::size_t m = start; m < stop; ++m) {
        const double* xm = &x[m * s];
        double prod = 1;
        for (std::size_t j = 0; j < s; ++j) prod *= 1.0 - std::max(xn[j], xm[j]);
        block += prod;
      }
      total += block;
    }
    rows[n] = diag + 2 * total;
  });

  const double nn = static_cast<double>(n_pts);
  const double l2sq = std::pow(3.0, -static_cast<double>(s)) -
                      std::pow(2.0, 1.0 - static_cast<double>(s)) / nn * detail::pairwise_sum(single) +
                      detail::pairwise_sum(rows) / (nn * nn);
  return std::sqrt(std::max(0.0, l2sq));
}

struct LqOptions {
  unsigned threads = 1;
  /// Accept odd or non-integer q; results are flagged outside_theorems.
  bool allow_any_q = false;
};

struct LqEstimate {
  double estimate = 0;
  double std_error = 0;
  bool outside_theorems = false;
};

inline bool is_even_integer(double q) { return q >= 2 && std::floor(q) == q && std::fmod(q, 2.0) == 0.0; }

inline constexpr std::size_t kMinLqSamples = 1000;

/// Monte-Carlo estimate of (E |delta(P; Theta)|^q)^(1/q) with Theta uniform,
/// plus a delta-method standard error. Sample i, axis j draws from the keyed
/// stream (seed, j, i), so results do not depend on the thread count.
inline LqEstimate lq_estimate(const PointSet& p, double q, std::size_t samples, std::uint64_t seed,
                              const LqOptions& opt = {}) {
  const bool even = is_even_integer(q);
  if (!even && !opt.allow_any_q) throw InvalidInput("lq_estimate covers even integers q >= 2");
  if (!(q >= 1)) throw InvalidInput("lq_estimate needs q >= 1");
  if (samples < kMinLqSamples) throw InvalidInput("lq_estimate needs at least 1000 samples");

  const std::size_t s = p.dimension();
  const std::size_t n_pts = p.size();
  const std::vector<double> x = p.to_doubles();
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks), squares(blocks);

  detail::parallel_for(blocks, opt.threads, [&](std::size_t b) {
    std::vector<double> theta(s);
    double sum = 0, sq = 0;
    for (std::size_t i = b * kBlock; i < std::min(samples, (b + 1) * kBlock); ++i) {
      double volume = 1;
      for (std::size_t j = 0; j < s; ++j) {
        theta[j] = unit_interval(keyed_random(seed, j, i));
        volume *= theta[j];
      }
      std::size_t count = 0;
      for (std::size_t n = 0; n < n_pts; ++n) {
        bool inside = true;
        for (std::size_t j = 0; j < s && inside; ++j) inside = x[n * s + j] < theta[j];
        count += inside ? 1 : 0;
      }
      const double d = std::pow(std::abs(static_cast<double>(count) / static_cast<double>(n_pts) - volume), q);
      sum += d;
      sq += d * d;
    }
    sums[b] = sum;
    squares[b] = sq;
  });

  const double count = static_cast<double>(samples);
  const double mean = detail::pairwise_sum(sums) / count;
  const double var = std::max(0.0, (detail::pairwise_sum(squares) - count * mean * mean) / (count - 1));
  const double se_mean = std::sqrt(var / count);
  LqEstimate out;
  out.estimate = std::pow(mean, 1.0 / q);
  out.std_error = mean > 0 ? std::pow(mean, 1.0 / q - 1.0) / q * se_mean : 0.0;
  out.outside_theorems = !even;
  return out;
}

/// r^(3/2 - 1/q) / N * sqrt(sum_v m_v^(s-1)) for N = 2^m_1 + ... + 2^m_r,
/// with 0^0 = 1. The unspecified constant is omitted.
inline double thm2_bound(std::uint64_t n_points, std::size_t s, double q) {
  if (n_points < 2) throw InvalidInput("thm2_bound needs N >= 2");
  if (s < 1) throw InvalidInput("thm2_bound needs s >= 1");
  const double r = std::popcount(n_points);
  double sum = 0;
  for (std::uint64_t bits = n_points; bits != 0; bits &= bits - 1)
    sum += std::pow(static_cast<double>(std::countr_zero(bits)), static_cast<double>(s) - 1.0);
  return std::pow(r, 1.5 - 1.0 / q) / static_cast<double>(n_points) * std::sqrt(sum);
}

/// (log2 N)^((s-1)/2) / N, the envelope for propagated point sets.
inline double propagation_bound(std::uint64_t n_points, std::size_t s) {
  if (n_points < 2) throw InvalidInput("propagation_bound needs N >= 2");
  return std::pow(std::log2(static_cast<double>(n_points)), (static_cast<double>(s) - 1.0) / 2.0) /
         static_cast<double>(n_points);
}

// ---------------------------------------------------------------------------
// Convergence studies

enum class StudySource { order1, order2, propagated, prefix };

inline std::string to_string(StudySource s) {
  switch (s) {
    case StudySource::order1: return "order1";
    case StudySource::order2: return "order2";
    case StudySource::propagated: return "propagated";
    case StudySource::prefix: return "prefix";
  }
  return "unknown";
}

inline StudySource parse_study_source(const std::string& name) {
  if (name == "order1") return StudySource::order1;
  if (name == "order2") return StudySource::order2;
  if (name == "propagated") return StudySource::propagated;
  if (name == "prefix") return StudySource::prefix;
  throw InvalidInput("unknown study source '" + name + "'");
}

struct StudyRow {
  std::string kind;
  std::size_t s = 0;
  std::size_t m = 0;
  std::uint64_t n = 0;
  double q = 2;
  double value = 0;
  double bound = 0;
  double normalized = 0;
  std::uint64_t seed = 0;
};

struct StudyConfig {
  std::size_t s = 2;
  StudySource source = StudySource::order2;
  std::size_t m_min = 1;  // nets
  std::size_t m_max = 10;
  std::uint64_t n_min = 2;  // propagated / prefix
  std::uint64_t n_max = 64;
  double q = 2;
  std::size_t samples = 10000;  // Monte Carlo, q != 2
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool allow_any_q = false;
};

inline StudyRow measure(const PointSet& p, const StudyConfig& cfg, std::size_t m, double bound) {
  StudyRow row;
  row.kind = to_string(cfg.source);
  row.s = cfg.s;
  row.m = m;
  row.n = p.size();
  row.q = cfg.q;
  row.seed = cfg.seed;
  row.value = cfg.q == 2 ? l2_exact(p, cfg.threads)
                         : lq_estimate(p, cfg.q, cfg.samples, cfg.seed, {cfg.threads, cfg.allow_any_q}).estimate;
  row.bound = bound;
  row.normalized = row.value * static_cast<double>(row.n) /
                   std::pow(static_cast<double>(m), (static_cast<double>(cfg.s) - 1.0) / 2.0);
  return row;
}

/// Measured discrepancy next to its asymptotic envelope for a sweep of sizes.
/// normalized = value * N / m^((s-1)/2).
inline std::vector<StudyRow> convergence_study(const StudyConfig& cfg) {
  if (cfg.s < 1) throw InvalidInput("study needs s >= 1");
  std::vector<StudyRow> rows;
  switch (cfg.source) {
    case StudySource::order1:
    case StudySource::order2: {
      if (cfg.m_min < 1 || cfg.m_min > cfg.m_max) throw InvalidInput("study needs 1 <= m-min <= m-max");
      if (cfg.m_max > 16) throw BudgetExceeded("net studies are limited to m <= 16 (Warnock is quadratic)");
      for (std::size_t m = cfg.m_min; m <= cfg.m_max; ++m) {
        const GeneratingMatrixSet g = cfg.source == StudySource::order1 ? niederreiter_set(cfg.s, 2 * m, m)
                                                                       : interlaced_niederreiter(cfg.s, 2 * m, m);
        rows.push_back(measure(net_points(g), cfg, m, thm2_bound(std::uint64_t{1} << m, cfg.s, cfg.q)));
      }
      break;
    }
    case StudySource::propagated:
    case StudySource::prefix: {
      if (cfg.n_min < 2 || cfg.n_min > cfg.n_max) throw InvalidInput("study needs 2 <= n-min <= n-max");
      if (cfg.n_max > kMaxWarnockPoints) throw BudgetExceeded("study sizes are limited to 2^16 points");
      const std::size_t top = propagation_level(cfg.n_max);
      const GeneratingMatrixSet d = interlaced_niederreiter(cfg.s, 2 * top, top);
      for (std::uint64_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        const std::size_t m = propagation_level(n);
        if (cfg.source == StudySource::propagated) {
          rows.push_back(measure(propagation_point_set(d, n), cfg, m, propagation_bound(n, cfg.s)));
        } else {
          rows.push_back(measure(sequence_points(d, n, static_cast<unsigned>(2 * top)), cfg, m, thm2_bound(n, cfg.s, cfg.q)));
        }
      }
      break;
    }
  }
  return rows;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kStudyCsvHeader = "kind,s,m,N,q,value,bound,normalized,seed";

inline void write_study_csv(std::ostream& os, std::span<const StudyRow> rows) {
  os << kStudyCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.kind << ',' << r.s << ',' << r.m << ',' << r.n << ',' << format_double(r.q) << ','
       << format_double(r.value) << ',' << format_double(r.bound) << ',' << format_double(r.normalized) << ','
       << r.seed << '\n';
}

/// Least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw InvalidInput("slope needs two or more paired samples");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Integration demo

enum class TestFunction { constant, product_linear, product_quadratic };

inline TestFunction parse_test_function(const std::string& name) {
  if (name == "constant") return TestFunction::constant;
  if (name == "product-linear") return TestFunction::product_linear;
  if (name == "product-quadratic") return TestFunction::product_quadratic;
  throw InvalidInput("unknown test function '" + name + "'");
}

struct IntegrationResult {
  double estimate = 0;
  double abs_error = 0;
};

/// Equal-weight rule against the known integral. product-quadratic is
/// prod_j (x_j^2 - 1/3 + c) with integral c^s; product-linear is prod_j x_j.
inline IntegrationResult qmc_integrate(const PointSet& p, TestFunction f, double c = 1.0) {
  const std::size_t s = p.dimension();
  long double sum = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    long double v = 1;
    for (std::size_t j = 0; j < s; ++j) {
      long double x = std::ldexp(static_cast<long double>(p.numerator(n, j)), -static_cast<int>(p.precision()));
      if (j == 0) x = x * p.first_axis_scale().num / p.first_axis_scale().den;
      switch (f) {
        case TestFunction::constant: break;
        case TestFunction::product_linear: v *= x; break;
        case TestFunction::product_quadratic: v *= x * x - 1.0L / 3.0L + c; break;
      }
    }
    sum += v;
  }
  long double exact = 1;
  switch (f) {
    case TestFunction::constant: exact = 1; break;
    case TestFunction::product_linear: exact = std::pow(0.5L, static_cast<long double>(s)); break;
    case TestFunction::product_quadratic: exact = std::pow(static_cast<long double>(c), static_cast<long double>(s)); break;
  }
  const long double est = sum / static_cast<long double>(p.size());
  return {static_cast<double>(est), static_cast<double>(std::fabs(est - exact))};
}

}  // namespace hods
