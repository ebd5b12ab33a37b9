#pragma once

// Digital nets and sequences as exact dyadic point sets.
//
// A coordinate is stored as a numerator with a shared precision W, so the
// value is numerator / 2^W and digit k (1-based, most significant first) is
// bit W - k of the numerator.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hods/error.hpp"
#include "hods/genmat.hpp"
#include "hods/mix.hpp"
#include "hods/rational.hpp"

namespace hods {

inline constexpr unsigned kMaxPrecision = 64;
inline constexpr unsigned kMaxNetLevel = 32;

inline constexpr std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

struct DyadicValue {
  std::uint64_t numerator = 0;
  unsigned precision = 0;

  DyadicValue() = default;
  DyadicValue(std::uint64_t num, unsigned w) : numerator(num), precision(w) {
    if (w > kMaxPrecision) throw InvalidInput("dyadic precision above 64 bits");
    if ((num & ~low_mask(w)) != 0) throw InvalidInput("dyadic numerator does not fit its precision");
  }

  /// Digit k (1-based) of the binary expansion; zero beyond the precision.
  bool digit(unsigned k) const { return k >= 1 && k <= precision && ((numerator >> (precision - k)) & 1U); }
  double value() const { return std::ldexp(static_cast<double>(numerator), -static_cast<int>(precision)); }
  Rational exact() const { return dyadic_rational(numerator, precision); }

  friend bool operator==(const DyadicValue&, const DyadicValue&) = default;
};

using DyadicPoint = std::vector<DyadicValue>;
using ShiftVector = std::vector<DyadicValue>;

enum class Provenance { net, sequence, shifted, interlaced, propagated };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::net: return "net";
    case Provenance::sequence: return "sequence";
    case Provenance::shifted: return "shifted";
    case Provenance::interlaced: return "interlaced";
    case Provenance::propagated: return "propagated";
  }
  return "unknown";
}

/// Exact factor applied to the first coordinate (the propagation rule's
/// 2^m / N). Identity for every other construction.
struct AxisScale {
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  bool is_identity() const { return num == den; }
  friend bool operator==(const AxisScale&, const AxisScale&) = default;
};

/// N points in [0,1)^s in generation order, all coordinates at precision W.
class PointSet {
 public:
  PointSet(std::size_t s, unsigned precision, Provenance provenance)
      : s_(s), precision_(precision), provenance_(provenance) {
    if (s == 0) throw InvalidInput("point sets need dimension >= 1");
    if (precision > kMaxPrecision) throw InvalidInput("precision above 64 bits");
  }

  std::size_t size() const { return s_ == 0 ? 0 : data_.size() / s_; }
  std::size_t dimension() const { return s_; }
  unsigned precision() const { return precision_; }
  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }
  const AxisScale& first_axis_scale() const { return scale_; }
  void set_first_axis_scale(AxisScale a) {
    if (a.num == 0 || a.den == 0) throw InvalidInput("axis scale must be a positive fraction");
    scale_ = a;
  }

  void push_back(std::span<const std::uint64_t> numerators) {
    if (numerators.size() != s_) throw InvalidInput("point dimension mismatch");
    for (auto v : numerators)
      if ((v & ~low_mask(precision_)) != 0) throw InvalidInput("numerator does not fit the set precision");
    data_.insert(data_.end(), numerators.begin(), numerators.end());
  }

  std::uint64_t numerator(std::size_t n, std::size_t j) const { return data_[n * s_ + j]; }
  std::span<const std::uint64_t> point(std::size_t n) const { return {data_.data() + n * s_, s_}; }
  DyadicValue at(std::size_t n, std::size_t j) const { return DyadicValue{numerator(n, j), precision_}; }

  /// Coordinate as a double; exact for W <= 53 when the axis is unscaled.
  double value(std::size_t n, std::size_t j) const {
    const double v = std::ldexp(static_cast<double>(numerator(n, j)), -static_cast<int>(precision_));
    if (j == 0 && !scale_.is_identity())
      return v * static_cast<double>(scale_.num) / static_cast<double>(scale_.den);
    return v;
  }

  Rational exact(std::size_t n, std::size_t j) const {
    Rational r = dyadic_rational(numerator(n, j), precision_);
    if (j == 0 && !scale_.is_identity()) r *= Rational(BigInt(scale_.num), BigInt(scale_.den));
    return r;
  }

  /// All coordinates as doubles, row-major.
  std::vector<double> to_doubles() const {
    std::vector<double> out(data_.size());
    for (std::size_t n = 0; n < size(); ++n)
      for (std::size_t j = 0; j < s_; ++j) out[n * s_ + j] = value(n, j);
    return out;
  }

  const std::vector<std::uint64_t>& raw() const { return data_; }

  /// Same points truncated (or zero-padded) to a new precision.
  PointSet with_precision(unsigned w) const {
    PointSet out(s_, w, provenance_);
    out.scale_ = scale_;
    out.data_.reserve(data_.size());
    for (auto v : data_) out.data_.push_back(w >= precision_ ? v << (w - precision_) : v >> (precision_ - w));
    return out;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.s_ == b.s_ && a.precision_ == b.precision_ && a.scale_ == b.scale_ && a.data_ == b.data_;
  }

 private:
  std::size_t s_;
  unsigned precision_;
  Provenance provenance_;
  AxisScale scale_{};
  std::vector<std::uint64_t> data_;
};

namespace detail {

/// Column l of a W-row matrix as a numerator: row k lands on digit k.
inline std::vector<std::uint64_t> column_numerators(const BitMatrix& m, unsigned w, std::size_t cols) {
  std::vector<std::uint64_t> out(cols, 0);
  for (std::size_t k = 0; k < w; ++k)
    for (std::size_t l = 0; l < cols; ++l)
      if (m.get(k, l)) out[l] |= std::uint64_t{1} << (w - 1 - k);
  return out;
}

inline void require_unscaled(const PointSet& p, const char* op) {
  if (!p.first_axis_scale().is_identity())
    throw InvalidInput(std::string(op) + " needs a dyadic point set; the first axis is rescaled");
}

}  // namespace detail

/// The 2^cols points x_n = C_j n with W = rows digits, in index order.
inline PointSet net_points(const GeneratingMatrixSet& g) {
  if (g.cols > kMaxNetLevel)
    throw BudgetExceeded("net_points enumerates 2^" + std::to_string(g.cols) + " points; limit is 2^32");
  if (g.rows > kMaxPrecision) throw InvalidInput("net_points needs rows <= 64");
  if (g.dimension() == 0) throw InvalidInput("net_points needs at least one matrix");
  const unsigned w = static_cast<unsigned>(g.rows);
  const std::size_t m = g.cols;
  const std::size_t s = g.dimension();

  // x_n = x_{n-1} xor (col_0 ^ ... ^ col_ctz(n)).
  std::vector<std::vector<std::uint64_t>> carry(s);
  for (std::size_t j = 0; j < s; ++j) {
    carry[j] = detail::column_numerators(g[j], w, m);
    for (std::size_t l = 1; l < m; ++l) carry[j][l] ^= carry[j][l - 1];
  }
  PointSet out(s, w, Provenance::net);
  std::vector<std::uint64_t> x(s, 0);
  out.push_back(x);
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t n = 1; n < count; ++n) {
    const auto b = static_cast<std::size_t>(std::countr_zero(n));
    for (std::size_t j = 0; j < s; ++j) x[j] ^= carry[j][b];
    out.push_back(x);
  }
  return out;
}

/// Point n of the digital sequence, first W digits of each coordinate.
/// The truncation must cover every nonzero index digit and W rows.
inline DyadicPoint sequence_point(const GeneratingMatrixSet& g, std::uint64_t n, unsigned w) {
  if (w > kMaxPrecision) throw InvalidInput("sequence_point precision above 64");
  if (g.rows < w)
    throw InvalidInput("sequence_point needs " + std::to_string(w) + " matrix rows, have " + std::to_string(g.rows));
  if (g.cols < static_cast<std::size_t>(std::bit_width(n)))
    throw InvalidInput("sequence_point index " + std::to_string(n) + " needs " + std::to_string(std::bit_width(n)) +
                       " matrix columns, have " + std::to_string(g.cols));
  DyadicPoint p;
  p.reserve(g.dimension());
  for (const auto& m : g.matrices) {
    std::uint64_t num = 0;
    for (unsigned k = 0; k < w; ++k) {
      const bool digit = std::popcount(m.row_word(k) & n) & 1;
      if (digit) num |= std::uint64_t{1} << (w - 1 - k);
    }
    p.emplace_back(num, w);
  }
  return p;
}

/// First `count` points of the sequence at precision W.
inline PointSet sequence_points(const GeneratingMatrixSet& g, std::uint64_t count, unsigned w) {
  if (count == 0) throw InvalidInput("sequence_points needs count >= 1");
  if (g.cols < static_cast<std::size_t>(std::bit_width(count - 1)))
    throw InvalidInput("sequence_points: too few matrix columns for " + std::to_string(count) + " points");
  if (g.rows < w) throw InvalidInput("sequence_points: too few matrix rows for the requested precision");
  std::vector<std::vector<std::uint64_t>> cols(g.dimension());
  for (std::size_t j = 0; j < g.dimension(); ++j) cols[j] = detail::column_numerators(g[j], w, g.cols);
  PointSet out(g.dimension(), w, Provenance::sequence);
  std::vector<std::uint64_t> x(g.dimension());
  for (std::uint64_t n = 0; n < count; ++n) {
    for (std::size_t j = 0; j < g.dimension(); ++j) {
      std::uint64_t v = 0;
      for (std::uint64_t bits = n; bits != 0; bits &= bits - 1) v ^= cols[j][std::countr_zero(bits)];
      x[j] = v;
    }
    out.push_back(x);
  }
  return out;
}

/// Coordinatewise XOR of digit expansions.
inline PointSet digital_shift(const PointSet& p, const ShiftVector& shift) {
  detail::require_unscaled(p, "digital_shift");
  if (shift.size() != p.dimension()) throw InvalidInput("shift vector dimension does not match the point set");
  for (const auto& v : shift)
    if (v.precision != p.precision()) throw InvalidInput("shift vector precision does not match the point set");
  PointSet out(p.dimension(), p.precision(), Provenance::shifted);
  std::vector<std::uint64_t> x(p.dimension());
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < p.dimension(); ++j) x[j] = p.numerator(n, j) ^ shift[j].numerator;
    out.push_back(x);
  }
  return out;
}

/// Shift vector with pseudo-random digits derived from `seed`.
inline ShiftVector random_shift(std::size_t s, unsigned w, std::uint64_t seed) {
  ShiftVector out;
  for (std::size_t j = 0; j < s; ++j) out.emplace_back(keyed_random(seed, 0x5348494654ULL, j) & low_mask(w), w);
  return out;
}

/// Shift sigma_beta under which points beta 2^m .. (beta+1) 2^m - 1 of the
/// sequence, truncated to 2m digits, form the net of the 2m x m blocks.
/// Its digits are the first 2m rows of columns m+1.. applied to beta's digits.
inline ShiftVector block_shift_vector(const GeneratingMatrixSet& g, std::size_t m, std::uint64_t beta) {
  const std::size_t need_cols = m + static_cast<std::size_t>(std::bit_width(beta));
  if (2 * m > kMaxPrecision) throw InvalidInput("block_shift_vector needs 2m <= 64");
  if (g.rows < 2 * m) throw InvalidInput("block_shift_vector needs at least 2m matrix rows");
  if (g.cols < need_cols)
    throw InvalidInput("block_shift_vector needs " + std::to_string(need_cols) + " matrix columns, have " +
                       std::to_string(g.cols));
  const auto w = static_cast<unsigned>(2 * m);
  ShiftVector out;
  for (const auto& c : g.matrices) {
    const auto cols = detail::column_numerators(c, w, need_cols);
    std::uint64_t v = 0;
    for (std::uint64_t bits = beta; bits != 0; bits &= bits - 1) v ^= cols[m + std::countr_zero(bits)];
    out.emplace_back(v, w);
  }
  return out;
}

/// Pairs coordinates (2j-1, 2j) into one by alternating digits: output digit
/// 2d-1 comes from the first, 2d from the second. Precision doubles, capped at 64.
inline PointSet interlace_points(const PointSet& p) {
  detail::require_unscaled(p, "interlace_points");
  if (p.dimension() % 2 != 0) throw InvalidInput("interlace_points needs an even number of coordinates");
  const unsigned w_in = p.precision();
  const unsigned w_out = std::min(2 * w_in, kMaxPrecision);
  const std::size_t s = p.dimension() / 2;
  PointSet out(s, w_out, Provenance::interlaced);
  std::vector<std::uint64_t> x(s);
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < s; ++j) {
      const DyadicValue a = p.at(n, 2 * j);
      const DyadicValue b = p.at(n, 2 * j + 1);
      std::uint64_t v = 0;
      for (unsigned i = 1; i <= w_out; ++i) {
        const unsigned d = (i + 1) / 2;
        const bool digit = (i % 2 == 1) ? a.digit(d) : b.digit(d);
        if (digit) v |= std::uint64_t{1} << (w_out - i);
      }
      x[j] = v;
    }
    out.push_back(x);
  }
  return out;
}

/// Level m used by the propagation rule: the smallest m with N <= 2^m.
inline std::size_t propagation_level(std::uint64_t n_points) {
  return static_cast<std::size_t>(std::bit_width(n_points - 1));
}

/// Exactly N points: the interlaced net of 2^m points cut to x_1 < N / 2^m,
/// with the first axis stretched by 2^m / N. `interlaced` holds D_1..D_s.
inline PointSet propagation_point_set(const GeneratingMatrixSet& interlaced, std::uint64_t n_points) {
  if (n_points < 2) throw InvalidInput("propagation rule needs N >= 2");
  const std::size_t m = propagation_level(n_points);
  if (interlaced.rows < 2 * m || interlaced.cols < m)
    throw InvalidInput("propagation rule for N = " + std::to_string(n_points) + " needs " + std::to_string(2 * m) +
                       "x" + std::to_string(m) + " matrices");
  const PointSet net = net_points(upper_left(interlaced, 2 * m, m));
  // x_1 < N / 2^m  <=>  numerator < N 2^m
  const unsigned __int128 cut = static_cast<unsigned __int128>(n_points) << m;
  PointSet out(net.dimension(), net.precision(), Provenance::propagated);
  for (std::size_t n = 0; n < net.size(); ++n)
    if (net.numerator(n, 0) < cut) out.push_back(net.point(n));
  if (out.size() != n_points)
    throw InvalidInput("first coordinate is not stratified: propagation kept " + std::to_string(out.size()) +
                       " of " + std::to_string(n_points) + " points");
  const std::uint64_t pow2 = std::uint64_t{1} << m;
  const std::uint64_t g = std::gcd(pow2, n_points);
  out.set_first_axis_scale({pow2 / g, n_points / g});
  return out;
}

}  // namespace hods
