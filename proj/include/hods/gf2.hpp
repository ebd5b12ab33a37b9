#pragma once

// Polynomials and dense linear algebra over F2.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hods/error.hpp"

namespace hods {

/// Polynomial over F2 packed into one machine word: bit l is the
/// coefficient of x^l. Degree is capped at 63.
class Gf2Poly {
 public:
  constexpr Gf2Poly() = default;
  constexpr explicit Gf2Poly(std::uint64_t coeffs) : coeffs_(coeffs) {}

  static constexpr Gf2Poly x() { return Gf2Poly{0b10}; }
  static constexpr Gf2Poly one() { return Gf2Poly{1}; }

  constexpr std::uint64_t coeffs() const { return coeffs_; }
  constexpr bool is_zero() const { return coeffs_ == 0; }
  /// Degree of the polynomial; -1 for the zero polynomial.
  constexpr int degree() const { return static_cast<int>(std::bit_width(coeffs_)) - 1; }
  constexpr bool coeff(int l) const { return l >= 0 && l < 64 && ((coeffs_ >> l) & 1U); }

  friend constexpr bool operator==(Gf2Poly, Gf2Poly) = default;
  friend constexpr Gf2Poly operator+(Gf2Poly a, Gf2Poly b) { return Gf2Poly{a.coeffs_ ^ b.coeffs_}; }

  friend Gf2Poly operator*(Gf2Poly a, Gf2Poly b) {
    if (a.is_zero() || b.is_zero()) return Gf2Poly{};
    if (a.degree() + b.degree() > 63) throw InvalidInput("Gf2Poly product exceeds degree 63");
    std::uint64_t r = 0;
    for (std::uint64_t w = b.coeffs_; w != 0; w &= w - 1) r ^= a.coeffs_ << std::countr_zero(w);
    return Gf2Poly{r};
  }

  /// Remainder of a modulo b.
  friend Gf2Poly operator%(Gf2Poly a, Gf2Poly b) {
    if (b.is_zero()) throw InvalidInput("Gf2Poly division by zero polynomial");
    const int db = b.degree();
    std::uint64_t r = a.coeffs_;
    for (int d = Gf2Poly{r}.degree(); d >= db; d = Gf2Poly{r}.degree()) r ^= b.coeffs_ << (d - db);
    return Gf2Poly{r};
  }

  /// "0x" followed by the lowercase hex coefficient word.
  std::string to_hex() const {
    std::ostringstream os;
    os << "0x" << std::hex << coeffs_;
    return os.str();
  }

  static Gf2Poly from_hex(std::string_view text) {
    if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
      throw InvalidInput("polynomial must be written as 0x<hex>: '" + std::string(text) + "'");
    text.remove_prefix(2);
    if (text.size() > 16) throw InvalidInput("polynomial exceeds 64 coefficient bits");
    std::uint64_t v = 0;
    for (char ch : text) {
      int digit;
      if (ch >= '0' && ch <= '9') digit = ch - '0';
      else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
      else throw InvalidInput("bad hex digit in polynomial: '" + std::string(1, ch) + "'");
      v = (v << 4) | static_cast<std::uint64_t>(digit);
    }
    return Gf2Poly{v};
  }

 private:
  std::uint64_t coeffs_ = 0;
};

/// Trial division by every polynomial of degree 1..deg(p)/2.
inline bool poly_is_irreducible(Gf2Poly p) {
  if (p.is_zero()) throw InvalidInput("irreducibility of the zero polynomial is undefined");
  const int d = p.degree();
  if (d == 0) return false;  // units are not irreducible
  const int half = d / 2;
  for (std::uint64_t q = 2; q < (std::uint64_t{1} << (half + 1)); ++q) {
    if ((p % Gf2Poly{q}).is_zero()) return false;
  }
  return true;
}

/// p_1 = x; p_j for j >= 2 is the (j-1)st irreducible polynomial other than x,
/// ordered by degree and then by integer encoding.
inline Gf2Poly irreducible_sequence(std::size_t j) {
  if (j == 0) throw InvalidInput("irreducible_sequence index is 1-based");
  if (j == 1) return Gf2Poly::x();
  std::size_t found = 1;
  // Enumerating by integer encoding visits degrees in increasing order.
  for (std::uint64_t c = 3;; ++c) {
    if (c == 0) throw InvalidInput("irreducible_sequence exhausted the degree-63 range");
    if (poly_is_irreducible(Gf2Poly{c}) && ++found == j) return Gf2Poly{c};
  }
}

/// First `count` coefficients a_1..a_count of the expansion
/// x^(e-z-1) / p^i = sum_l a_l x^-l with e = deg p.
inline std::vector<std::uint8_t> laurent_coefficients(Gf2Poly p, int power, int shift, std::size_t count) {
  const int e = p.degree();
  if (e < 1) throw InvalidInput("laurent_coefficients needs deg(p) >= 1");
  if (power < 1) throw InvalidInput("laurent_coefficients needs power >= 1");
  if (shift < 0 || shift >= e) throw InvalidInput("laurent_coefficients needs 0 <= z < deg(p)");
  if (count < 1) throw InvalidInput("laurent_coefficients needs count >= 1");

  // q = p^power as a dense coefficient array; its degree may exceed one word.
  std::vector<std::uint8_t> q{1};
  for (int it = 0; it < power; ++it) {
    std::vector<std::uint8_t> next(q.size() + static_cast<std::size_t>(e), 0);
    for (std::size_t a = 0; a < q.size(); ++a) {
      if (!q[a]) continue;
      for (int b = 0; b <= e; ++b) next[a + static_cast<std::size_t>(b)] ^= p.coeff(b) ? 1 : 0;
    }
    q = std::move(next);
  }
  const std::size_t deg_q = q.size() - 1;
  const std::size_t numerator_deg = static_cast<std::size_t>(e - shift - 1);

  // Comparing coefficients of x^(D-l) in x^c = q * sum a_l x^-l gives
  // a_l = [l == D - c] + sum_{d<D} q_d a_{l-(D-d)}.
  std::vector<std::uint8_t> a(count + 1, 0);
  for (std::size_t l = 1; l <= count; ++l) {
    std::uint8_t v = (l == deg_q - numerator_deg) ? 1 : 0;
    for (std::size_t d = 0; d < deg_q; ++d) {
      const std::size_t lag = deg_q - d;
      if (q[d] && lag < l) v ^= a[l - lag];
    }
    a[l] = v;
  }
  a.erase(a.begin());
  return a;
}

/// Dynamically sized vector over F2.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool bit) {
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (bit) words_[i / 64] |= mask;
    else words_[i / 64] &= ~mask;
  }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  BitVector& operator^=(const BitVector& o) {
    if (o.size_ != size_) throw InvalidInput("BitVector size mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense rows x cols matrix over F2, row-major, each row a run of 64-bit words
/// with column c at bit c % 64 of word c / 64. Indices are 0-based.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U; }
  void set(std::size_t r, std::size_t c, bool bit) {
    std::uint64_t& w = data_[r * stride_ + c / 64];
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    if (bit) w |= mask;
    else w &= ~mask;
  }

  /// Low 64 columns of row r as one word (column c at bit c).
  std::uint64_t row_word(std::size_t r) const { return stride_ == 0 ? 0 : data_[r * stride_]; }

  BitVector row(std::size_t r) const {
    BitVector v(cols_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_, v.words().begin());
    return v;
  }
  void set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) throw InvalidInput("row length mismatch");
    std::copy(v.words().begin(), v.words().end(), data_.begin() + static_cast<std::ptrdiff_t>(r * stride_));
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (get(r, c)) t.set(c, r, true);
    return t;
  }

  BitVector multiply(const BitVector& v) const {
    if (v.size() != cols_) throw InvalidInput("matrix-vector size mismatch");
    BitVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t w = 0; w < stride_; ++w) acc ^= data_[r * stride_ + w] & v.words()[w];
      out.set(r, std::popcount(acc) & 1);
    }
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t rank() const {
    BitMatrix copy = *this;
    return copy.reduce().size();
  }

  /// Basis of {v : M v = 0}, one vector per free column of the reduced echelon form.
  std::vector<BitVector> kernel_basis() const {
    BitMatrix echelon = *this;
    const std::vector<std::size_t> pivots = echelon.reduce();
    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t pc : pivots) is_pivot[pc] = true;
    std::vector<BitVector> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      BitVector v(cols_);
      v.set(free, true);
      for (std::size_t i = 0; i < pivots.size(); ++i)
        if (echelon.get(i, free)) v.set(pivots[i], true);
      basis.push_back(std::move(v));
    }
    return basis;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  /// One line per row of '0'/'1' characters.
  std::string to_text() const {
    std::string out;
    out.reserve(rows_ * (cols_ + 1));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out.push_back(get(r, c) ? '1' : '0');
      out.push_back('\n');
    }
    return out;
  }

  static BitMatrix from_text(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
      const std::size_t nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) lines.push_back(line);
      if (nl == std::string_view::npos) break;
      text.remove_prefix(nl + 1);
    }
    const std::size_t cols = lines.empty() ? 0 : lines.front().size();
    BitMatrix m(lines.size(), cols);
    for (std::size_t r = 0; r < lines.size(); ++r) {
      if (lines[r].size() != cols) throw InvalidInput("ragged matrix text at row " + std::to_string(r + 1));
      for (std::size_t c = 0; c < cols; ++c) {
        const char ch = lines[r][c];
        if (ch != '0' && ch != '1') throw InvalidInput("matrix text may only contain '0' and '1'");
        m.set(r, c, ch == '1');
      }
    }
    return m;
  }

 private:
  /// Gauss-Jordan elimination in place; returns the pivot column of each
  /// leading row.
  std::vector<std::size_t> reduce() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols_ && row < rows_; ++c) {
      std::size_t p = row;
      while (p < rows_ && !get(p, c)) ++p;
      if (p == rows_) continue;
      if (p != row)
        std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(p * stride_),
                         data_.begin() + static_cast<std::ptrdiff_t>((p + 1) * stride_),
                         data_.begin() + static_cast<std::ptrdiff_t>(row * stride_));
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r != row && get(r, c))
          for (std::size_t w = 0; w < stride_; ++w) data_[r * stride_ + w] ^= data_[row * stride_ + w];
      }
      pivots.push_back(c);
      ++row;
    }
    return pivots;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace hods
