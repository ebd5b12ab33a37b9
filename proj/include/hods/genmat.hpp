#pragma once

// Generating matrices: generalized Niederreiter (Tezuka) matrices, digit
// interlacing at matrix level, and upper-left truncation.

#include <cstddef>
#include <string>
#include <vector>

#include "hods/error.hpp"
#include "hods/gf2.hpp"

namespace hods {

enum class MatrixKind { niederreiter, interlaced, custom };

inline std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::niederreiter: return "niederreiter";
    case MatrixKind::interlaced: return "interlaced";
    case MatrixKind::custom: return "custom";
  }
  return "unknown";
}

/// s generating matrices sharing one (rows, cols) truncation.
///
/// `polys` lists the irreducible polynomial behind each underlying
/// Niederreiter coordinate: s entries for kind niederreiter, 2s entries
/// (the interlaced sources in order) for kind interlaced, empty for custom.
struct GeneratingMatrixSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  MatrixKind kind = MatrixKind::custom;
  std::vector<BitMatrix> matrices;
  std::vector<Gf2Poly> polys;

  std::size_t dimension() const { return matrices.size(); }
  const BitMatrix& operator[](std::size_t j) const { return matrices[j]; }

  static GeneratingMatrixSet custom(std::vector<BitMatrix> ms) {
    if (ms.empty()) throw InvalidInput("a matrix set needs at least one matrix");
    GeneratingMatrixSet g;
    g.rows = ms.front().rows();
    g.cols = ms.front().cols();
    for (const auto& m : ms)
      if (m.rows() != g.rows || m.cols() != g.cols) throw InvalidInput("matrices in a set must share their shape");
    g.matrices = std::move(ms);
    return g;
  }

  static GeneratingMatrixSet zero(std::size_t s, std::size_t rows, std::size_t cols) {
    return custom(std::vector<BitMatrix>(s, BitMatrix(rows, cols)));
  }
};

/// True when entry (k, l) (1-based) vanishes for every k > factor * l.
inline bool is_column_finite(const BitMatrix& m, std::size_t factor) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m.get(r, c) && r + 1 > factor * (c + 1)) return false;
  return true;
}

/// Matrix C_j truncated to rows x cols. Row k (1-based) holds the Laurent
/// coefficients of x^(e-z-1) / p_j^i where k - 1 = (i - 1) e + z.
inline BitMatrix niederreiter_matrix(std::size_t j, std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw InvalidInput("niederreiter_matrix needs rows, cols >= 1");
  const Gf2Poly p = irreducible_sequence(j);
  const std::size_t e = static_cast<std::size_t>(p.degree());
  BitMatrix m(rows, cols);
  for (std::size_t k = 0; k < rows; ++k) {
    const int power = static_cast<int>(k / e) + 1;
    const int shift = static_cast<int>(k % e);
    const auto a = laurent_coefficients(p, power, shift, cols);
    for (std::size_t l = 0; l < cols; ++l) m.set(k, l, a[l] != 0);
  }
  return m;
}

inline GeneratingMatrixSet niederreiter_set(std::size_t s, std::size_t rows, std::size_t cols) {
  if (s < 1) throw InvalidInput("niederreiter_set needs s >= 1");
  GeneratingMatrixSet g;
  g.rows = rows;
  g.cols = cols;
  g.kind = MatrixKind::niederreiter;
  for (std::size_t j = 1; j <= s; ++j) {
    g.matrices.push_back(niederreiter_matrix(j, rows, cols));
    g.polys.push_back(irreducible_sequence(j));
  }
  return g;
}

/// Row 2u+v of D_j is row u+1 of C_{2(j-1)+v} (1-based, v in {1, 2}).
inline GeneratingMatrixSet interlace_matrix_set(const GeneratingMatrixSet& src, std::size_t rows) {
  if (src.dimension() == 0 || src.dimension() % 2 != 0)
    throw InvalidInput("interlacing needs an even, nonzero number of source matrices");
  if (src.rows < (rows + 1) / 2)
    throw InvalidInput("interlacing to " + std::to_string(rows) + " rows needs " + std::to_string((rows + 1) / 2) +
                       " source rows, have " + std::to_string(src.rows));
  GeneratingMatrixSet out;
  out.rows = rows;
  out.cols = src.cols;
  out.kind = MatrixKind::interlaced;
  out.polys = src.polys;
  for (std::size_t j = 0; j < src.dimension() / 2; ++j) {
    BitMatrix d(rows, src.cols);
    for (std::size_t r = 0; r < rows; ++r) d.set_row(r, src[2 * j + r % 2].row(r / 2));
    out.matrices.push_back(std::move(d));
  }
  return out;
}

/// D_1..D_s built from the Niederreiter matrices C_1..C_{2s}.
inline GeneratingMatrixSet interlaced_niederreiter(std::size_t s, std::size_t rows, std::size_t cols) {
  return interlace_matrix_set(niederreiter_set(2 * s, (rows + 1) / 2, cols), rows);
}

/// Left-upper u x v block.
inline BitMatrix upper_left(const BitMatrix& m, std::size_t u, std::size_t v) {
  if (u > m.rows() || v > m.cols())
    throw InvalidInput("upper_left(" + std::to_string(u) + ", " + std::to_string(v) + ") of a " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
  BitMatrix out(u, v);
  for (std::size_t r = 0; r < u; ++r)
    for (std::size_t c = 0; c < v; ++c)
      if (m.get(r, c)) out.set(r, c, true);
  return out;
}

inline GeneratingMatrixSet upper_left(const GeneratingMatrixSet& g, std::size_t u, std::size_t v) {
  GeneratingMatrixSet out = g;
  out.rows = u;
  out.cols = v;
  for (auto& m : out.matrices) m = upper_left(m, u, v);
  return out;
}

/// t' = sum of (deg p - 1) over the given polynomials.
inline std::size_t niederreiter_t_value(const std::vector<Gf2Poly>& polys) {
  std::size_t t = 0;
  for (const auto& p : polys) t += static_cast<std::size_t>(p.degree()) - 1;
  return t;
}

/// Order-2 t-value s + 2t' of an interlaced Niederreiter set; t' for a plain one.
inline std::size_t construction_t_bound(const GeneratingMatrixSet& g) {
  switch (g.kind) {
    case MatrixKind::niederreiter: return niederreiter_t_value(g.polys);
    case MatrixKind::interlaced: return g.dimension() + 2 * niederreiter_t_value(g.polys);
    case MatrixKind::custom: break;
  }
  throw InvalidInput("no t-value bound is known for custom matrix sets");
}

}  // namespace hods
