#pragma once

// Weights on dual vectors, enumeration of the dual set of a digital net,
// minimal weights and t-values.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hods/error.hpp"
#include "hods/genmat.hpp"

namespace hods {

inline constexpr unsigned kDefaultBudgetBits = 26;
inline constexpr unsigned kInfiniteWeight = std::numeric_limits<unsigned>::max();

/// Enumeration budget in bits: HODS_BUDGET_BITS when set, else 26.
inline unsigned default_budget_bits() {
  if (const char* env = std::getenv("HODS_BUDGET_BITS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 62) return static_cast<unsigned>(v);
  }
  return kDefaultBudgetBits;
}

struct EnumerationOptions {
  unsigned budget_bits = default_budget_bits();
  unsigned threads = 1;
};

/// NRT weight: bit length of k.
constexpr unsigned mu1(std::uint64_t k) { return static_cast<unsigned>(std::bit_width(k)); }

/// Sum of the positions of the two most significant one bits (one position
/// if k is a power of two, 0 for k = 0).
constexpr unsigned mu2(std::uint64_t k) {
  const unsigned a1 = mu1(k);
  if (a1 == 0) return 0;
  return a1 + mu1(k ^ (std::uint64_t{1} << (a1 - 1)));
}

inline unsigned mu1(std::span<const std::uint64_t> k) {
  unsigned w = 0;
  for (auto v : k) w += mu1(v);
  return w;
}

inline unsigned mu2(std::span<const std::uint64_t> k) {
  unsigned w = 0;
  for (auto v : k) w += mu2(v);
  return w;
}

struct DualElement {
  std::vector<std::uint64_t> k;
  unsigned mu1 = 0;
  unsigned mu2 = 0;

  explicit DualElement(std::vector<std::uint64_t> ks)
      : k(std::move(ks)), mu1(hods::mu1(std::span<const std::uint64_t>(k))), mu2(hods::mu2(std::span<const std::uint64_t>(k))) {}
};

/// Kernel basis of k -> sum_j C_j^T k_j for R x m matrices C_j.
///
/// A vector packs k_j into bits [jR, (j+1)R); bit i of k_j is the digit
/// kappa_i, which meets row i+1 of C_j.
struct DualBasis {
  std::size_t dimension = 0;  // s
  std::size_t digits = 0;     // R
  std::vector<std::uint64_t> vectors;

  std::size_t rank() const { return vectors.size(); }

  std::vector<std::uint64_t> unpack(std::uint64_t packed) const {
    std::vector<std::uint64_t> k(dimension);
    const auto w = static_cast<unsigned>(digits);
    for (std::size_t j = 0; j < dimension; ++j) k[j] = (packed >> (j * digits)) & low_mask(w);
    return k;
  }

  std::uint64_t pack(std::span<const std::uint64_t> k) const {
    if (k.size() != dimension) throw InvalidInput("dual vector dimension mismatch");
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < dimension; ++j) {
      if ((k[j] & ~low_mask(static_cast<unsigned>(digits))) != 0)
        throw InvalidInput("dual vector component exceeds 2^R");
      v |= k[j] << (j * digits);
    }
    return v;
  }

 private:
  static constexpr std::uint64_t low_mask(unsigned bits) {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  }
};

inline DualBasis dual_set_basis(const GeneratingMatrixSet& g) {
  const std::size_t s = g.dimension();
  const std::size_t r = g.rows;
  if (s == 0) throw InvalidInput("dual_set_basis needs at least one matrix");
  if (r * s > 64)
    throw BudgetExceeded("dual vectors need R*s = " + std::to_string(r * s) + " bits; one 64-bit word is supported");
  BitMatrix map(g.cols, r * s);
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t l = 0; l < g.cols; ++l)
        if (g[j].get(k, l)) map.set(l, j * r + k, true);
  DualBasis out{s, r, {}};
  for (const auto& v : map.kernel_basis()) out.vectors.push_back(v.words().empty() ? 0 : v.words()[0]);
  return out;
}

/// Direct membership test: sum_j C_j^T k_j == 0.
inline bool is_dual_member(const GeneratingMatrixSet& g, std::span<const std::uint64_t> k) {
  if (k.size() != g.dimension()) throw InvalidInput("dual vector dimension mismatch");
  if (g.cols > 64) throw InvalidInput("is_dual_member supports at most 64 columns");
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (g.rows < 64 && (k[j] >> g.rows) != 0) throw InvalidInput("dual vector component exceeds 2^R");
    for (std::uint64_t bits = k[j]; bits != 0; bits &= bits - 1) acc ^= g[j].row_word(std::countr_zero(bits));
  }
  return acc == 0;
}

struct MinimalWeights {
  unsigned rho1 = kInfiniteWeight;
  unsigned rho2 = kInfiniteWeight;
};

namespace detail {

inline void require_enumerable(const DualBasis& basis, const EnumerationOptions& opt) {
  if (basis.rank() > opt.budget_bits)
    throw BudgetExceeded("dual set has 2^" + std::to_string(basis.rank()) + " elements; budget is 2^" +
                         std::to_string(opt.budget_bits) + " (HODS_BUDGET_BITS)");
}

/// Calls visit(packed) for every kernel element with Gray-code index in
/// [lo, hi), index 0 (the zero vector) excluded.
template <typename Visit>
void walk_gray(const DualBasis& basis, std::uint64_t lo, std::uint64_t hi, Visit&& visit) {
  if (lo >= hi) return;
  std::uint64_t v = 0;
  const std::uint64_t g = lo ^ (lo >> 1);
  for (std::uint64_t bits = g; bits != 0; bits &= bits - 1) v ^= basis.vectors[std::countr_zero(bits)];
  if (lo != 0) visit(v);
  for (std::uint64_t i = lo + 1; i < hi; ++i) {
    v ^= basis.vectors[std::countr_zero(i)];
    visit(v);
  }
}

}  // namespace detail

/// Minimum of mu1 and mu2 over the nonzero dual set, by exhaustive Gray-code
/// walk. Both are kInfiniteWeight when the dual set is {0}.
inline MinimalWeights minimal_weights(const DualBasis& basis, const EnumerationOptions& opt = {}) {
  detail::require_enumerable(basis, opt);
  const std::uint64_t total = std::uint64_t{1} << basis.rank();
  const std::size_t s = basis.dimension;
  const std::size_t r = basis.digits;
  const std::uint64_t mask = r >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;

  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    MinimalWeights w;
    detail::walk_gray(basis, lo, hi, [&](std::uint64_t v) {
      unsigned w1 = 0, w2 = 0;
      for (std::size_t j = 0; j < s; ++j) {
        const std::uint64_t k = (v >> (j * r)) & mask;
        w1 += mu1(k);
        w2 += mu2(k);
      }
      w.rho1 = std::min(w.rho1, w1);
      w.rho2 = std::min(w.rho2, w2);
    });
    return w;
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  if (threads == 1) return scan(0, total);
  std::vector<MinimalWeights> parts(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = total / threads * t;
    const std::uint64_t hi = t + 1 == threads ? total : total / threads * (t + 1);
    pool.emplace_back([&, t, lo, hi] { parts[t] = scan(lo, hi); });
  }
  for (auto& th : pool) th.join();
  MinimalWeights w;
  for (const auto& p : parts) {
    w.rho1 = std::min(w.rho1, p.rho1);
    w.rho2 = std::min(w.rho2, p.rho2);
  }
  return w;
}

/// Every dual element including 0, in Gray-code order.
inline std::vector<DualElement> dual_elements(const DualBasis& basis, const EnumerationOptions& opt = {}) {
  detail::require_enumerable(basis, opt);
  std::vector<DualElement> out;
  out.emplace_back(std::vector<std::uint64_t>(basis.dimension, 0));
  detail::walk_gray(basis, 0, std::uint64_t{1} << basis.rank(),
                    [&](std::uint64_t v) { out.emplace_back(basis.unpack(v)); });
  return out;
}

inline constexpr std::size_t kMaxOrder2SearchDimension = 3;
inline constexpr std::size_t kMaxOrder2SearchLevel = 8;

namespace detail {

/// Echelon basis of up to 64 vectors keyed by leading bit.
struct RowSpace {
  std::array<std::uint64_t, 64> by_lead{};

  /// False if v is already in the span.
  bool insert(std::uint64_t v) {
    while (v != 0) {
      const int lead = 63 - std::countl_zero(v);
      if (by_lead[lead] == 0) {
        by_lead[lead] = v;
        return true;
      }
      v ^= by_lead[lead];
    }
    return false;
  }
};

inline bool order2_search(const GeneratingMatrixSet& g, std::size_t j, long budget, const RowSpace& space) {
  if (j == g.dimension()) return true;
  const auto rows = static_cast<long>(g.rows);
  const BitMatrix& c = g[j];
  // No rows from this coordinate.
  if (!order2_search(g, j + 1, budget, space)) return false;
  for (long i1 = 1; i1 <= std::min(rows, budget); ++i1) {
    // Only row i1: weight i1.
    RowSpace single = space;
    if (!single.insert(c.row_word(static_cast<std::size_t>(i1 - 1)))) return false;
    if (!order2_search(g, j + 1, budget - i1, single)) return false;
    // Rows 1..i2 together with i1: the two largest indices are i1 > i2.
    RowSpace prefix = single;
    for (long i2 = 1; i2 < i1 && i1 + i2 <= budget; ++i2) {
      if (!prefix.insert(c.row_word(static_cast<std::size_t>(i2 - 1)))) return false;
      if (!order2_search(g, j + 1, budget - i1 - i2, prefix)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Row-independence test for an order-2 digital (t, m, s)-net with 2m x m
/// matrices. For each coordinate only the maximal selections matter: none,
/// a single row i1, or rows {1..i2} together with i1 > i2, weighted i1 (+ i2).
inline bool verify_order2_net(const GeneratingMatrixSet& g, std::size_t t) {
  const std::size_t m = g.cols;
  if (g.rows != 2 * m) throw InvalidInput("verify_order2_net needs 2m x m matrices");
  if (m > 64) throw InvalidInput("verify_order2_net supports m <= 64");
  if (g.dimension() > kMaxOrder2SearchDimension || m > kMaxOrder2SearchLevel)
    throw BudgetExceeded("order-2 row search is limited to s <= 3 and m <= 8");
  if (t > 2 * m) throw InvalidInput("order-2 t-values lie in [0, 2m]");
  return detail::order2_search(g, 0, static_cast<long>(2 * m - t), detail::RowSpace{});
}

/// Smallest t the minimal weight certifies: order 1 uses rho1 > m - t,
/// order 2 uses rho2 > 2m - t. m is the column count of the matrices.
inline std::size_t t_from_weights(const MinimalWeights& w, std::size_t m, int order) {
  if (order != 1 && order != 2) throw InvalidInput("order must be 1 or 2");
  const long top = order == 1 ? static_cast<long>(m) : static_cast<long>(2 * m);
  const unsigned rho = order == 1 ? w.rho1 : w.rho2;
  if (rho == kInfiniteWeight) return 0;
  return static_cast<std::size_t>(std::clamp(top - static_cast<long>(rho) + 1, 0L, top));
}

inline std::size_t exact_t_value(const GeneratingMatrixSet& g, int order, const EnumerationOptions& opt = {}) {
  if (order != 1 && order != 2) throw InvalidInput("order must be 1 or 2");
  return t_from_weights(minimal_weights(dual_set_basis(g), opt), g.cols, order);
}

}  // namespace hods
