#pragma once

// Text formats: point-set CSV (decimal and bit-exact hex) and matrix sets.

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hods/discrepancy.hpp"
#include "hods/error.hpp"
#include "hods/genmat.hpp"
#include "hods/points.hpp"

namespace hods {

enum class PointFormat { csv_decimal, csv_hex };

inline PointFormat parse_point_format(const std::string& name) {
  if (name == "csv-decimal") return PointFormat::csv_decimal;
  if (name == "csv-hex") return PointFormat::csv_hex;
  throw InvalidInput("unknown point format '" + name + "'");
}

/// csv-decimal: header x1..xs, one point per row, 17 significant digits.
/// csv-hex: a "# scale=a/b" line, then x<j>_num,x<j>_w column pairs with the
/// numerator in hex, so that the file reproduces the set bit for bit.
inline void write_points(std::ostream& os, const PointSet& p, PointFormat format) {
  const std::size_t s = p.dimension();
  if (format == PointFormat::csv_decimal) {
    for (std::size_t j = 0; j < s; ++j) os << (j ? "," : "") << 'x' << j + 1;
    os << '\n';
    for (std::size_t n = 0; n < p.size(); ++n) {
      for (std::size_t j = 0; j < s; ++j) os << (j ? "," : "") << format_double(p.value(n, j));
      os << '\n';
    }
    return;
  }
  os << "# scale=" << p.first_axis_scale().num << '/' << p.first_axis_scale().den << '\n';
  for (std::size_t j = 0; j < s; ++j) os << (j ? "," : "") << 'x' << j + 1 << "_num,x" << j + 1 << "_w";
  os << '\n';
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < s; ++j)
      os << (j ? "," : "") << "0x" << std::hex << p.numerator(n, j) << std::dec << ',' << p.precision();
    os << '\n';
  }
}

/// Parses the csv-hex format written by write_points.
inline PointSet read_points_hex(std::istream& is) {
  std::string line;
  AxisScale scale{};
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# scale=", 0) == 0) {
      const auto slash = line.find('/');
      if (slash == std::string::npos) throw InvalidInput("bad scale line: " + line);
      scale = {std::stoull(line.substr(8, slash - 8)), std::stoull(line.substr(slash + 1))};
      continue;
    }
    if (line[0] == '#') continue;
    header.push_back(line);
    break;
  }
  if (header.empty()) throw InvalidInput("csv-hex input has no header");
  const std::size_t columns = static_cast<std::size_t>(std::count(header[0].begin(), header[0].end(), ',')) + 1;
  if (columns % 2 != 0) throw InvalidInput("csv-hex header must list (num, w) column pairs");
  const std::size_t s = columns / 2;

  std::vector<std::vector<std::uint64_t>> rows;
  unsigned precision = 0;
  bool have_precision = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns) throw InvalidInput("csv-hex row has " + std::to_string(cells.size()) + " cells");
    std::vector<std::uint64_t> nums(s);
    for (std::size_t j = 0; j < s; ++j) {
      const std::string& num = cells[2 * j];
      if (num.rfind("0x", 0) != 0) throw InvalidInput("csv-hex numerators need a 0x prefix: " + num);
      nums[j] = std::stoull(num.substr(2), nullptr, 16);
      const auto w = static_cast<unsigned>(std::stoul(cells[2 * j + 1]));
      if (have_precision && w != precision) throw InvalidInput("csv-hex coordinates must share one precision");
      precision = w;
      have_precision = true;
    }
    rows.push_back(std::move(nums));
  }
  if (rows.empty()) throw InvalidInput("csv-hex input has no points");
  PointSet out(s, precision, scale.is_identity() ? Provenance::net : Provenance::propagated);
  for (const auto& r : rows) out.push_back(r);
  if (!scale.is_identity()) out.set_first_axis_scale(scale);
  return out;
}

/// Matrices in the 0/1 row text format, separated by "# j=<index>" lines.
inline void write_matrix_set(std::ostream& os, const GeneratingMatrixSet& g) {
  for (std::size_t j = 0; j < g.dimension(); ++j) {
    os << "# j=" << j + 1 << '\n' << g[j].to_text();
  }
}

inline GeneratingMatrixSet read_matrix_set(std::istream& is) {
  std::vector<BitMatrix> ms;
  std::string block, line;
  auto flush = [&] {
    if (!block.empty()) ms.push_back(BitMatrix::from_text(block));
    block.clear();
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') {
      flush();
      continue;
    }
    if (line.empty()) {
      flush();
      continue;
    }
    block += line + '\n';
  }
  flush();
  return GeneratingMatrixSet::custom(std::move(ms));
}

}  // namespace hods
