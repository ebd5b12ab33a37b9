#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace hods {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// numerator / 2^precision as an exact rational.
inline Rational dyadic_rational(std::uint64_t numerator, unsigned precision) {
  return Rational(BigInt(numerator), BigInt(1) << precision);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace hods
