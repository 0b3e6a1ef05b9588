#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace charlab {

using Rational = boost::rational<std::int64_t>;

// Parses "3/8", "0.125", "1e-2" style literals exactly. Decimal input is read
// digit by digit so "0.1" is 1/10, not the nearest double.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// ceil(r * n) for non-negative r.
std::int64_t ceil_mul(const Rational& r, std::int64_t n);

Rational pow(const Rational& base, unsigned exponent);

}  // namespace charlab
