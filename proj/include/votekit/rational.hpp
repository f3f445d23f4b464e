#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace votekit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "7", "7/12" or "0.65" (converted exactly, 0.65 -> 13/20).
// Throws ParseError on malformed input; negative values are rejected.
Rational parse_rational(std::string_view text);

// "7/12", or "3" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

// Fixed-point rendering with `digits` places after the decimal point,
// rounded half away from zero, computed exactly.
std::string to_decimal_string(const Rational& r, int digits = 7);

double to_double(const Rational& r);

BigInt factorial(int n);

// Checked conversion; throws Error(kTooLarge) when the value does not fit.
std::int64_t to_int64(const BigInt& value);

}  // namespace votekit
