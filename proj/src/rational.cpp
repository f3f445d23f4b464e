#include "votekit/rational.hpp"

#include "votekit/error.hpp"

#include <cctype>
#include <limits>

namespace votekit {

Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  auto digits = [&](std::string& out) {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      out.push_back(text[pos]);
      ++pos;
    }
    return pos > start;
  };

  std::string whole;
  std::string frac;
  const bool has_whole = digits(whole);
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    if (!digits(frac) && !has_whole) throw ParseError(pos, "expected digits");
    if (pos != text.size()) throw ParseError(pos, "unexpected character in decimal");
    BigInt num(whole.empty() ? std::string("0") : whole);
    BigInt den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    return Rational(num, den);
  }
  if (!has_whole) throw ParseError(pos, "expected a non-negative number");
  if (pos == text.size()) return Rational(BigInt(whole));
  if (text[pos] != '/') throw ParseError(pos, "unexpected character in number");
  ++pos;
  std::string den_text;
  if (!digits(den_text)) throw ParseError(pos, "expected denominator");
  if (pos != text.size()) throw ParseError(pos, "unexpected character after denominator");
  BigInt den(den_text);
  if (den == 0) throw ParseError(pos, "zero denominator");
  return Rational(BigInt(whole), den);
}

std::string to_fraction_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_decimal_string(const Rational& r, int digits) {
  const bool negative = r < 0;
  const Rational a = negative ? Rational(-r) : r;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half away from zero: floor(a * scale + 1/2)
  const BigInt num = numerator(a) * scale * 2 + denominator(a);
  const BigInt den = denominator(a) * 2;
  const BigInt scaled = num / den;
  std::string s = scaled.str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
  }
  if (negative && scaled != 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::int64_t to_int64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw Error(Errc::kTooLarge, "integer exceeds 64-bit range: " + value.str());
  }
  return value.convert_to<std::int64_t>();
}

}  // namespace votekit
