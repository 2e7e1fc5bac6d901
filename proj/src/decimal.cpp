#include "hcps/decimal.hpp"

#include <cmath>
#include <cstdlib>

#include "hcps/error.hpp"

namespace hcps {

namespace {

std::int64_t pow10(int digits) {
  std::int64_t p = 1;
  for (int i = 0; i < digits; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  bool any_digit = false;
  bool in_fraction = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !in_fraction) {
      in_fraction = true;
      continue;
    }
    if (c < '0' || c > '9') throw Error(Errc::syntax, "malformed decimal '" + std::string(text) + "'");
    numerator = numerator * 10 + (c - '0');
    if (in_fraction) denominator *= 10;
    any_digit = true;
  }
  if (!any_digit) throw Error(Errc::syntax, "malformed decimal '" + std::string(text) + "'");
  return Rational(negative ? -numerator : numerator, denominator);
}

Rational round_half_up(const Rational& value, int digits) {
  const std::int64_t scale = pow10(digits);
  const Rational scaled = value * scale;
  const std::int64_t num = std::abs(scaled.numerator());
  const std::int64_t den = scaled.denominator();
  std::int64_t q = num / den;
  if ((num % den) * 2 >= den) ++q;
  return Rational(scaled.numerator() < 0 ? -q : q, scale);
}

std::string format_fixed(const Rational& value, int digits) {
  const Rational r = round_half_up(value, digits);
  const std::int64_t scale = pow10(digits);
  const std::int64_t units = (r * scale).numerator();
  const std::int64_t magnitude = std::abs(units);
  std::string out = units < 0 ? "-" : "";
  out += std::to_string(magnitude / scale);
  if (digits > 0) {
    std::string frac = std::to_string(magnitude % scale);
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - frac.size(), '0') + frac;
  }
  return out;
}

std::string to_decimal_string(const Rational& value) {
  std::int64_t den = value.denominator();
  int digits = 0;
  while (den % 10 == 0) den /= 10, ++digits;
  while (den % 2 == 0) den /= 2, ++digits;
  while (den % 5 == 0) den /= 5, ++digits;
  if (den != 1 || digits > 6) digits = 6;
  // smallest digit count that is still exact
  std::string out = format_fixed(value, digits);
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return out;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

Rational from_double(double value, int digits) {
  const std::int64_t scale = pow10(digits);
  return Rational(static_cast<std::int64_t>(std::llround(value * static_cast<double>(scale))), scale);
}

}  // namespace hcps
