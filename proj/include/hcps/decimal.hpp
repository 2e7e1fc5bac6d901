#pragma once
// Exact decimal helpers over boost::rational. Used wherever a value is
// reported at a fixed number of decimals (CRR, LoA, reputation).

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// boost::rational's mixed integer == recurses forever under C++20 rewritten
// comparisons. Exact non-template overloads, found by ADL, win resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == rational<std::int64_t>(b); }
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) { return a == rational<std::int64_t>(b); }
}  // namespace boost

namespace hcps {

using Rational = boost::rational<std::int64_t>;

// Parses "-12", "4.5", "0.125". Throws hcps::Error(Errc::syntax) otherwise.
Rational parse_decimal(std::string_view text);

// Rounds half away from zero to `digits` decimals.
Rational round_half_up(const Rational& value, int digits);

// Rounded value printed with exactly `digits` decimals, e.g. 46/55 -> "0.84".
std::string format_fixed(const Rational& value, int digits);

// Shortest exact form for terminating decimals ("4.5", "20", "0.125");
// anything else is rounded to 6 decimals.
std::string to_decimal_string(const Rational& value);

double to_double(const Rational& value);

// Nearest rational with denominator 10^digits (half-up); for doubles coming
// from user input such as ratings.
Rational from_double(double value, int digits = 6);

}  // namespace hcps
