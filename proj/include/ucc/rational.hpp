#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace ucc {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Parses "p", "-p", or "p/q" (q > 0 after normalization). Throws
// std::invalid_argument on malformed input.
Rat parse_rat(std::string_view s);

// "p" or "p/q", canonical (gcd-reduced, denominator positive).
std::string rat_str(const Rat& r);

double rat_double(const Rat& r);

// Largest integer n with n <= r.
Int rat_floor(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// 2^-i as an exact rational, i >= 0.
Rat pow2_neg(int i);

}  // namespace ucc
