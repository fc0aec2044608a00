#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cubefix {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3/4", "0.25", "1e-3", "-2", "2.5e-1".
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

// q^e for integer e >= 0
Rational pow(const Rational& q, unsigned e);

// true iff count >= q * total, exactly
bool at_least_fraction(long long count, const Rational& q, long long total);

}  // namespace cubefix
