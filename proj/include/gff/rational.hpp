#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace gff {

// Exact arbitrary-precision rational. boost keeps gcd-reduced form with
// positive denominator, which matches the canonical form we need.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

// Renders "p" for integers, "p/q" otherwise.
inline std::string rat_to_string(const Rational& q) {
    if (rat_den(q) == 1) return rat_num(q).str();
    return rat_num(q).str() + "/" + rat_den(q).str();
}

// Parses "p" or "p/q" with optional leading sign. Returns nullopt on malformed input.
std::optional<Rational> rat_parse(const std::string& text);

// True iff |q| is the square of a rational; returns the positive root.
std::optional<Rational> rat_sqrt(const Rational& q);

}  // namespace gff
