#pragma once

#include "fel/similitude.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace fel {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a finite decimal such as "0.625" or "-1.5e-2" exactly.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// Similitude x -> r U x + a with rational r, U and a.
struct ExactSimilitude {
    int d = 0;
    Rational r{1};
    std::vector<Rational> U;  // row-major
    std::vector<Rational> a;

    static ExactSimilitude identity(int d);
    Similitude to_double() const;
    /// Canonical text form; equal keys iff equal maps.
    std::string key() const;
    bool is_orthogonal() const;

    bool operator==(const ExactSimilitude&) const = default;
};

ExactSimilitude compose(const ExactSimilitude& g, const ExactSimilitude& h);
std::vector<Rational> apply(const ExactSimilitude& g, const std::vector<Rational>& x);

}  // namespace fel
