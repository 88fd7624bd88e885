#pragma once

#include "gff/polynomial.hpp"
#include "gff/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace gff {

// Exact rational function: quotient of multivariate polynomials over the
// chart coordinates. Canonical form keeps a content-reduced, sign-normalized
// denominator; equality is decided by cross-multiplication so partial gcd
// reduction never changes a verdict.
class ScalarField {
public:
    ScalarField() = default;  // zero over no variables
    explicit ScalarField(Polynomial num);
    ScalarField(Polynomial num, Polynomial den);
    static ScalarField constant(std::vector<std::string> vars, const Rational& c);
    static ScalarField variable(const std::vector<std::string>& vars, const std::string& name);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const std::vector<std::string>& vars() const { return num_.vars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;  // requires is_constant

    ScalarField operator+(const ScalarField& o) const;
    ScalarField operator-(const ScalarField& o) const;
    ScalarField operator*(const ScalarField& o) const;
    ScalarField operator/(const ScalarField& o) const;  // throws on identically-zero divisor
    ScalarField operator-() const;
    ScalarField pow(unsigned e) const;

    // Cross-multiplied polynomial identity.
    bool operator==(const ScalarField& o) const;
    bool operator!=(const ScalarField& o) const { return !(*this == o); }

    ScalarField derivative(const std::string& name) const;
    // Throws std::domain_error when the denominator vanishes at the point.
    Rational evaluate(const std::map<std::string, Rational>& point) const;

    std::string to_string() const;

private:
    Polynomial num_;
    Polynomial den_;  // never identically zero; constant 1 whenever possible

    void canonicalize();
};

}  // namespace gff
