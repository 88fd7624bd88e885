#pragma once

#include "gff/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gff {

// Graded lexicographic order on exponent vectors (same length assumed).
struct GradedLexLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

// Multivariate polynomial with exact rational coefficients over a fixed,
// ordered list of variable names. Zero coefficients are never stored, so two
// polynomials over the same variables are equal iff their term maps are equal.
class Polynomial {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, Rational, GradedLexLess>;

    Polynomial() = default;  // zero polynomial over no variables
    explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static Polynomial constant(std::vector<std::string> vars, const Rational& c);
    static Polynomial variable(const std::vector<std::string>& vars, const std::string& name);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial (zero included).
    Rational constant_value() const;

    int total_degree() const;  // -1 for the zero polynomial
    // Largest exponent of one variable across all terms.
    int degree_in(const std::string& name) const;
    // Variables that actually occur.
    std::vector<std::string> support() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Rational& c) const;
    Polynomial pow(unsigned e) const;

    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial derivative(const std::string& name) const;
    Rational evaluate(const std::map<std::string, Rational>& point) const;

    // Positive gcd of all coefficients (0 for the zero polynomial).
    Rational content() const;
    // Sign of the graded-lex leading coefficient: -1, 0, +1.
    int leading_sign() const;

    // Exact quotient, or nullopt when d does not divide this.
    std::optional<Polynomial> divide_exact(const Polynomial& d) const;

    // Reinterprets over a superset of the current variables.
    Polynomial with_vars(const std::vector<std::string>& newvars) const;

    // Canonical rendering, graded-lex descending, e.g. "-4*y1^2 + 1/2".
    std::string to_string() const;

    void add_term(const Exponents& e, const Rational& c);

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    std::size_t var_index(const std::string& name) const;  // throws on unknown name
};

}  // namespace gff
