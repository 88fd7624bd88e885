#pragma once

#include "gff/scalar.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gff {

// Dense square matrix of exact scalar fields.
class SquareMatrix {
public:
    SquareMatrix() = default;
    SquareMatrix(std::size_t n, const ScalarField& fill)
        : n_(n), a_(n, std::vector<ScalarField>(n, fill)) {}
    static SquareMatrix zero(std::size_t n, std::vector<std::string> vars);
    static SquareMatrix identity(std::size_t n, std::vector<std::string> vars);

    std::size_t size() const { return n_; }
    ScalarField& at(std::size_t i, std::size_t j) { return a_[i][j]; }
    const ScalarField& at(std::size_t i, std::size_t j) const { return a_[i][j]; }

    bool is_symmetric() const;

private:
    std::size_t n_ = 0;
    std::vector<std::vector<ScalarField>> a_;
};

// Exact determinant (cofactor expansion; matrices here are small).
ScalarField matrix_det(const SquareMatrix& m);

// det(m - lambda*I), expanded over the chart coordinates plus the auxiliary
// variable. Entries must have constant denominators.
Polynomial matrix_char_poly(const SquareMatrix& m, const std::string& lambda_name = "lambda");

// Adjugate-over-determinant inverse. Throws std::domain_error when the
// matrix is identically singular.
SquareMatrix matrix_inverse(const SquareMatrix& m);

// Generic rank over the rational-function field.
std::size_t matrix_rank(const SquareMatrix& m);

// Counts of positive/negative diagonal signs after exact congruence
// diagonalization of a symmetric matrix evaluated at a rational point.
// Throws std::domain_error when the evaluated matrix is singular.
std::pair<int, int> signature_at_point(const SquareMatrix& m,
                                       const std::map<std::string, Rational>& point);

}  // namespace gff
