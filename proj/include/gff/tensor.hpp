#pragma once

#include "gff/matrix.hpp"
#include "gff/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace gff {

using Coords = std::vector<std::string>;

ScalarField sf_zero(const Coords& coords);
ScalarField sf_one(const Coords& coords);

// Vector field in the coordinate frame.
struct VectorField {
    Coords coords;
    std::vector<ScalarField> comp;

    VectorField() = default;
    explicit VectorField(const Coords& c) : coords(c), comp(c.size(), sf_zero(c)) {}

    std::size_t dim() const { return coords.size(); }
    bool is_zero() const;
    // Directional derivative X(f).
    ScalarField apply(const ScalarField& f) const;

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField operator-() const;
    VectorField operator*(const ScalarField& f) const;
    bool operator==(const VectorField& o) const;
};

VectorField coordinate_frame(const Coords& coords, std::size_t i);

// Fully antisymmetric covariant tensor; only strictly increasing index tuples
// are stored.
struct PForm {
    Coords coords;
    std::size_t degree = 1;
    std::map<std::vector<std::size_t>, ScalarField> comp;

    PForm() = default;
    PForm(const Coords& c, std::size_t p) : coords(c), degree(p) {}

    // Component for an increasing tuple; zero when absent.
    ScalarField at(const std::vector<std::size_t>& idx) const;
    void set(const std::vector<std::size_t>& idx, const ScalarField& v);
    bool is_zero() const;

    // Multilinear alternating evaluation; args.size() must equal degree.
    ScalarField eval(const std::vector<VectorField>& args) const;
    ScalarField eval(const VectorField& x) const;
    ScalarField eval(const VectorField& x, const VectorField& y) const;

    PForm operator+(const PForm& o) const;
    PForm operator-(const PForm& o) const;
    PForm operator*(const ScalarField& f) const;
    bool operator==(const PForm& o) const;
};

// (1,1)-tensor field: comp[k][j] is the k-th component of the image of the
// j-th frame vector (column convention).
struct TensorField11 {
    Coords coords;
    std::vector<std::vector<ScalarField>> comp;

    TensorField11() = default;
    explicit TensorField11(const Coords& c)
        : coords(c), comp(c.size(), std::vector<ScalarField>(c.size(), sf_zero(c))) {}
    static TensorField11 identity(const Coords& c);

    std::size_t dim() const { return coords.size(); }
    VectorField apply(const VectorField& x) const;
    VectorField column(std::size_t j) const;
    TensorField11 compose(const TensorField11& o) const;  // this after o
    SquareMatrix as_matrix() const;
    bool is_zero() const;

    TensorField11 operator+(const TensorField11& o) const;
    TensorField11 operator-(const TensorField11& o) const;
    TensorField11 operator*(const ScalarField& f) const;
    bool operator==(const TensorField11& o) const;
};

// Symmetric or general (0,2)-tensor field.
struct BilinearForm {
    Coords coords;
    std::vector<std::vector<ScalarField>> comp;

    BilinearForm() = default;
    explicit BilinearForm(const Coords& c)
        : coords(c), comp(c.size(), std::vector<ScalarField>(c.size(), sf_zero(c))) {}

    std::size_t dim() const { return coords.size(); }
    ScalarField eval(const VectorField& x, const VectorField& y) const;
    SquareMatrix as_matrix() const;
    bool is_zero() const;

    BilinearForm operator+(const BilinearForm& o) const;
    BilinearForm operator-(const BilinearForm& o) const;
    bool operator==(const BilinearForm& o) const;
};

// (1,2)-tensor field, comp[k][i][j] = k-th component of T(e_i, e_j).
struct Tensor12 {
    Coords coords;
    std::vector<std::vector<std::vector<ScalarField>>> comp;

    Tensor12() = default;
    explicit Tensor12(const Coords& c)
        : coords(c),
          comp(c.size(), std::vector<std::vector<ScalarField>>(
                             c.size(), std::vector<ScalarField>(c.size(), sf_zero(c)))) {}

    VectorField eval(const VectorField& x, const VectorField& y) const;
    bool is_zero() const;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);

// Exterior derivative with the 1/(p+1) normalization, so that for 1-forms
// d\omega(X,Y) = (X\omega(Y) - Y\omega(X) - \omega([X,Y]))/2.
PForm exterior_derivative(const PForm& omega);
PForm exterior_derivative_function(const ScalarField& f);

BilinearForm lie_derivative(const BilinearForm& t, const VectorField& x);
TensorField11 lie_derivative(const TensorField11& t, const VectorField& x);
PForm lie_derivative_oneform(const PForm& eta, const VectorField& x);

// Nijenhuis torsion of a (1,1)-tensor field:
// N(X,Y) = phi^2[X,Y] + [phiX,phiY] - phi[phiX,Y] - phi[X,phiY].
Tensor12 nijenhuis_torsion(const TensorField11& phi);

}  // namespace gff
