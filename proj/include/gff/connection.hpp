#pragma once

#include "gff/structure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gff {

using SamplePointMap = std::map<std::string, Rational>;

// Levi-Civita connection: gamma[k][i][j] = Gamma^k_{ij}, symmetric in (i,j).
struct Connection {
    Coords coords;
    std::vector<std::vector<std::vector<ScalarField>>> gamma;

    std::size_t dim() const { return coords.size(); }
    const ScalarField& at(std::size_t k, std::size_t i, std::size_t j) const {
        return gamma[k][i][j];
    }
};

// Throws std::domain_error when det(g) is identically zero.
Connection levi_civita(const BilinearForm& g);

// nabla_x y for arbitrary vector fields.
VectorField covariant_vector(const Connection& c, const VectorField& x, const VectorField& y);

// (nabla_i Y)^k as comp[k][i].
TensorField11 covariant_derivative(const VectorField& y, const Connection& c);
// (nabla_i omega)_j as comp[i][j]; omega must be a 1-form.
BilinearForm covariant_derivative_oneform(const PForm& omega, const Connection& c);
// [i] = nabla_{e_i} T.
std::vector<TensorField11> covariant_derivative(const TensorField11& t, const Connection& c);
std::vector<BilinearForm> covariant_derivative(const BilinearForm& t, const Connection& c);

// R(X,Y,Z) = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z and the
// (0,4) lowering R(X,Y,Z,W) = g(R(Z,W,Y),X).
struct CurvatureTensor {
    Coords coords;
    // r13[d][a][b][c] = d-th component of R(e_a, e_b, e_c).
    std::vector<std::vector<std::vector<std::vector<ScalarField>>>> r13;
    // r04[i][j][k][l] = R(e_i, e_j, e_k, e_l).
    std::vector<std::vector<std::vector<std::vector<ScalarField>>>> r04;

    std::size_t dim() const { return coords.size(); }
    VectorField eval13(const VectorField& x, const VectorField& y, const VectorField& z) const;
    ScalarField eval04(const VectorField& x, const VectorField& y, const VectorField& z,
                       const VectorField& w) const;
    // g(R(a,b,c), e) without re-lowering: eval04 rearranged to the (1,3) slot order.
    ScalarField pair(const VectorField& a, const VectorField& b, const VectorField& c,
                     const VectorField& e, const BilinearForm& g) const;
};

// Throws std::logic_error if the computed r04 violates any of the four
// curvature symmetries (internal self-check).
CurvatureTensor riemann_tensor(const Connection& c, const BilinearForm& g);

// Identity battery on frame vectors: the general Koszul-type derivative of
// phi, its almost-S specialization, nabla_{xi} phi = 0 and nabla_{xi} xi = 0,
// nabla_X xi_a = -eps_a phi X - phi h_a X, the S-form of nabla phi, the same
// in terms of the fundamental 2-form, and the mixed two-argument version.
Verdicts check_s_identities(const GffStructure& s, const Connection& c);

// A 2-plane given by a rational point and two constant vectors at that point.
struct PlaneSpec {
    SamplePointMap point;
    std::vector<Rational> x;
    std::vector<Rational> y;
};

// All structure/curvature data evaluated at one rational point.
struct PointData {
    std::size_t n = 0;  // chart dimension
    std::size_t r = 0;
    std::vector<std::vector<Rational>> g;
    std::vector<std::vector<Rational>> phi;
    std::vector<std::vector<Rational>> eta;  // eta[a][i]
    std::vector<std::vector<Rational>> xi;   // xi[a][i]
    std::vector<Rational> epsilon;
    std::vector<std::vector<std::vector<std::vector<Rational>>>> r04;

    Rational metric(const std::vector<Rational>& x, const std::vector<Rational>& y) const;
    std::vector<Rational> apply_phi(const std::vector<Rational>& x) const;
    Rational eta_at(std::size_t a, const std::vector<Rational>& x) const;
    Rational eta_bar(const std::vector<Rational>& x) const;
    Rational curv(const std::vector<Rational>& x, const std::vector<Rational>& y,
                  const std::vector<Rational>& z, const std::vector<Rational>& w) const;
};

PointData evaluate_at(const GffStructure& s, const CurvatureTensor& rt, const SamplePointMap& p);

// K = R(X,Y,X,Y)/Delta. Throws std::invalid_argument on linearly dependent
// spans and std::domain_error on a degenerate plane (Delta = 0).
Rational sectional_curvature(const PointData& d, const std::vector<Rational>& x,
                             const std::vector<Rational>& y);

// H(X) = R(X,phiX,X,phiX)/g(X,X)^2 at the point. Throws std::domain_error
// when X is lightlike and std::invalid_argument when X is not in D.
Rational phi_sectional_curvature(const PointData& d, const std::vector<Rational>& x);
// The same quantity as a symbolic field, for a vector field with values in D.
ScalarField phi_sectional_field(const GffStructure& s, const CurvatureTensor& rt,
                                const VectorField& x);

struct AuxTensors {
    Coords coords;
    Rational epsilon_bar;  // sum of eps_a
    std::vector<std::vector<std::vector<std::vector<ScalarField>>>> P;
    std::vector<std::vector<std::vector<std::vector<ScalarField>>>> Q;
    Verdict master;  // g(R(X,Y,phiZ),W) + g(R(X,Y,Z),phiW) = -eps P - Q

    ScalarField p_eval(const VectorField& x, const VectorField& y, const VectorField& z,
                       const VectorField& w) const;
    ScalarField q_eval(const VectorField& x, const VectorField& y, const VectorField& z,
                       const VectorField& w) const;
};

AuxTensors aux_tensors(const GffStructure& s, const CurvatureTensor& rt);

// B(X,Y) = g(R(X,Y,X),Y) and D(X) = B(X,phiX).
ScalarField b_tensor(const CurvatureTensor& rt, const BilinearForm& g, const VectorField& x,
                     const VectorField& y);
ScalarField d_tensor(const CurvatureTensor& rt, const GffStructure& s, const VectorField& x);

struct Reconstruction {
    bool applicable = false;
    std::string reason;  // set when inapplicable
    Rational value;      // set when applicable
};

// Sectional curvature rebuilt from phi-sectional curvatures alone: the
// weighted-H combination on planes inside D and the kernel-decomposition
// formula for general planes. Inapplicable when exact unitization needs an
// irrational square root or an intermediate vector is lightlike.
Reconstruction sectional_from_phi(const GffStructure& s, const PointData& d,
                                  const std::vector<Rational>& x, const std::vector<Rational>& y);

// The model curvature tensor S(c) of pointwise-constant phi-sectional
// curvature c; components over the coordinate frame.
std::vector<std::vector<std::vector<std::vector<ScalarField>>>> space_form_tensor(
    const GffStructure& s, const ScalarField& c);

// H of the first projected frame field with nonzero norm, if constant and
// R - S(c) vanishes identically. Throws std::domain_error when every
// projected frame candidate has identically-zero norm.
std::optional<Rational> detect_space_form(const GffStructure& s, const CurvatureTensor& rt);

// Kernel flatness, the R(xi,X,xi) and R(X,xi,X) identities, the phi-fourfold
// invariance and its two companions on D, and K(X, xi_a) = eps_a.
Verdicts curvature_identity_suite(const GffStructure& s, const CurvatureTensor& rt);

}  // namespace gff
