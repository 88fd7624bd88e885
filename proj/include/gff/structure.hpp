#pragma once

#include "gff/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gff {

enum class VerdictState { Holds, Fails, Skipped };

struct Verdict {
    std::string name;
    VerdictState state = VerdictState::Holds;
    std::string witness;  // exact value or counterexample location, may be empty

    bool holds() const { return state == VerdictState::Holds; }
};

using Verdicts = std::vector<Verdict>;

Verdict make_verdict(std::string name, bool holds, std::string witness = "");
Verdict make_skipped(std::string name, std::string reason);
bool all_hold(const Verdicts& v);

enum class StructureClass { NotGff, MetricGff, K, C, AlmostS, S, SSpaceForm };

std::string class_to_string(StructureClass c);

// The metric globally framed f-structure on a single chart: phi, the
// characteristic fields xi_a with dual 1-forms eta^a, and the compatible
// semi-Riemannian metric g. epsilon is computed, never declared.
struct GffStructure {
    Coords coords;
    std::size_t r = 0;
    TensorField11 phi;
    std::vector<VectorField> xi;
    std::vector<PForm> eta;  // degree 1
    BilinearForm g;
    std::vector<Rational> epsilon;  // g(xi_a, xi_a), filled by compute_epsilons

    std::size_t dim() const { return coords.size(); }
    VectorField xi_bar() const;
    PForm eta_bar() const;  // sum of epsilon_a * eta^a
    ScalarField eta_bar_comp(std::size_t i) const;
    // Projector onto Im(phi): -phi^2 = I - sum eta^a (x) xi_a.
    TensorField11 projector() const;
    Rational epsilon_sum() const;  // requires epsilons computed
};

// phi^3 + phi = 0, rank(phi) = dim - r, phi(xi) = 0, eta(xi) = delta,
// eta o phi = 0.
Verdicts check_f_axioms(const GffStructure& s);

// Fills s.epsilon; the verdict fails when some g(xi_a,xi_a) is not a
// constant +1 or -1.
Verdicts compute_epsilons(GffStructure& s);

// Eq-(1) compatibility, the metric duality of eta, and skew-symmetry of phi.
Verdicts check_compatibility(const GffStructure& s);

// Fundamental 2-form Phi(X,Y) = g(X, phi Y). Throws when skew-symmetry fails.
PForm fundamental_form(const GffStructure& s);

struct HOperator {
    std::size_t index;   // alpha, 0-based
    TensorField11 op;    // (1/2) L_{xi_a} phi
};

std::vector<HOperator> h_operators(const GffStructure& s, Verdicts* verdicts = nullptr);

// N = N_phi + 2 sum d eta^a (x) xi_a.
Tensor12 full_normality_tensor(const GffStructure& s);

// N^(2)_a(X,Y) = 2 d eta^a(phi X, Y) - 2 d eta^a(phi Y, X); the Lie-derivative
// route computes the same tensor independently and the two are compared as a
// self-test.
BilinearForm n2_tensor(const GffStructure& s, std::size_t alpha);
BilinearForm n2_tensor_lie(const GffStructure& s, std::size_t alpha);

// L_{xi_a} g = 0 and L_{xi_a} eta^b = 0.
Verdicts check_killing(const GffStructure& s);

struct ClassificationReport {
    Verdicts verdicts;
    StructureClass cls = StructureClass::NotGff;
    bool valid_gff = false;
    bool normal = false;
    bool contact_type = false;   // d eta^a = Phi for every a
    bool closed_phi_form = false;
    bool closed_eta = false;
    std::vector<Rational> epsilon;
};

// Runs axioms, compatibility, the normality/contact flags and places the
// structure in the K / C / almost-S / S hierarchy.
ClassificationReport classify(GffStructure& s);

}  // namespace gff
