#include "gff/structure.hpp"

#include <sstream>
#include <stdexcept>

namespace gff {

Verdict make_verdict(std::string name, bool holds, std::string witness) {
    return Verdict{std::move(name), holds ? VerdictState::Holds : VerdictState::Fails,
                   std::move(witness)};
}

Verdict make_skipped(std::string name, std::string reason) {
    return Verdict{std::move(name), VerdictState::Skipped, std::move(reason)};
}

bool all_hold(const Verdicts& v) {
    for (const auto& x : v)
        if (x.state == VerdictState::Fails) return false;
    return true;
}

std::string class_to_string(StructureClass c) {
    switch (c) {
        case StructureClass::NotGff: return "not-gff";
        case StructureClass::MetricGff: return "metric-gff";
        case StructureClass::K: return "K";
        case StructureClass::C: return "C";
        case StructureClass::AlmostS: return "almost-S";
        case StructureClass::S: return "S";
        case StructureClass::SSpaceForm: return "S-space-form";
    }
    return "?";
}

VectorField GffStructure::xi_bar() const {
    VectorField v(coords);
    for (const auto& x : xi) v = v + x;
    return v;
}

PForm GffStructure::eta_bar() const {
    PForm e(coords, 1);
    for (std::size_t a = 0; a < r; ++a) {
        ScalarField s = ScalarField::constant(coords, epsilon.at(a));
        e = e + eta[a] * s;
    }
    return e;
}

ScalarField GffStructure::eta_bar_comp(std::size_t i) const {
    ScalarField acc = sf_zero(coords);
    for (std::size_t a = 0; a < r; ++a)
        acc = acc + eta[a].at({i}) * ScalarField::constant(coords, epsilon.at(a));
    return acc;
}

TensorField11 GffStructure::projector() const {
    TensorField11 p2 = phi.compose(phi);
    TensorField11 proj(coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) proj.comp[i][j] = -p2.comp[i][j];
    return proj;
}

Rational GffStructure::epsilon_sum() const {
    Rational s = 0;
    for (const auto& e : epsilon) s += e;
    return s;
}

namespace {

std::string idx_witness(std::size_t i, std::size_t j, const ScalarField& v) {
    std::ostringstream os;
    os << "component (" << i + 1 << "," << j + 1 << ") = " << v.to_string();
    return os.str();
}

Verdict tensor_zero_verdict(std::string name, const TensorField11& t) {
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            if (!t.comp[i][j].is_zero())
                return make_verdict(std::move(name), false, idx_witness(i, j, t.comp[i][j]));
    return make_verdict(std::move(name), true);
}

Verdict bilinear_zero_verdict(std::string name, const BilinearForm& t) {
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j)
            if (!t.comp[i][j].is_zero())
                return make_verdict(std::move(name), false, idx_witness(i, j, t.comp[i][j]));
    return make_verdict(std::move(name), true);
}

}  // namespace

Verdicts check_f_axioms(const GffStructure& s) {
    Verdicts out;
    const std::size_t n = s.dim();

    TensorField11 phi3 = s.phi.compose(s.phi).compose(s.phi);
    out.push_back(tensor_zero_verdict("phi^3 + phi = 0", phi3 + s.phi));

    std::size_t rank = matrix_rank(s.phi.as_matrix());
    {
        std::ostringstream os;
        os << "rank " << rank << ", expected " << n - s.r;
        out.push_back(make_verdict("rank(phi) = dim - r", rank == n - s.r, os.str()));
    }

    for (std::size_t a = 0; a < s.r; ++a) {
        VectorField v = s.phi.apply(s.xi[a]);
        bool ok = v.is_zero();
        out.push_back(make_verdict("phi(xi_" + std::to_string(a + 1) + ") = 0", ok));
    }

    for (std::size_t a = 0; a < s.r; ++a) {
        for (std::size_t b = 0; b < s.r; ++b) {
            ScalarField v = s.eta[a].eval(s.xi[b]);
            ScalarField want = ScalarField::constant(s.coords, a == b ? 1 : 0);
            if (v != want) {
                out.push_back(make_verdict("eta(xi) = delta", false,
                                           "eta^" + std::to_string(a + 1) + "(xi_" +
                                               std::to_string(b + 1) + ") = " + v.to_string()));
                goto eta_done;
            }
        }
    }
    out.push_back(make_verdict("eta(xi) = delta", true));
eta_done:

    for (std::size_t a = 0; a < s.r; ++a) {
        bool ok = true;
        std::string witness;
        for (std::size_t j = 0; j < n && ok; ++j) {
            ScalarField v = sf_zero(s.coords);
            for (std::size_t i = 0; i < n; ++i) v = v + s.eta[a].at({i}) * s.phi.comp[i][j];
            if (!v.is_zero()) {
                ok = false;
                witness = idx_witness(a, j, v);
            }
        }
        out.push_back(make_verdict("eta^" + std::to_string(a + 1) + " o phi = 0", ok, witness));
    }
    return out;
}

Verdicts compute_epsilons(GffStructure& s) {
    Verdicts out;
    s.epsilon.assign(s.r, 0);
    bool ok = true;
    std::string witness;
    for (std::size_t a = 0; a < s.r; ++a) {
        ScalarField v = s.g.eval(s.xi[a], s.xi[a]);
        if (v.is_constant() && (v.constant_value() == 1 || v.constant_value() == -1)) {
            s.epsilon[a] = v.constant_value();
        } else {
            ok = false;
            witness = "g(xi_" + std::to_string(a + 1) + ", xi_" + std::to_string(a + 1) +
                      ") = " + v.to_string();
            break;
        }
    }
    out.push_back(make_verdict("g(xi_a, xi_a) = +-1", ok, witness));
    return out;
}

Verdicts check_compatibility(const GffStructure& s) {
    Verdicts out;
    const std::size_t n = s.dim();

    // g(phi X, phi Y) = g(X,Y) - sum eps eta(X) eta(Y) on frame pairs.
    BilinearForm lhs(s.coords), rhs(s.coords);
    for (std::size_t i = 0; i < n; ++i) {
        VectorField pi = s.phi.column(i);
        for (std::size_t j = 0; j < n; ++j) {
            lhs.comp[i][j] = s.g.eval(pi, s.phi.column(j));
            ScalarField acc = s.g.comp[i][j];
            for (std::size_t a = 0; a < s.r; ++a)
                acc = acc - ScalarField::constant(s.coords, s.epsilon[a]) * s.eta[a].at({i}) *
                                s.eta[a].at({j});
            rhs.comp[i][j] = acc;
        }
    }
    out.push_back(bilinear_zero_verdict("g(phiX, phiY) = g(X,Y) - sum eps eta(X)eta(Y)",
                                        lhs - rhs));

    // eps_a g(X, xi_a) = eta^a(X) on frame vectors.
    {
        bool ok = true;
        std::string witness;
        for (std::size_t a = 0; a < s.r && ok; ++a) {
            for (std::size_t i = 0; i < n && ok; ++i) {
                ScalarField gv = sf_zero(s.coords);
                for (std::size_t j = 0; j < n; ++j)
                    gv = gv + s.g.comp[i][j] * s.xi[a].comp[j];
                gv = gv * ScalarField::constant(s.coords, s.epsilon[a]);
                if (gv != s.eta[a].at({i})) {
                    ok = false;
                    witness = "alpha=" + std::to_string(a + 1) + ", frame " + std::to_string(i + 1);
                }
            }
        }
        out.push_back(make_verdict("eps_a g(X, xi_a) = eta^a(X)", ok, witness));
    }

    // skew-symmetry g(phiX, Y) + g(X, phiY) = 0.
    {
        BilinearForm skew(s.coords);
        for (std::size_t i = 0; i < n; ++i) {
            VectorField pi = s.phi.column(i);
            for (std::size_t j = 0; j < n; ++j) {
                ScalarField a = s.g.eval(pi, coordinate_frame(s.coords, j));
                ScalarField b = s.g.eval(coordinate_frame(s.coords, i), s.phi.column(j));
                skew.comp[i][j] = a + b;
            }
        }
        out.push_back(bilinear_zero_verdict("g(phiX,Y) + g(X,phiY) = 0", skew));
    }
    return out;
}

PForm fundamental_form(const GffStructure& s) {
    const std::size_t n = s.dim();
    // Phi_ij = g(e_i, phi e_j) = (G phi)_ij
    BilinearForm m(s.coords);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ScalarField acc = sf_zero(s.coords);
            for (std::size_t k = 0; k < n; ++k) acc = acc + s.g.comp[i][k] * s.phi.comp[k][j];
            m.comp[i][j] = acc;
        }
    PForm f(s.coords, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m.comp[i][j] != -m.comp[j][i])
                throw std::domain_error("fundamental form is not antisymmetric (phi not skew)");
            f.set({i, j}, m.comp[i][j]);
        }
    for (std::size_t i = 0; i < n; ++i)
        if (!m.comp[i][i].is_zero())
            throw std::domain_error("fundamental form is not antisymmetric (phi not skew)");
    return f;
}

std::vector<HOperator> h_operators(const GffStructure& s, Verdicts* verdicts) {
    std::vector<HOperator> hs;
    ScalarField half = ScalarField::constant(s.coords, Rational(1, 2));
    for (std::size_t a = 0; a < s.r; ++a)
        hs.push_back({a, lie_derivative(s.phi, s.xi[a]) * half});

    if (verdicts) {
        const std::size_t n = s.dim();
        for (const auto& h : hs) {
            std::string tag = "h_" + std::to_string(h.index + 1);
            // self-adjoint: g(hX, Y) = g(X, hY)
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                VectorField hi = h.op.column(i);
                for (std::size_t j = 0; j < n && ok; ++j) {
                    ScalarField l = s.g.eval(hi, coordinate_frame(s.coords, j));
                    ScalarField rr = s.g.eval(coordinate_frame(s.coords, i), h.op.column(j));
                    if (l != rr) ok = false;
                }
            }
            verdicts->push_back(make_verdict(tag + " self-adjoint", ok));

            bool kills_xi = true;
            for (std::size_t b = 0; b < s.r; ++b)
                if (!h.op.apply(s.xi[b]).is_zero()) kills_xi = false;
            verdicts->push_back(make_verdict(tag + "(xi_b) = 0", kills_xi));

            TensorField11 anti = h.op.compose(s.phi) + s.phi.compose(h.op);
            verdicts->push_back(tensor_zero_verdict(tag + " o phi + phi o " + tag + " = 0", anti));
        }
    }
    return hs;
}

Tensor12 full_normality_tensor(const GffStructure& s) {
    const std::size_t n = s.dim();
    Tensor12 N = nijenhuis_torsion(s.phi);
    for (std::size_t a = 0; a < s.r; ++a) {
        PForm de = exterior_derivative(s.eta[a]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                ScalarField two_de = de.at({i, j}) * ScalarField::constant(s.coords, 2);
                if (two_de.is_zero()) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    ScalarField add = two_de * s.xi[a].comp[k];
                    N.comp[k][i][j] = N.comp[k][i][j] + add;
                    N.comp[k][j][i] = N.comp[k][j][i] - add;
                }
            }
    }
    return N;
}

BilinearForm n2_tensor(const GffStructure& s, std::size_t alpha) {
    const std::size_t n = s.dim();
    PForm de = exterior_derivative(s.eta[alpha]);
    BilinearForm t(s.coords);
    ScalarField two = ScalarField::constant(s.coords, 2);
    for (std::size_t i = 0; i < n; ++i) {
        VectorField pi = s.phi.column(i);
        for (std::size_t j = 0; j < n; ++j) {
            VectorField pj = s.phi.column(j);
            t.comp[i][j] = two * de.eval(pi, coordinate_frame(s.coords, j)) -
                           two * de.eval(pj, coordinate_frame(s.coords, i));
        }
    }
    return t;
}

BilinearForm n2_tensor_lie(const GffStructure& s, std::size_t alpha) {
    const std::size_t n = s.dim();
    BilinearForm t(s.coords);
    for (std::size_t i = 0; i < n; ++i) {
        PForm li = lie_derivative_oneform(s.eta[alpha], s.phi.column(i));
        for (std::size_t j = 0; j < n; ++j) t.comp[i][j] = li.at({j});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            ScalarField v = t.comp[i][j] - t.comp[j][i];
            t.comp[i][j] = v;
            t.comp[j][i] = -v;
        }
    return t;
}

Verdicts check_killing(const GffStructure& s) {
    Verdicts out;
    for (std::size_t a = 0; a < s.r; ++a) {
        BilinearForm lg = lie_derivative(s.g, s.xi[a]);
        out.push_back(bilinear_zero_verdict("L_xi_" + std::to_string(a + 1) + " g = 0", lg));
    }
    for (std::size_t a = 0; a < s.r; ++a)
        for (std::size_t b = 0; b < s.r; ++b) {
            PForm le = lie_derivative_oneform(s.eta[b], s.xi[a]);
            out.push_back(make_verdict("L_xi_" + std::to_string(a + 1) + " eta^" +
                                           std::to_string(b + 1) + " = 0",
                                       le.is_zero()));
        }
    return out;
}

ClassificationReport classify(GffStructure& s) {
    ClassificationReport rep;

    Verdicts ax = check_f_axioms(s);
    rep.verdicts.insert(rep.verdicts.end(), ax.begin(), ax.end());
    Verdicts ev = compute_epsilons(s);
    rep.verdicts.insert(rep.verdicts.end(), ev.begin(), ev.end());
    rep.epsilon = s.epsilon;

    if (!all_hold(ev)) {
        rep.cls = StructureClass::NotGff;
        return rep;
    }

    Verdicts comp = check_compatibility(s);
    rep.verdicts.insert(rep.verdicts.end(), comp.begin(), comp.end());
    rep.valid_gff = all_hold(ax) && all_hold(comp);

    PForm Phi;
    try {
        Phi = fundamental_form(s);
    } catch (const std::domain_error&) {
        rep.cls = StructureClass::NotGff;
        rep.verdicts.push_back(make_verdict("fundamental 2-form antisymmetric", false));
        return rep;
    }

    PForm dPhi = exterior_derivative(Phi);
    rep.closed_phi_form = dPhi.is_zero();
    rep.verdicts.push_back(make_verdict("dPhi = 0", rep.closed_phi_form));

    rep.contact_type = true;
    rep.closed_eta = true;
    for (std::size_t a = 0; a < s.r; ++a) {
        PForm de = exterior_derivative(s.eta[a]);
        bool eq = (de - Phi).is_zero();
        bool cz = de.is_zero();
        rep.verdicts.push_back(
            make_verdict("d eta^" + std::to_string(a + 1) + " = Phi", eq));
        rep.contact_type = rep.contact_type && eq;
        rep.closed_eta = rep.closed_eta && cz;
    }

    Tensor12 N = full_normality_tensor(s);
    rep.normal = N.is_zero();
    rep.verdicts.push_back(make_verdict("normality: N = 0", rep.normal));

    if (!rep.valid_gff) {
        rep.cls = StructureClass::NotGff;
        return rep;
    }
    if (rep.contact_type && rep.normal)
        rep.cls = StructureClass::S;
    else if (rep.contact_type)
        rep.cls = StructureClass::AlmostS;
    else if (rep.normal && rep.closed_phi_form && rep.closed_eta)
        rep.cls = StructureClass::C;
    else if (rep.normal && rep.closed_phi_form)
        rep.cls = StructureClass::K;
    else
        rep.cls = StructureClass::MetricGff;
    return rep;
}

}  // namespace gff
