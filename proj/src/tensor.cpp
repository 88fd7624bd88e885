#include "gff/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace gff {

ScalarField sf_zero(const Coords& coords) { return ScalarField::constant(coords, 0); }
ScalarField sf_one(const Coords& coords) { return ScalarField::constant(coords, 1); }

bool VectorField::is_zero() const {
    return std::all_of(comp.begin(), comp.end(), [](const ScalarField& f) { return f.is_zero(); });
}

ScalarField VectorField::apply(const ScalarField& f) const {
    ScalarField acc = sf_zero(coords);
    for (std::size_t i = 0; i < comp.size(); ++i) {
        if (comp[i].is_zero()) continue;
        acc = acc + comp[i] * f.derivative(coords[i]);
    }
    return acc;
}

VectorField VectorField::operator+(const VectorField& o) const {
    VectorField r(coords);
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] + o.comp[i];
    return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
    VectorField r(coords);
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] - o.comp[i];
    return r;
}

VectorField VectorField::operator-() const {
    VectorField r(coords);
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = -comp[i];
    return r;
}

VectorField VectorField::operator*(const ScalarField& f) const {
    VectorField r(coords);
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] * f;
    return r;
}

bool VectorField::operator==(const VectorField& o) const {
    for (std::size_t i = 0; i < comp.size(); ++i)
        if (comp[i] != o.comp[i]) return false;
    return true;
}

VectorField coordinate_frame(const Coords& coords, std::size_t i) {
    VectorField v(coords);
    v.comp[i] = sf_one(coords);
    return v;
}

ScalarField PForm::at(const std::vector<std::size_t>& idx) const {
    auto it = comp.find(idx);
    if (it != comp.end()) return it->second;
    return sf_zero(coords);
}

void PForm::set(const std::vector<std::size_t>& idx, const ScalarField& v) {
    if (v.is_zero())
        comp.erase(idx);
    else
        comp[idx] = v;
}

bool PForm::is_zero() const {
    return std::all_of(comp.begin(), comp.end(),
                       [](const auto& kv) { return kv.second.is_zero(); });
}

namespace {

// Iterates permutations of {0..p-1} with sign.
template <typename F>
void for_permutations(std::size_t p, F&& fn) {
    std::vector<std::size_t> perm(p);
    for (std::size_t i = 0; i < p; ++i) perm[i] = i;
    // Generate all permutations, computing parity by inversion count.
    std::sort(perm.begin(), perm.end());
    do {
        int inv = 0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j)
                if (perm[i] > perm[j]) ++inv;
        fn(perm, inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

ScalarField PForm::eval(const std::vector<VectorField>& args) const {
    if (args.size() != degree) throw std::invalid_argument("form degree / argument count mismatch");
    ScalarField acc = sf_zero(coords);
    for (const auto& [idx, w] : comp) {
        if (w.is_zero()) continue;
        ScalarField alt = sf_zero(coords);
        for_permutations(degree, [&](const std::vector<std::size_t>& perm, int sign) {
            ScalarField prod = sf_one(coords);
            for (std::size_t k = 0; k < degree; ++k) prod = prod * args[perm[k]].comp[idx[k]];
            alt = sign > 0 ? alt + prod : alt - prod;
        });
        acc = acc + w * alt;
    }
    return acc;
}

ScalarField PForm::eval(const VectorField& x) const { return eval(std::vector<VectorField>{x}); }

ScalarField PForm::eval(const VectorField& x, const VectorField& y) const {
    return eval(std::vector<VectorField>{x, y});
}

PForm PForm::operator+(const PForm& o) const {
    if (degree != o.degree) throw std::invalid_argument("form degrees differ");
    PForm r = *this;
    for (const auto& [idx, w] : o.comp) r.set(idx, r.at(idx) + w);
    return r;
}

PForm PForm::operator-(const PForm& o) const {
    if (degree != o.degree) throw std::invalid_argument("form degrees differ");
    PForm r = *this;
    for (const auto& [idx, w] : o.comp) r.set(idx, r.at(idx) - w);
    return r;
}

PForm PForm::operator*(const ScalarField& f) const {
    PForm r(coords, degree);
    for (const auto& [idx, w] : comp) r.set(idx, w * f);
    return r;
}

bool PForm::operator==(const PForm& o) const { return (*this - o).is_zero(); }

TensorField11 TensorField11::identity(const Coords& c) {
    TensorField11 t(c);
    for (std::size_t i = 0; i < c.size(); ++i) t.comp[i][i] = sf_one(c);
    return t;
}

VectorField TensorField11::apply(const VectorField& x) const {
    VectorField r(coords);
    for (std::size_t k = 0; k < dim(); ++k) {
        ScalarField acc = sf_zero(coords);
        for (std::size_t j = 0; j < dim(); ++j) {
            if (comp[k][j].is_zero() || x.comp[j].is_zero()) continue;
            acc = acc + comp[k][j] * x.comp[j];
        }
        r.comp[k] = acc;
    }
    return r;
}

VectorField TensorField11::column(std::size_t j) const {
    VectorField r(coords);
    for (std::size_t k = 0; k < dim(); ++k) r.comp[k] = comp[k][j];
    return r;
}

TensorField11 TensorField11::compose(const TensorField11& o) const {
    TensorField11 r(coords);
    for (std::size_t k = 0; k < dim(); ++k)
        for (std::size_t j = 0; j < dim(); ++j) {
            ScalarField acc = sf_zero(coords);
            for (std::size_t m = 0; m < dim(); ++m) {
                if (comp[k][m].is_zero() || o.comp[m][j].is_zero()) continue;
                acc = acc + comp[k][m] * o.comp[m][j];
            }
            r.comp[k][j] = acc;
        }
    return r;
}

SquareMatrix TensorField11::as_matrix() const {
    SquareMatrix m = SquareMatrix::zero(dim(), coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) m.at(i, j) = comp[i][j];
    return m;
}

bool TensorField11::is_zero() const {
    for (const auto& row : comp)
        for (const auto& f : row)
            if (!f.is_zero()) return false;
    return true;
}

TensorField11 TensorField11::operator+(const TensorField11& o) const {
    TensorField11 r(coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) r.comp[i][j] = comp[i][j] + o.comp[i][j];
    return r;
}

TensorField11 TensorField11::operator-(const TensorField11& o) const {
    TensorField11 r(coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) r.comp[i][j] = comp[i][j] - o.comp[i][j];
    return r;
}

TensorField11 TensorField11::operator*(const ScalarField& f) const {
    TensorField11 r(coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) r.comp[i][j] = comp[i][j] * f;
    return r;
}

bool TensorField11::operator==(const TensorField11& o) const { return (*this - o).is_zero(); }

ScalarField BilinearForm::eval(const VectorField& x, const VectorField& y) const {
    ScalarField acc = sf_zero(coords);
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x.comp[i].is_zero()) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (comp[i][j].is_zero() || y.comp[j].is_zero()) continue;
            acc = acc + x.comp[i] * comp[i][j] * y.comp[j];
        }
    }
    return acc;
}

SquareMatrix BilinearForm::as_matrix() const {
    SquareMatrix m = SquareMatrix::zero(dim(), coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) m.at(i, j) = comp[i][j];
    return m;
}

bool BilinearForm::is_zero() const {
    for (const auto& row : comp)
        for (const auto& f : row)
            if (!f.is_zero()) return false;
    return true;
}

BilinearForm BilinearForm::operator+(const BilinearForm& o) const {
    BilinearForm r(coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) r.comp[i][j] = comp[i][j] + o.comp[i][j];
    return r;
}

BilinearForm BilinearForm::operator-(const BilinearForm& o) const {
    BilinearForm r(coords);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) r.comp[i][j] = comp[i][j] - o.comp[i][j];
    return r;
}

bool BilinearForm::operator==(const BilinearForm& o) const { return (*this - o).is_zero(); }

VectorField Tensor12::eval(const VectorField& x, const VectorField& y) const {
    std::size_t n = coords.size();
    VectorField r(coords);
    for (std::size_t k = 0; k < n; ++k) {
        ScalarField acc = sf_zero(coords);
        for (std::size_t i = 0; i < n; ++i) {
            if (x.comp[i].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (comp[k][i][j].is_zero() || y.comp[j].is_zero()) continue;
                acc = acc + comp[k][i][j] * x.comp[i] * y.comp[j];
            }
        }
        r.comp[k] = acc;
    }
    return r;
}

bool Tensor12::is_zero() const {
    for (const auto& plane : comp)
        for (const auto& row : plane)
            for (const auto& f : row)
                if (!f.is_zero()) return false;
    return true;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    std::size_t n = x.coords.size();
    VectorField r(x.coords);
    for (std::size_t k = 0; k < n; ++k)
        r.comp[k] = x.apply(y.comp[k]) - y.apply(x.comp[k]);
    return r;
}

PForm exterior_derivative(const PForm& omega) {
    std::size_t n = omega.coords.size();
    std::size_t p = omega.degree;
    if (p >= n) throw std::invalid_argument("exterior derivative: degree must be below the dimension");
    PForm d(omega.coords, p + 1);
    Rational norm(1, static_cast<long>(p + 1));
    // enumerate increasing (p+1)-tuples
    std::vector<std::size_t> idx(p + 1);
    for (std::size_t i = 0; i <= p; ++i) idx[i] = i;
    while (true) {
        ScalarField acc = sf_zero(omega.coords);
        for (std::size_t k = 0; k <= p; ++k) {
            std::vector<std::size_t> rest;
            rest.reserve(p);
            for (std::size_t i = 0; i <= p; ++i)
                if (i != k) rest.push_back(idx[i]);
            ScalarField term = omega.at(rest).derivative(omega.coords[idx[k]]);
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        d.set(idx, acc * ScalarField::constant(omega.coords, norm));
        // next increasing tuple
        std::size_t i = p + 1;
        while (i-- > 0) {
            if (idx[i] + (p - i) < n - 1) {
                ++idx[i];
                for (std::size_t j = i + 1; j <= p; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return d;
        }
    }
}

PForm exterior_derivative_function(const ScalarField& f) {
    Coords coords = f.vars();
    PForm d(coords, 1);
    for (std::size_t i = 0; i < coords.size(); ++i) d.set({i}, f.derivative(coords[i]));
    return d;
}

BilinearForm lie_derivative(const BilinearForm& t, const VectorField& x) {
    std::size_t n = t.dim();
    const Coords& coords = t.coords;
    BilinearForm r(coords);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ScalarField acc = x.apply(t.comp[i][j]);
            for (std::size_t k = 0; k < n; ++k) {
                acc = acc + t.comp[k][j] * x.comp[k].derivative(coords[i]);
                acc = acc + t.comp[i][k] * x.comp[k].derivative(coords[j]);
            }
            r.comp[i][j] = acc;
        }
    }
    return r;
}

TensorField11 lie_derivative(const TensorField11& t, const VectorField& x) {
    std::size_t n = t.dim();
    const Coords& coords = t.coords;
    TensorField11 r(coords);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            ScalarField acc = x.apply(t.comp[k][j]);
            for (std::size_t m = 0; m < n; ++m) {
                acc = acc - t.comp[m][j] * x.comp[k].derivative(coords[m]);
                acc = acc + t.comp[k][m] * x.comp[m].derivative(coords[j]);
            }
            r.comp[k][j] = acc;
        }
    }
    return r;
}

PForm lie_derivative_oneform(const PForm& eta, const VectorField& x) {
    if (eta.degree != 1) throw std::invalid_argument("lie_derivative_oneform: degree must be 1");
    std::size_t n = eta.coords.size();
    const Coords& coords = eta.coords;
    PForm r(coords, 1);
    for (std::size_t i = 0; i < n; ++i) {
        ScalarField acc = x.apply(eta.at({i}));
        for (std::size_t m = 0; m < n; ++m)
            acc = acc + eta.at({m}) * x.comp[m].derivative(coords[i]);
        r.set({i}, acc);
    }
    return r;
}

Tensor12 nijenhuis_torsion(const TensorField11& phi) {
    std::size_t n = phi.dim();
    const Coords& coords = phi.coords;
    Tensor12 N(coords);
    for (std::size_t i = 0; i < n; ++i) {
        VectorField ei = coordinate_frame(coords, i);
        VectorField phi_ei = phi.column(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            VectorField ej = coordinate_frame(coords, j);
            VectorField phi_ej = phi.column(j);
            // [e_i, e_j] = 0 for coordinate frames, so the phi^2 term drops.
            VectorField v = lie_bracket(phi_ei, phi_ej) - phi.apply(lie_bracket(phi_ei, ej)) -
                            phi.apply(lie_bracket(ei, phi_ej));
            for (std::size_t k = 0; k < n; ++k) {
                N.comp[k][i][j] = v.comp[k];
                N.comp[k][j][i] = -v.comp[k];
            }
        }
    }
    return N;
}

}  // namespace gff
