#include "gff/matrix.hpp"

#include <stdexcept>

namespace gff {

SquareMatrix SquareMatrix::zero(std::size_t n, std::vector<std::string> vars) {
    return SquareMatrix(n, ScalarField::constant(std::move(vars), 0));
}

SquareMatrix SquareMatrix::identity(std::size_t n, std::vector<std::string> vars) {
    SquareMatrix m = zero(n, vars);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ScalarField::constant(vars, 1);
    return m;
}

bool SquareMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (a_[i][j] != a_[j][i]) return false;
    return true;
}

namespace {

template <typename T, typename Zero>
T det_cofactor(const std::vector<std::vector<T>>& m, std::vector<std::size_t> cols,
               std::size_t row, const Zero& zero, bool (*is_zero)(const T&)) {
    if (cols.size() == 1) return m[row][cols[0]];
    T acc = zero;
    int sign = 1;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const T& pivot = m[row][cols[k]];
        if (!is_zero(pivot)) {
            std::vector<std::size_t> rest;
            rest.reserve(cols.size() - 1);
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (j != k) rest.push_back(cols[j]);
            T sub = det_cofactor(m, std::move(rest), row + 1, zero, is_zero);
            T term = pivot * sub;
            acc = sign > 0 ? acc + term : acc - term;
        }
        sign = -sign;
    }
    return acc;
}

bool sf_is_zero(const ScalarField& f) { return f.is_zero(); }
bool poly_is_zero(const Polynomial& p) { return p.is_zero(); }

}  // namespace

ScalarField matrix_det(const SquareMatrix& m) {
    std::size_t n = m.size();
    std::vector<std::vector<ScalarField>> a(n, std::vector<ScalarField>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
    ScalarField zero = ScalarField::constant(m.at(0, 0).vars(), 0);
    return det_cofactor(a, std::move(cols), 0, zero, sf_is_zero);
}

Polynomial matrix_char_poly(const SquareMatrix& m, const std::string& lambda_name) {
    std::size_t n = m.size();
    std::vector<std::string> vars = m.at(0, 0).vars();
    for (const auto& v : vars)
        if (v == lambda_name) throw std::invalid_argument("auxiliary variable clashes with a coordinate");
    std::vector<std::string> ext = vars;
    ext.push_back(lambda_name);
    Polynomial lambda = Polynomial::variable(ext, lambda_name);
    std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const ScalarField& f = m.at(i, j);
            if (!f.den().is_constant())
                throw std::invalid_argument("characteristic polynomial requires polynomial entries");
            a[i][j] = (f.num() * (Rational(1) / f.den().constant_value())).with_vars(ext);
            if (i == j) a[i][j] = a[i][j] - lambda;
        }
    }
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j) cols[j] = j;
    Polynomial zero(ext);
    return det_cofactor(a, std::move(cols), 0, zero, poly_is_zero);
}

SquareMatrix matrix_inverse(const SquareMatrix& m) {
    std::size_t n = m.size();
    ScalarField det = matrix_det(m);
    if (det.is_zero()) throw std::domain_error("matrix is identically singular");
    auto vars = m.at(0, 0).vars();
    SquareMatrix inv = SquareMatrix::zero(n, vars);
    if (n == 1) {
        inv.at(0, 0) = ScalarField::constant(vars, 1) / det;
        return inv;
    }
    std::vector<std::vector<ScalarField>> a(n, std::vector<ScalarField>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
    ScalarField zero = ScalarField::constant(vars, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // cofactor C_ij: delete row i, column j
            std::vector<std::vector<ScalarField>> sub;
            sub.reserve(n - 1);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<ScalarField> row;
                row.reserve(n - 1);
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(a[r][c]);
                sub.push_back(std::move(row));
            }
            std::vector<std::size_t> cols(n - 1);
            for (std::size_t c = 0; c < n - 1; ++c) cols[c] = c;
            ScalarField minor = det_cofactor(sub, std::move(cols), 0, zero, sf_is_zero);
            ScalarField cof = ((i + j) % 2 == 0) ? minor : -minor;
            inv.at(j, i) = cof / det;  // adjugate transposes
        }
    }
    return inv;
}

std::size_t matrix_rank(const SquareMatrix& m) {
    std::size_t n = m.size();
    std::vector<std::vector<ScalarField>> a(n, std::vector<ScalarField>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j);
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t p = row;
        while (p < n && a[p][col].is_zero()) ++p;
        if (p == n) continue;
        std::swap(a[p], a[row]);
        for (std::size_t i = row + 1; i < n; ++i) {
            if (a[i][col].is_zero()) continue;
            ScalarField f = a[i][col] / a[row][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[row][j];
        }
        ++rank;
        ++row;
    }
    return rank;
}

std::pair<int, int> signature_at_point(const SquareMatrix& m,
                                       const std::map<std::string, Rational>& point) {
    std::size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i, j).evaluate(point);
    int np = 0, nm = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            // prefer a nonzero diagonal pivot below
            std::size_t sw = n;
            for (std::size_t j = k + 1; j < n; ++j)
                if (a[j][j] != 0) { sw = j; break; }
            if (sw < n) {
                std::swap(a[sw], a[k]);
                for (std::size_t i = 0; i < n; ++i) std::swap(a[i][sw], a[i][k]);
            } else {
                // all remaining diagonal entries vanish: congruence by row/col addition
                std::size_t j = n;
                for (std::size_t c = k + 1; c < n; ++c)
                    if (a[k][c] != 0) { j = c; break; }
                if (j == n) throw std::domain_error("matrix singular at the point");
                for (std::size_t c = 0; c < n; ++c) a[k][c] += a[j][c];
                for (std::size_t r = 0; r < n; ++r) a[r][k] += a[r][j];
            }
        }
        Rational pivot = a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rational f = a[i][k] / pivot;
            for (std::size_t c = 0; c < n; ++c) a[i][c] -= f * a[k][c];
            for (std::size_t r = 0; r < n; ++r) a[r][i] -= f * a[r][k];
        }
        if (pivot > 0) ++np; else ++nm;
    }
    return {np, nm};
}

}  // namespace gff
