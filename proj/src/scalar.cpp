#include "gff/scalar.hpp"

#include <algorithm>
#include <stdexcept>

namespace gff {

namespace {

// Dense univariate view of a polynomial whose support is {name} (or empty).
std::vector<Rational> to_dense(const Polynomial& p, const std::string& name) {
    std::vector<Rational> c(static_cast<std::size_t>(p.degree_in(name)) + 1, Rational(0));
    std::size_t vi = 0;
    for (std::size_t i = 0; i < p.vars().size(); ++i)
        if (p.vars()[i] == name) vi = i;
    for (const auto& [e, k] : p.terms()) c[static_cast<std::size_t>(e[vi])] = k;
    return c;
}

Polynomial from_dense(const std::vector<Rational>& c, const std::vector<std::string>& vars,
                      const std::string& name) {
    Polynomial p(vars);
    std::size_t vi = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) vi = i;
    for (std::size_t d = 0; d < c.size(); ++d) {
        if (c[d] == 0) continue;
        Polynomial::Exponents e(vars.size(), 0);
        e[vi] = static_cast<int>(d);
        p.add_term(e, c[d]);
    }
    return p;
}

void trim(std::vector<Rational>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Euclidean gcd of univariate polynomials over the rationals, monic result.
std::vector<Rational> dense_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        while (a.size() >= b.size() && !a.empty()) {
            Rational f = a.back() / b.back();
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
            trim(a);
        }
        std::swap(a, b);
    }
    if (!a.empty() && a.back() != 1) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

}  // namespace

ScalarField::ScalarField(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(num_.vars(), 1)) {
    canonicalize();
}

ScalarField::ScalarField(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (num_.vars() != den_.vars()) throw std::invalid_argument("numerator/denominator variable lists differ");
    if (den_.is_zero()) throw std::domain_error("division by the identically-zero field");
    canonicalize();
}

ScalarField ScalarField::constant(std::vector<std::string> vars, const Rational& c) {
    return ScalarField(Polynomial::constant(std::move(vars), c));
}

ScalarField ScalarField::variable(const std::vector<std::string>& vars, const std::string& name) {
    return ScalarField(Polynomial::variable(vars, name));
}

void ScalarField::canonicalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.vars(), 1);
        return;
    }
    if (den_.is_constant()) {
        num_ = num_ * (Rational(1) / den_.constant_value());
        den_ = Polynomial::constant(num_.vars(), 1);
        return;
    }
    if (auto q = num_.divide_exact(den_)) {
        num_ = *q;
        den_ = Polynomial::constant(num_.vars(), 1);
        return;
    }
    if (num_.is_constant()) {
        // leave as c/den after content normalization below
    } else {
        // Univariate in a single shared variable: full gcd reduction.
        auto sn = num_.support();
        auto sd = den_.support();
        if (sn.size() == 1 && sd.size() == 1 && sn[0] == sd[0]) {
            auto g = dense_gcd(to_dense(num_, sn[0]), to_dense(den_, sn[0]));
            if (g.size() > 1) {
                Polynomial gp = from_dense(g, num_.vars(), sn[0]);
                num_ = *num_.divide_exact(gp);
                den_ = *den_.divide_exact(gp);
                if (den_.is_constant()) {
                    num_ = num_ * (Rational(1) / den_.constant_value());
                    den_ = Polynomial::constant(num_.vars(), 1);
                    return;
                }
            }
        }
    }
    // Content extraction with a sign-normalized denominator leading coefficient.
    Rational cd = den_.content();
    if (den_.leading_sign() < 0) cd = -cd;
    den_ = den_ * (Rational(1) / cd);
    num_ = num_ * (Rational(1) / cd);
}

Rational ScalarField::constant_value() const {
    if (!is_constant()) throw std::logic_error("scalar field is not constant");
    if (num_.is_zero()) return 0;
    return num_.constant_value() / den_.constant_value();
}

ScalarField ScalarField::operator+(const ScalarField& o) const {
    if (den_ == o.den_) return ScalarField(num_ + o.num_, den_);
    return ScalarField(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ScalarField ScalarField::operator-(const ScalarField& o) const {
    if (den_ == o.den_) return ScalarField(num_ - o.num_, den_);
    return ScalarField(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

ScalarField ScalarField::operator*(const ScalarField& o) const {
    return ScalarField(num_ * o.num_, den_ * o.den_);
}

ScalarField ScalarField::operator/(const ScalarField& o) const {
    if (o.is_zero()) throw std::domain_error("division by the identically-zero field");
    return ScalarField(num_ * o.den_, den_ * o.num_);
}

ScalarField ScalarField::operator-() const {
    ScalarField r = *this;
    r.num_ = -r.num_;
    return r;
}

ScalarField ScalarField::pow(unsigned e) const {
    ScalarField r = constant(vars(), 1);
    ScalarField base = *this;
    while (e > 0) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

bool ScalarField::operator==(const ScalarField& o) const {
    return num_ * o.den_ == o.num_ * den_;
}

ScalarField ScalarField::derivative(const std::string& name) const {
    if (den_.is_constant())
        return ScalarField(num_.derivative(name), den_);
    return ScalarField(num_.derivative(name) * den_ - num_ * den_.derivative(name),
                       den_ * den_);
}

Rational ScalarField::evaluate(const std::map<std::string, Rational>& point) const {
    Rational d = den_.evaluate(point);
    if (d == 0) throw std::domain_error("denominator vanishes at the evaluation point");
    return num_.evaluate(point) / d;
}

std::string ScalarField::to_string() const {
    if (den_.is_constant()) return num_.to_string();
    std::string n = num_.to_string();
    if (num_.terms().size() > 1) n = "(" + n + ")";
    return n + "/(" + den_.to_string() + ")";
}

}  // namespace gff
