#include "gff/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gff {

bool GradedLexLess::operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t Polynomial::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return i;
    throw std::invalid_argument("unknown variable: " + name);
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::constant(std::vector<std::string> vars, const Rational& c) {
    Polynomial p(std::move(vars));
    p.add_term(Exponents(p.vars_.size(), 0), c);
    return p;
}

Polynomial Polynomial::variable(const std::vector<std::string>& vars, const std::string& name) {
    Polynomial p(vars);
    Exponents e(vars.size(), 0);
    e[p.var_index(name)] = 1;
    p.add_term(e, 1);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                        [](int e) { return e == 0; }));
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return terms_.begin()->second;
}

int Polynomial::total_degree() const {
    if (terms_.empty()) return -1;
    const auto& e = terms_.rbegin()->first;
    return std::accumulate(e.begin(), e.end(), 0);
}

int Polynomial::degree_in(const std::string& name) const {
    std::size_t i = var_index(name);
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
}

std::vector<std::string> Polynomial::support() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        for (const auto& [e, c] : terms_) {
            if (e[i] > 0) {
                out.push_back(vars_[i]);
                break;
            }
        }
    }
    return out;
}

namespace {
void check_same_vars(const Polynomial& a, const Polynomial& b) {
    if (a.vars() != b.vars()) throw std::invalid_argument("polynomial variable lists differ");
}
}  // namespace

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_same_vars(*this, o);
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    check_same_vars(*this, o);
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    Polynomial r(vars_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_same_vars(*this, o);
    Polynomial r(vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial r = constant(vars_, 1);
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return vars_ == o.vars_ && terms_ == o.terms_;
}

Polynomial Polynomial::derivative(const std::string& name) const {
    std::size_t i = var_index(name);
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exponents d = e;
        d[i] -= 1;
        r.add_term(d, c * e[i]);
    }
    return r;
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& point) const {
    std::vector<Rational> vals(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = point.find(vars_[i]);
        if (it == point.end()) throw std::invalid_argument("unbound variable: " + vars_[i]);
        vals[i] = it->second;
    }
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= vals[i];
        acc += t;
    }
    return acc;
}

Rational Polynomial::content() const {
    Integer gn = 0, ld = 1;
    for (const auto& [e, c] : terms_) {
        gn = boost::multiprecision::gcd(gn, rat_num(c) < 0 ? Integer(-rat_num(c)) : rat_num(c));
        ld = ld / boost::multiprecision::gcd(ld, rat_den(c)) * rat_den(c);
    }
    if (gn == 0) return 0;
    return Rational(gn, ld);
}

int Polynomial::leading_sign() const {
    if (terms_.empty()) return 0;
    return terms_.rbegin()->second < 0 ? -1 : 1;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
    check_same_vars(*this, d);
    if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
    Polynomial q(vars_);
    Polynomial r = *this;
    const auto& dlead = *d.terms_.rbegin();
    while (!r.is_zero()) {
        const auto& rlead = *r.terms_.rbegin();
        Exponents e(rlead.first.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = rlead.first[i] - dlead.first[i];
            if (e[i] < 0) return std::nullopt;
        }
        Rational c = rlead.second / dlead.second;
        Polynomial t(vars_);
        t.add_term(e, c);
        q = q + t;
        r = r - t * d;
    }
    return q;
}

Polynomial Polynomial::with_vars(const std::vector<std::string>& newvars) const {
    std::vector<std::size_t> pos(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(newvars.begin(), newvars.end(), vars_[i]);
        if (it == newvars.end())
            throw std::invalid_argument("with_vars: missing variable " + vars_[i]);
        pos[i] = static_cast<std::size_t>(it - newvars.begin());
    }
    Polynomial r(newvars);
    for (const auto& [e, c] : terms_) {
        Exponents ne(newvars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
        r.add_term(ne, c);
    }
    return r;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        Rational c = it->second;
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        Rational a = neg ? Rational(-c) : c;
        std::vector<std::string> factors;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            int e = it->first[i];
            if (e == 1)
                factors.push_back(vars_[i]);
            else if (e > 1)
                factors.push_back(vars_[i] + "^" + std::to_string(e));
        }
        if (factors.empty()) {
            os << rat_to_string(a);
        } else {
            if (a != 1) os << rat_to_string(a) << "*";
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (i) os << "*";
                os << factors[i];
            }
        }
        first = false;
    }
    return os.str();
}

}  // namespace gff
