#include "gff/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>

namespace gff {

std::optional<Rational> rat_parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    auto read_digits = [&](Integer& out) -> bool {
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return false;
        out = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            out = out * 10 + (text[pos] - '0');
            ++pos;
        }
        return true;
    };
    Integer num;
    if (!read_digits(num)) return std::nullopt;
    Integer den = 1;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!read_digits(den) || den == 0) return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;
    Rational q(num, den);
    return neg ? Rational(-q) : q;
}

namespace {

std::optional<Integer> int_sqrt(const Integer& n) {
    if (n < 0) return std::nullopt;
    Integer r = boost::multiprecision::sqrt(n);
    if (r * r != n) return std::nullopt;
    return r;
}

}  // namespace

std::optional<Rational> rat_sqrt(const Rational& q) {
    Rational a = q < 0 ? Rational(-q) : q;
    auto n = int_sqrt(rat_num(a));
    if (!n) return std::nullopt;
    auto d = int_sqrt(rat_den(a));
    if (!d) return std::nullopt;
    return Rational(*n, *d);
}

}  // namespace gff
