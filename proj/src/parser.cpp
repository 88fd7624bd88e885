#include "gff/spec_io.hpp"

#include <cctype>
#include <sstream>

namespace gff {

namespace {

// Recursive-descent parser over a single expression. Tracks column within a
// caller-provided source line so file-level diagnostics stay accurate.
class ExprParser {
public:
    ExprParser(const std::string& text, const Coords& coords, int line, int col0)
        : text_(text), coords_(coords), line_(line), col0_(col0) {}

    ScalarField parse() {
        skip_ws();
        ScalarField v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    const std::string& text_;
    const Coords& coords_;
    int line_;
    int col0_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, col0_ + static_cast<int>(pos_), msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    ScalarField expr() {
        ScalarField v = term();
        while (true) {
            if (accept('+'))
                v = v + term();
            else if (accept('-'))
                v = v - term();
            else
                return v;
        }
    }

    ScalarField term() {
        ScalarField v = factor();
        while (accept('*')) v = v * factor();
        return v;
    }

    ScalarField factor() {
        ScalarField v = base();
        if (accept('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected non-negative integer exponent");
            unsigned e = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                e = e * 10 + static_cast<unsigned>(text_[pos_] - '0');
                ++pos_;
            }
            v = v.pow(e);
        }
        return v;
    }

    ScalarField base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return -base();
        }
        if (c == '(') {
            ++pos_;
            ScalarField v = expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return rational_literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (c == '.') fail("floating-point literals are not allowed; use p/q rationals");
        fail(std::string("unexpected character '") + c + "'");
    }

    ScalarField rational_literal() {
        Integer num = read_int();
        if (pos_ < text_.size() && text_[pos_] == '.')
            fail("floating-point literals are not allowed; use p/q rationals");
        Integer den = 1;
        std::size_t save = pos_;
        if (accept('/')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = save;  // "x / y" is not in the grammar; report at the slash
                fail("expected positive integer denominator");
            }
            den = read_int();
            if (den == 0) fail("zero denominator");
        }
        return ScalarField::constant(coords_, Rational(num, den));
    }

    Integer read_int() {
        Integer v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    ScalarField identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        for (const auto& v : coords_)
            if (v == name) return ScalarField::variable(coords_, name);
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

ScalarField parse_expression(const std::string& text, const Coords& coords) {
    return ExprParser(text, coords, 1, 1).parse();
}

ScalarField parse_expression_at(const std::string& text, const Coords& coords, int line, int col) {
    return ExprParser(text, coords, line, col).parse();
}

}  // namespace gff
