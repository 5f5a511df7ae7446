#include "atwist/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

#include "atwist/errors.hpp"

namespace atwist {

namespace {

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    int line;
    int col0; // column of text[0] minus one, for error offsets

    int column_at(size_t p) const { return col0 + static_cast<int>(p) + 1; }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
};

[[noreturn]] void fail(const Lexer& lx, size_t at, const std::string& token,
                       const std::string& msg, ParseErrorKind kind = ParseErrorKind::Syntax) {
    throw ParseError(kind, lx.line, lx.column_at(at), token, msg);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Parser {
    Lexer lx;
    const Chart& chart;
    const NameResolver& extra;

    ScalarExpr parse_expr() {
        ScalarExpr acc = parse_term();
        while (true) {
            char c = lx.peek();
            if (c == '+' || c == '-') {
                ++lx.pos;
                ScalarExpr rhs = parse_term();
                acc = (c == '+') ? acc + rhs : acc - rhs;
            } else {
                return acc;
            }
        }
    }

    ScalarExpr parse_term() {
        ScalarExpr acc = parse_factor();
        while (true) {
            char c = lx.peek();
            if (c == '*' || c == '/') {
                ++lx.pos;
                ScalarExpr rhs = parse_factor();
                acc = (c == '*') ? acc * rhs : acc / rhs;
            } else {
                return acc;
            }
        }
    }

    ScalarExpr parse_factor() {
        ScalarExpr base = parse_base();
        if (lx.peek() == '^') {
            ++lx.pos;
            return pow(base, parse_signed_integer());
        }
        return base;
    }

    int parse_signed_integer() {
        lx.skip_ws();
        size_t start = lx.pos;
        if (lx.pos < lx.text.size() && (lx.text[lx.pos] == '+' || lx.text[lx.pos] == '-')) ++lx.pos;
        size_t digits = lx.pos;
        while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos])))
            ++lx.pos;
        if (lx.pos == digits)
            fail(lx, start, std::string(lx.text.substr(start, lx.pos - start)),
                 "expected integer exponent after '^'");
        return std::atoi(std::string(lx.text.substr(start, lx.pos - start)).c_str());
    }

    ScalarExpr parse_base() {
        if (lx.eof()) fail(lx, lx.pos, "", "unexpected end of expression");
        char c = lx.text[lx.pos];
        if (c == '-') {
            ++lx.pos;
            return -parse_base();
        }
        if (c == '(') {
            ++lx.pos;
            ScalarExpr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (ident_start(c)) return parse_identifier();
        fail(lx, lx.pos, std::string(1, c), "unexpected character in expression");
    }

    void expect(char c) {
        if (lx.peek() != c)
            fail(lx, lx.pos, lx.pos < lx.text.size() ? std::string(1, lx.text[lx.pos]) : "",
                 std::string("expected '") + c + "'");
        ++lx.pos;
    }

    ScalarExpr parse_number() {
        size_t start = lx.pos;
        while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos])))
            ++lx.pos;
        if (lx.pos < lx.text.size() && lx.text[lx.pos] == '.') {
            ++lx.pos;
            while (lx.pos < lx.text.size() &&
                   std::isdigit(static_cast<unsigned char>(lx.text[lx.pos])))
                ++lx.pos;
        }
        if (lx.pos < lx.text.size() && (lx.text[lx.pos] == 'e' || lx.text[lx.pos] == 'E')) {
            size_t mark = lx.pos;
            ++lx.pos;
            if (lx.pos < lx.text.size() && (lx.text[lx.pos] == '+' || lx.text[lx.pos] == '-'))
                ++lx.pos;
            if (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos]))) {
                while (lx.pos < lx.text.size() &&
                       std::isdigit(static_cast<unsigned char>(lx.text[lx.pos])))
                    ++lx.pos;
            } else {
                lx.pos = mark; // "2e" was the number 2 followed by identifier 'e'
            }
        }
        std::string lit(lx.text.substr(start, lx.pos - start));
        return constant(std::strtod(lit.c_str(), nullptr));
    }

    ScalarExpr parse_identifier() {
        size_t start = lx.pos;
        while (lx.pos < lx.text.size() && ident_char(lx.text[lx.pos])) ++lx.pos;
        std::string name(lx.text.substr(start, lx.pos - start));

        if (lx.peek() == '(') {
            ScalarExpr (*fn)(const ScalarExpr&) = nullptr;
            if (name == "exp") fn = static_cast<ScalarExpr (*)(const ScalarExpr&)>(&exp);
            else if (name == "ln") fn = &ln;
            else if (name == "sin") fn = static_cast<ScalarExpr (*)(const ScalarExpr&)>(&sin);
            else if (name == "cos") fn = static_cast<ScalarExpr (*)(const ScalarExpr&)>(&cos);
            else if (name == "conj") fn = &conj_expr;
            if (fn) {
                ++lx.pos; // '('
                ScalarExpr arg = parse_expr();
                expect(')');
                return fn(arg);
            }
        }

        if (name == "i") return imaginary_unit();
        for (int k = 0; k < chart.dim; ++k)
            if (chart.coord_names[k] == name) return coordinate(k);
        ScalarExpr resolved;
        if (extra && extra(name, resolved)) return resolved;
        fail(lx, start, name, "unknown identifier: " + name, ParseErrorKind::UnknownIdentifier);
    }
};

} // namespace

ScalarExpr parse_expression(std::string_view text, const Chart& chart, const NameResolver& extra,
                            int line, int col0) {
    Parser p{Lexer{text, 0, line, col0}, chart, extra};
    ScalarExpr e = p.parse_expr();
    if (!p.lx.eof())
        throw ParseError(ParseErrorKind::Syntax, line, p.lx.column_at(p.lx.pos),
                         std::string(1, p.lx.text[p.lx.pos]), "trailing characters after expression");
    return e;
}

} // namespace atwist
