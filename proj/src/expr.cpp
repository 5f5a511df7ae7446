#include "atwist/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "atwist/errors.hpp"

namespace atwist {

struct ExprNode {
    ExprKind kind = ExprKind::Constant;
    Complex value{};
    int index = 0;     // Coord
    int exponent = 0;  // Power
    std::vector<ScalarExpr> kids;
};

namespace {

ScalarExpr wrap(ExprNode node) {
    return ScalarExpr(std::make_shared<const ExprNode>(std::move(node)));
}

ScalarExpr make_constant(Complex c) {
    ExprNode n;
    n.value = c;
    return wrap(std::move(n));
}

const ScalarExpr& zero_expr() {
    static const ScalarExpr z = make_constant(Complex{0.0, 0.0});
    return z;
}

const ScalarExpr& one_expr() {
    static const ScalarExpr o = make_constant(Complex{1.0, 0.0});
    return o;
}

} // namespace

ScalarExpr::ScalarExpr() : node_(zero_expr().node_) {}

ScalarExpr::ScalarExpr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

ExprKind ScalarExpr::kind() const { return node_->kind; }
Complex ScalarExpr::value() const { return node_->value; }
int ScalarExpr::coord_index() const { return node_->index; }
int ScalarExpr::exponent() const { return node_->exponent; }
std::span<const ScalarExpr> ScalarExpr::children() const { return node_->kids; }

bool ScalarExpr::is_zero() const {
    return kind() == ExprKind::Constant && value() == Complex{0.0, 0.0};
}

bool ScalarExpr::is_one() const {
    return kind() == ExprKind::Constant && value() == Complex{1.0, 0.0};
}

ScalarExpr constant(Complex c) {
    if (c == Complex{0.0, 0.0}) return zero_expr();
    if (c == Complex{1.0, 0.0}) return one_expr();
    return make_constant(c);
}

ScalarExpr constant(double re) { return constant(Complex{re, 0.0}); }

ScalarExpr imaginary_unit() { return constant(Complex{0.0, 1.0}); }

ScalarExpr coordinate(int index) {
    if (index < 0) throw Error("coordinate index must be non-negative");
    ExprNode n;
    n.kind = ExprKind::Coord;
    n.index = index;
    return wrap(std::move(n));
}

ScalarExpr sum_of(std::vector<ScalarExpr> terms) {
    std::vector<ScalarExpr> flat;
    Complex folded{0.0, 0.0};
    for (auto& t : terms) {
        if (t.kind() == ExprKind::Sum) {
            for (const auto& k : t.children()) {
                if (k.is_constant()) folded += k.value();
                else flat.push_back(k);
            }
        } else if (t.is_constant()) {
            folded += t.value();
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (folded != Complex{0.0, 0.0}) flat.push_back(constant(folded));
    if (flat.empty()) return zero_expr();
    if (flat.size() == 1) return flat.front();
    ExprNode n;
    n.kind = ExprKind::Sum;
    n.kids = std::move(flat);
    return wrap(std::move(n));
}

ScalarExpr product_of(std::vector<ScalarExpr> factors) {
    std::vector<ScalarExpr> flat;
    Complex folded{1.0, 0.0};
    for (auto& f : factors) {
        if (f.kind() == ExprKind::Product) {
            for (const auto& k : f.children()) {
                if (k.is_constant()) folded *= k.value();
                else flat.push_back(k);
            }
        } else if (f.is_constant()) {
            folded *= f.value();
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (folded == Complex{0.0, 0.0}) return zero_expr();
    if (flat.empty()) return constant(folded);
    if (folded != Complex{1.0, 0.0}) {
        // keep the constant coefficient in front
        flat.insert(flat.begin(), constant(folded));
    }
    if (flat.size() == 1) return flat.front();
    ExprNode n;
    n.kind = ExprKind::Product;
    n.kids = std::move(flat);
    return wrap(std::move(n));
}

ScalarExpr operator-(const ScalarExpr& a) {
    if (a.is_constant()) return constant(-a.value());
    if (a.kind() == ExprKind::Negate) return a.children()[0];
    ExprNode n;
    n.kind = ExprKind::Negate;
    n.kids = {a};
    return wrap(std::move(n));
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) { return sum_of({a, b}); }
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return sum_of({a, -b}); }
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) { return product_of({a, b}); }

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_zero()) return zero_expr();
    if (b.is_one()) return a;
    if (b.is_constant() && std::abs(b.value()) > 0.0) {
        if (a.is_constant()) return constant(a.value() / b.value());
        return product_of({constant(Complex{1.0, 0.0} / b.value()), a});
    }
    ExprNode n;
    n.kind = ExprKind::Quotient;
    n.kids = {a, b};
    return wrap(std::move(n));
}

ScalarExpr operator*(Complex c, const ScalarExpr& e) { return product_of({constant(c), e}); }
ScalarExpr operator*(double c, const ScalarExpr& e) { return product_of({constant(c), e}); }
ScalarExpr operator+(const ScalarExpr& e, Complex c) { return sum_of({e, constant(c)}); }
ScalarExpr operator+(Complex c, const ScalarExpr& e) { return sum_of({constant(c), e}); }

ScalarExpr pow(const ScalarExpr& base, int exponent) {
    if (exponent == 0) return one_expr();
    if (exponent == 1) return base;
    if (base.is_constant()) return constant(std::pow(base.value(), exponent));
    if (base.kind() == ExprKind::Power) {
        return pow(base.children()[0], base.exponent() * exponent);
    }
    ExprNode n;
    n.kind = ExprKind::Power;
    n.exponent = exponent;
    n.kids = {base};
    return wrap(std::move(n));
}

namespace {

ScalarExpr unary(ExprKind kind, const ScalarExpr& e) {
    ExprNode n;
    n.kind = kind;
    n.kids = {e};
    return wrap(std::move(n));
}

} // namespace

ScalarExpr exp(const ScalarExpr& e) {
    if (e.is_constant()) return constant(std::exp(e.value()));
    return unary(ExprKind::Exp, e);
}

ScalarExpr ln(const ScalarExpr& e) {
    if (e.is_constant() && std::abs(e.value()) > 0.0) return constant(std::log(e.value()));
    return unary(ExprKind::Ln, e);
}

ScalarExpr sin(const ScalarExpr& e) {
    if (e.is_constant()) return constant(std::sin(e.value()));
    return unary(ExprKind::Sin, e);
}

ScalarExpr cos(const ScalarExpr& e) {
    if (e.is_constant()) return constant(std::cos(e.value()));
    return unary(ExprKind::Cos, e);
}

ScalarExpr conj_expr(const ScalarExpr& e) {
    switch (e.kind()) {
    case ExprKind::Constant: return constant(std::conj(e.value()));
    case ExprKind::Coord: return e;
    case ExprKind::Sum: {
        std::vector<ScalarExpr> kids;
        kids.reserve(e.children().size());
        for (const auto& k : e.children()) kids.push_back(conj_expr(k));
        return sum_of(std::move(kids));
    }
    case ExprKind::Product: {
        std::vector<ScalarExpr> kids;
        kids.reserve(e.children().size());
        for (const auto& k : e.children()) kids.push_back(conj_expr(k));
        return product_of(std::move(kids));
    }
    case ExprKind::Negate: return -conj_expr(e.children()[0]);
    case ExprKind::Quotient: return conj_expr(e.children()[0]) / conj_expr(e.children()[1]);
    case ExprKind::Power: return pow(conj_expr(e.children()[0]), e.exponent());
    case ExprKind::Exp: return exp(conj_expr(e.children()[0]));
    case ExprKind::Ln: return ln(conj_expr(e.children()[0]));
    case ExprKind::Sin: return sin(conj_expr(e.children()[0]));
    case ExprKind::Cos: return cos(conj_expr(e.children()[0]));
    case ExprKind::Conj: return e.children()[0];
    }
    throw Error("conj_expr: unhandled node kind");
}

bool struct_eq(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.node() == b.node()) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ExprKind::Constant: return a.value() == b.value();
    case ExprKind::Coord: return a.coord_index() == b.coord_index();
    case ExprKind::Power:
        if (a.exponent() != b.exponent()) return false;
        break;
    default: break;
    }
    auto ka = a.children(), kb = b.children();
    if (ka.size() != kb.size()) return false;
    for (size_t i = 0; i < ka.size(); ++i)
        if (!struct_eq(ka[i], kb[i])) return false;
    return true;
}

ScalarExpr simplify(const ScalarExpr& e) {
    switch (e.kind()) {
    case ExprKind::Constant:
    case ExprKind::Coord: return e;
    case ExprKind::Sum: {
        std::vector<ScalarExpr> kids;
        for (const auto& k : e.children()) kids.push_back(simplify(k));
        return sum_of(std::move(kids));
    }
    case ExprKind::Product: {
        std::vector<ScalarExpr> kids;
        for (const auto& k : e.children()) kids.push_back(simplify(k));
        return product_of(std::move(kids));
    }
    case ExprKind::Negate: return -simplify(e.children()[0]);
    case ExprKind::Quotient: return simplify(e.children()[0]) / simplify(e.children()[1]);
    case ExprKind::Power: return pow(simplify(e.children()[0]), e.exponent());
    case ExprKind::Exp: return exp(simplify(e.children()[0]));
    case ExprKind::Ln: return ln(simplify(e.children()[0]));
    case ExprKind::Sin: return sin(simplify(e.children()[0]));
    case ExprKind::Cos: return cos(simplify(e.children()[0]));
    case ExprKind::Conj: return conj_expr(simplify(e.children()[0]));
    }
    throw Error("simplify: unhandled node kind");
}

namespace {

Complex int_pow(Complex base, int n) {
    if (n < 0) return Complex{1.0, 0.0} / int_pow(base, -n);
    Complex acc{1.0, 0.0};
    Complex b = base;
    for (int k = n; k > 0; k >>= 1) {
        if (k & 1) acc *= b;
        b *= b;
    }
    return acc;
}

} // namespace

Complex eval(const ScalarExpr& e, std::span<const double> point, double guard_eps) {
    switch (e.kind()) {
    case ExprKind::Constant: return e.value();
    case ExprKind::Coord: {
        int i = e.coord_index();
        if (i < 0 || static_cast<size_t>(i) >= point.size())
            throw Error("eval: coordinate index out of range for point");
        return Complex{point[i], 0.0};
    }
    case ExprKind::Sum: {
        Complex acc{0.0, 0.0};
        for (const auto& k : e.children()) acc += eval(k, point, guard_eps);
        return acc;
    }
    case ExprKind::Product: {
        Complex acc{1.0, 0.0};
        for (const auto& k : e.children()) acc *= eval(k, point, guard_eps);
        return acc;
    }
    case ExprKind::Negate: return -eval(e.children()[0], point, guard_eps);
    case ExprKind::Quotient: {
        Complex den = eval(e.children()[1], point, guard_eps);
        if (std::abs(den) < guard_eps) throw DivisionNearZero("denominator below guard");
        return eval(e.children()[0], point, guard_eps) / den;
    }
    case ExprKind::Power: {
        Complex base = eval(e.children()[0], point, guard_eps);
        if (e.exponent() < 0 && std::abs(base) < guard_eps)
            throw DivisionNearZero("negative power of near-zero base");
        return int_pow(base, e.exponent());
    }
    case ExprKind::Exp: return std::exp(eval(e.children()[0], point, guard_eps));
    case ExprKind::Ln: {
        Complex arg = eval(e.children()[0], point, guard_eps);
        if (std::abs(arg) < guard_eps) throw LnOfZero("ln of near-zero argument");
        return std::log(arg);
    }
    case ExprKind::Sin: return std::sin(eval(e.children()[0], point, guard_eps));
    case ExprKind::Cos: return std::cos(eval(e.children()[0], point, guard_eps));
    case ExprKind::Conj: return std::conj(eval(e.children()[0], point, guard_eps));
    }
    throw Error("eval: unhandled node kind");
}

ScalarExpr partial(const ScalarExpr& e, int k) {
    switch (e.kind()) {
    case ExprKind::Constant: return constant(0.0);
    case ExprKind::Coord: return constant(e.coord_index() == k ? 1.0 : 0.0);
    case ExprKind::Sum: {
        std::vector<ScalarExpr> kids;
        for (const auto& c : e.children()) kids.push_back(partial(c, k));
        return sum_of(std::move(kids));
    }
    case ExprKind::Product: {
        // product rule over the n-ary factor list
        std::vector<ScalarExpr> terms;
        auto kids = e.children();
        for (size_t i = 0; i < kids.size(); ++i) {
            ScalarExpr di = partial(kids[i], k);
            if (di.is_zero()) continue;
            std::vector<ScalarExpr> factors;
            factors.reserve(kids.size());
            for (size_t j = 0; j < kids.size(); ++j) factors.push_back(j == i ? di : kids[j]);
            terms.push_back(product_of(std::move(factors)));
        }
        return sum_of(std::move(terms));
    }
    case ExprKind::Negate: return -partial(e.children()[0], k);
    case ExprKind::Quotient: {
        const auto& u = e.children()[0];
        const auto& v = e.children()[1];
        ScalarExpr du = partial(u, k), dv = partial(v, k);
        return (du * v - u * dv) / pow(v, 2);
    }
    case ExprKind::Power: {
        const auto& base = e.children()[0];
        return constant(double(e.exponent())) * pow(base, e.exponent() - 1) * partial(base, k);
    }
    case ExprKind::Exp: return e * partial(e.children()[0], k);
    case ExprKind::Ln: return partial(e.children()[0], k) / e.children()[0];
    case ExprKind::Sin: return cos(e.children()[0]) * partial(e.children()[0], k);
    case ExprKind::Cos: return -(sin(e.children()[0]) * partial(e.children()[0], k));
    case ExprKind::Conj: return conj_expr(partial(e.children()[0], k));
    }
    throw Error("partial: unhandled node kind");
}

ScalarExpr wirtinger(const Chart& chart, const ScalarExpr& e, int pair_index, bool conjugated) {
    if (pair_index < 0 || static_cast<size_t>(pair_index) >= chart.complex_pairs.size())
        throw NoSuchPair("chart declares no complex pair with that index");
    auto [re, im] = chart.complex_pairs[pair_index];
    ScalarExpr da = partial(e, re);
    ScalarExpr db = partial(e, im);
    Complex half_i{0.0, conjugated ? 0.5 : -0.5};
    return constant(0.5) * da + constant(half_i) * db;
}

ScalarExpr apply_derivation(std::span<const ScalarExpr> components, const ScalarExpr& f) {
    std::vector<ScalarExpr> terms;
    for (size_t j = 0; j < components.size(); ++j) {
        if (components[j].is_zero()) continue;
        ScalarExpr df = partial(f, static_cast<int>(j));
        if (df.is_zero()) continue;
        terms.push_back(components[j] * df);
    }
    return sum_of(std::move(terms));
}

// ---------------------------------------------------------------------------
// printing

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    // shortest representation that still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char t[40];
        std::snprintf(t, sizeof(t), "%.*g", prec, v);
        if (std::strtod(t, nullptr) == v) return std::string(t);
    }
    return s;
}

namespace {

// precedence levels: sum=0, product=1, unary minus=2, power=3, atom=4
constexpr int kPrecSum = 0;
constexpr int kPrecProduct = 1;
constexpr int kPrecNegate = 2;
constexpr int kPrecPower = 3;
constexpr int kPrecAtom = 4;

void print(const ScalarExpr& e, int parent_prec, const Chart* chart, std::string& out);

void print_constant(Complex c, int parent_prec, std::string& out) {
    const bool has_re = c.real() != 0.0;
    const bool has_im = c.imag() != 0.0;
    std::string body;
    int prec = kPrecAtom;
    if (!has_im) {
        body = format_real(c.real());
        if (c.real() < 0.0) prec = kPrecNegate;
    } else if (!has_re) {
        if (c.imag() == 1.0) {
            body = "i";
        } else if (c.imag() == -1.0) {
            body = "-i";
            prec = kPrecNegate;
        } else {
            body = format_real(c.imag()) + "*i";
            prec = kPrecProduct;
        }
    } else {
        body = format_real(c.real()) + " + " + format_real(c.imag()) + "*i";
        prec = kPrecSum;
    }
    if (prec < parent_prec) out += "(" + body + ")";
    else out += body;
}

void print(const ScalarExpr& e, int parent_prec, const Chart* chart, std::string& out) {
    switch (e.kind()) {
    case ExprKind::Constant:
        print_constant(e.value(), parent_prec, out);
        return;
    case ExprKind::Coord: {
        int i = e.coord_index();
        if (chart && i >= 0 && i < chart->dim) out += chart->coord_names[i];
        else out += "x" + std::to_string(i + 1);
        return;
    }
    case ExprKind::Sum: {
        std::string body;
        bool first = true;
        for (const auto& k : e.children()) {
            // render "a + -b" as "a - b"
            if (!first && k.kind() == ExprKind::Negate) {
                body += " - ";
                print(k.children()[0], kPrecNegate, chart, body);
            } else if (!first && k.is_constant() && k.value().imag() == 0.0 &&
                       k.value().real() < 0.0) {
                body += " - " + format_real(-k.value().real());
            } else {
                if (!first) body += " + ";
                print(k, first ? kPrecSum : kPrecSum + 1, chart, body);
            }
            first = false;
        }
        if (kPrecSum < parent_prec) out += "(" + body + ")";
        else out += body;
        return;
    }
    case ExprKind::Product: {
        std::string body;
        bool first = true;
        for (const auto& k : e.children()) {
            if (!first) body += "*";
            print(k, kPrecProduct + 1, chart, body);
            first = false;
        }
        if (kPrecProduct < parent_prec) out += "(" + body + ")";
        else out += body;
        return;
    }
    case ExprKind::Negate: {
        std::string body = "-";
        print(e.children()[0], kPrecNegate, chart, body);
        if (kPrecNegate < parent_prec) out += "(" + body + ")";
        else out += body;
        return;
    }
    case ExprKind::Quotient: {
        std::string body;
        print(e.children()[0], kPrecProduct, chart, body);
        body += " / ";
        print(e.children()[1], kPrecProduct + 1, chart, body);
        if (kPrecProduct < parent_prec) out += "(" + body + ")";
        else out += body;
        return;
    }
    case ExprKind::Power: {
        std::string body;
        print(e.children()[0], kPrecAtom, chart, body);
        body += "^" + std::to_string(e.exponent());
        if (kPrecPower < parent_prec) out += "(" + body + ")";
        else out += body;
        return;
    }
    case ExprKind::Exp:
    case ExprKind::Ln:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Conj: {
        const char* name = e.kind() == ExprKind::Exp   ? "exp"
                           : e.kind() == ExprKind::Ln  ? "ln"
                           : e.kind() == ExprKind::Sin ? "sin"
                           : e.kind() == ExprKind::Cos ? "cos"
                                                       : "conj";
        out += name;
        out += "(";
        print(e.children()[0], kPrecSum, chart, out);
        out += ")";
        return;
    }
    }
    throw Error("to_string: unhandled node kind");
}

} // namespace

std::string to_string(const ScalarExpr& e) {
    std::string out;
    print(e, kPrecSum, nullptr, out);
    return out;
}

std::string to_string(const ScalarExpr& e, const Chart& chart) {
    std::string out;
    print(e, kPrecSum, &chart, out);
    return out;
}

} // namespace atwist
