#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "atwist/chart.hpp"

namespace atwist {

using Complex = std::complex<double>;

enum class ExprKind {
    Constant,   // complex literal
    Coord,      // coordinate x_k, 0-based index
    Sum,        // n-ary
    Product,    // n-ary
    Negate,
    Quotient,
    Power,      // integer exponent
    Exp,
    Ln,
    Sin,
    Cos,
    Conj,
};

struct ExprNode;

/// Immutable symbolic expression over chart coordinates with complex
/// constants. Value type; copies share the underlying tree. Subtrees are
/// shared aggressively, so expressions are DAGs in practice and evaluation
/// goes through a caching compiler (program.hpp) where speed matters.
///
/// Construction runs the structural simplifier (constant folding, 0/1
/// identities, double negation, conj of conj, nested power flattening), so
/// every reachable tree is already in simplified form and simplify() is
/// idempotent by construction.
class ScalarExpr {
public:
    ScalarExpr(); // zero

    ExprKind kind() const;
    Complex value() const;                        // Constant
    int coord_index() const;                      // Coord
    int exponent() const;                         // Power
    std::span<const ScalarExpr> children() const;

    bool is_zero() const;
    bool is_one() const;
    bool is_constant() const { return kind() == ExprKind::Constant; }

    // internal: used by builders
    explicit ScalarExpr(std::shared_ptr<const ExprNode> node);
    const ExprNode* node() const { return node_.get(); }

private:
    std::shared_ptr<const ExprNode> node_;
};

ScalarExpr constant(Complex c);
ScalarExpr constant(double re);
ScalarExpr imaginary_unit();
ScalarExpr coordinate(int index);

ScalarExpr sum_of(std::vector<ScalarExpr> terms);
ScalarExpr product_of(std::vector<ScalarExpr> factors);

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);

ScalarExpr operator*(Complex c, const ScalarExpr& e);
ScalarExpr operator*(double c, const ScalarExpr& e);
ScalarExpr operator+(const ScalarExpr& e, Complex c);
ScalarExpr operator+(Complex c, const ScalarExpr& e);

ScalarExpr pow(const ScalarExpr& base, int exponent);
ScalarExpr exp(const ScalarExpr& e);
ScalarExpr ln(const ScalarExpr& e);
ScalarExpr sin(const ScalarExpr& e);
ScalarExpr cos(const ScalarExpr& e);

/// Structural conjugation: constants conjugate, coordinates are real and
/// stay fixed, everything else distributes (exp/ln/sin/cos commute with
/// conjugation because coordinates are real). conj(conj(e)) == e.
ScalarExpr conj_expr(const ScalarExpr& e);

/// Deep structural equality (after the builders' normal form).
bool struct_eq(const ScalarExpr& a, const ScalarExpr& b);

/// Rebuilds the tree bottom-up through the smart constructors. A no-op on
/// anything built through the public API; exists so simplify(simplify(e))
/// == simplify(e) is testable.
ScalarExpr simplify(const ScalarExpr& e);

/// Recursive evaluation at a real point. Throws DivisionNearZero when a
/// denominator magnitude drops below guard_eps, LnOfZero likewise for ln.
Complex eval(const ScalarExpr& e, std::span<const double> point, double guard_eps = 1e-12);

/// d/dx_k, coordinates treated as independent reals.
ScalarExpr partial(const ScalarExpr& e, int k);

/// Wirtinger derivative for the chart's k-th declared pair (a,b):
///   conjugated=false:  d/dz    = (d/dx_a - i d/dx_b)/2
///   conjugated=true:   d/dzbar = (d/dx_a + i d/dx_b)/2
/// Throws NoSuchPair when the chart declares no such pair.
ScalarExpr wirtinger(const Chart& chart, const ScalarExpr& e, int pair_index, bool conjugated);

/// Applies X = sum_j X^j d/dx_j given the component list.
ScalarExpr apply_derivation(std::span<const ScalarExpr> components, const ScalarExpr& f);

/// Renders the expression in the manifest grammar; parsing the result
/// reproduces a structurally equal tree. The chart overload uses the chart's
/// coordinate names, the other one falls back to x1, x2, ...
std::string to_string(const ScalarExpr& e);
std::string to_string(const ScalarExpr& e, const Chart& chart);

/// Shortest decimal form of v that strtod round-trips to the same double.
/// Shared by the expression printer and the manifest serializer.
std::string format_real(double v);

} // namespace atwist
