#pragma once

#include <vector>

#include "atwist/expr.hpp"

namespace atwist {

/// Expression trees share subtrees freely, so a recursive eval() can revisit
/// the same node many times. Program flattens the DAG once (one slot per
/// distinct node) into a linear instruction list; running it touches every
/// distinct node exactly once per point. This is what the samplers and the
/// quadrature loop use.
class Program {
public:
    static Program compile(const ScalarExpr& e, double guard_eps = 1e-12);

    Complex run(std::span<const double> point) const;

    /// Re-entrant variant: callers that evaluate in parallel hand each
    /// thread its own scratch vector.
    Complex run(std::span<const double> point, std::vector<Complex>& scratch) const;

    size_t size() const { return ops_.size(); }

private:
    struct Op {
        ExprKind kind;
        Complex value;   // Constant
        int index = 0;   // Coord
        int exponent = 0;
        int a = 0;       // first operand slot / kid range start
        int n = 0;       // kid count for Sum/Product
    };

    std::vector<Op> ops_;
    std::vector<int> kid_slots_;
    double guard_eps_ = 1e-12;

    mutable std::vector<Complex> scratch_;
};

} // namespace atwist
