#include "atwist/program.hpp"

#include <cmath>
#include <unordered_map>

#include "atwist/errors.hpp"

namespace atwist {

namespace {

struct ExprNodeKeyHash {
    size_t operator()(const void* p) const { return std::hash<const void*>()(p); }
};

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

Program Program::compile(const ScalarExpr& e, double guard_eps) {
    Program prog;
    prog.guard_eps_ = guard_eps;

    std::unordered_map<const void*, int, ExprNodeKeyHash> slot_of;

    // iterative post-order so deep trees cannot blow the call stack
    struct Frame {
        ScalarExpr expr;
        size_t next_kid = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({e});

    auto emit = [&prog](Op op) {
        prog.ops_.push_back(op);
        return static_cast<int>(prog.ops_.size() - 1);
    };

    while (!stack.empty()) {
        Frame& f = stack.back();
        const void* key = f.expr.node();
        if (slot_of.count(key)) {
            stack.pop_back();
            continue;
        }
        auto kids = f.expr.children();
        if (f.next_kid < kids.size()) {
            ScalarExpr kid = kids[f.next_kid++];
            if (!slot_of.count(kid.node())) stack.push_back({kid});
            continue;
        }

        Op op;
        op.kind = f.expr.kind();
        switch (op.kind) {
        case ExprKind::Constant: op.value = f.expr.value(); break;
        case ExprKind::Coord: op.index = f.expr.coord_index(); break;
        case ExprKind::Power: op.exponent = f.expr.exponent(); [[fallthrough]];
        default:
            op.a = static_cast<int>(prog.kid_slots_.size());
            op.n = static_cast<int>(kids.size());
            for (const auto& kid : kids) prog.kid_slots_.push_back(slot_of.at(kid.node()));
            break;
        }
        slot_of[key] = emit(op);
        stack.pop_back();
    }

    return prog;
}

Complex Program::run(std::span<const double> point) const {
    return run(point, scratch_);
}

Complex Program::run(std::span<const double> point, std::vector<Complex>& v) const {
    v.resize(ops_.size());
    for (size_t s = 0; s < ops_.size(); ++s) {
        const Op& op = ops_[s];
        switch (op.kind) {
        case ExprKind::Constant: v[s] = op.value; break;
        case ExprKind::Coord: {
            if (op.index < 0 || static_cast<size_t>(op.index) >= point.size())
                throw Error("program: coordinate index out of range for point");
            v[s] = Complex{point[op.index], 0.0};
            break;
        }
        case ExprKind::Sum: {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < op.n; ++k) acc += v[kid_slots_[op.a + k]];
            v[s] = acc;
            break;
        }
        case ExprKind::Product: {
            Complex acc{1.0, 0.0};
            for (int k = 0; k < op.n; ++k) acc *= v[kid_slots_[op.a + k]];
            v[s] = acc;
            break;
        }
        case ExprKind::Negate: v[s] = -v[kid_slots_[op.a]]; break;
        case ExprKind::Quotient: {
            Complex den = v[kid_slots_[op.a + 1]];
            if (std::abs(den) < guard_eps_) throw DivisionNearZero("denominator below guard");
            v[s] = v[kid_slots_[op.a]] / den;
            break;
        }
        case ExprKind::Power: {
            Complex base = v[kid_slots_[op.a]];
            if (op.exponent < 0 && std::abs(base) < guard_eps_)
                throw DivisionNearZero("negative power of near-zero base");
            v[s] = int_pow(base, op.exponent);
            break;
        }
        case ExprKind::Exp: v[s] = std::exp(v[kid_slots_[op.a]]); break;
        case ExprKind::Ln: {
            Complex arg = v[kid_slots_[op.a]];
            if (std::abs(arg) < guard_eps_) throw LnOfZero("ln of near-zero argument");
            v[s] = std::log(arg);
            break;
        }
        case ExprKind::Sin: v[s] = std::sin(v[kid_slots_[op.a]]); break;
        case ExprKind::Cos: v[s] = std::cos(v[kid_slots_[op.a]]); break;
        case ExprKind::Conj: v[s] = std::conj(v[kid_slots_[op.a]]); break;
        }
    }
    return v.back();
}

} // namespace atwist
