#include "atwist/calculus.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>
#include <string>

#include "atwist/errors.hpp"

namespace atwist {

namespace {

std::string tuple_salt(std::string_view base, const IndexTuple& idx) {
    std::string s(base);
    s += '/';
    for (int k : idx) {
        s += std::to_string(k);
        s += ',';
    }
    return s;
}

IndexTuple erase_at(const IndexTuple& idx, size_t pos) {
    IndexTuple out;
    out.reserve(idx.size() - 1);
    for (size_t i = 0; i < idx.size(); ++i)
        if (i != pos) out.push_back(idx[i]);
    return out;
}

/// Enumerates strictly ascending tuples of the given length over 0..dim-1.
void for_each_tuple(int dim, int length, const std::function<void(const IndexTuple&)>& fn) {
    IndexTuple t(length);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == length) {
            fn(t);
            return;
        }
        for (int v = start; v < dim; ++v) {
            t[pos] = v;
            rec(pos + 1, v + 1);
        }
    };
    rec(0, 0);
}

} // namespace

GradedField wedge(const GradedField& a, const GradedField& b) {
    require_compatible(a, b);
    GradedField out(a.chart(), a.variance(), a.grade() + b.grade());
    for (const auto& [ia, ca] : a.components()) {
        for (const auto& [ib, cb] : b.components()) {
            IndexTuple merged = ia;
            merged.insert(merged.end(), ib.begin(), ib.end());
            out.accumulate(std::move(merged), ca * cb);
        }
    }
    return out;
}

GradedField interior(const GradedField& one_leg, const GradedField& field) {
    if (one_leg.grade() != 1) throw Error("interior: contraction leg must have grade 1");
    if (one_leg.variance() == field.variance())
        throw VarianceMismatch("interior: leg and field must have opposite variance");
    if (one_leg.chart() != field.chart() && !same_chart(*one_leg.chart(), *field.chart()))
        throw ChartMismatch("interior: fields live on different charts");
    if (field.grade() == 0) return GradedField(field.chart(), field.variance(), 0);

    GradedField out(field.chart(), field.variance(), field.grade() - 1);
    for (const auto& [idx, c] : field.components()) {
        for (size_t pos = 0; pos < idx.size(); ++pos) {
            ScalarExpr leg = one_leg.component(std::array{idx[pos]});
            if (leg.is_zero()) continue;
            ScalarExpr term = leg * c;
            if (pos % 2 == 1) term = -term;
            out.accumulate(erase_at(idx, pos), std::move(term));
        }
    }
    return out;
}

ScalarExpr pair_eval(const GradedField& field, std::span<const GradedField> legs) {
    if (static_cast<int>(legs.size()) != field.grade())
        throw Error("pair_eval: need exactly grade-many legs");
    GradedField acc = field;
    for (const auto& leg : legs) acc = interior(leg, acc);
    return acc.scalar_value();
}

ScalarExpr pair1(const GradedField& a, const GradedField& b) {
    const GradedField& form = a.variance() == Variance::Covariant ? a : b;
    const GradedField& vec = a.variance() == Variance::Covariant ? b : a;
    if (form.variance() != Variance::Covariant || vec.variance() != Variance::Contravariant)
        throw VarianceMismatch("pair1: need one form and one vector");
    if (form.grade() != 1 || vec.grade() != 1) throw Error("pair1: both fields must have grade 1");
    std::vector<ScalarExpr> terms;
    for (const auto& [idx, c] : form.components()) {
        ScalarExpr v = vec.component(idx);
        if (!v.is_zero()) terms.push_back(c * v);
    }
    return sum_of(std::move(terms));
}

GradedField exterior_d(const GradedField& form) {
    if (form.variance() != Variance::Covariant)
        throw VarianceMismatch("exterior_d: argument must be a form");
    const int dim = form.chart()->dim;
    GradedField out(form.chart(), Variance::Covariant, form.grade() + 1);
    for (const auto& [idx, c] : form.components()) {
        for (int k = 0; k < dim; ++k) {
            ScalarExpr dc = partial(c, k);
            if (dc.is_zero()) continue;
            IndexTuple merged;
            merged.reserve(idx.size() + 1);
            merged.push_back(k);
            merged.insert(merged.end(), idx.begin(), idx.end());
            out.accumulate(std::move(merged), std::move(dc));
        }
    }
    return out;
}

GradedField d_scalar(const ChartPtr& chart, const ScalarExpr& f) {
    return exterior_d(GradedField::scalar(chart, Variance::Covariant, f));
}

GradedField lie_form(const GradedField& X, const GradedField& form) {
    return interior(X, exterior_d(form)) + exterior_d(interior(X, form));
}

ScalarExpr apply_vector(const GradedField& X, const ScalarExpr& f) {
    if (X.variance() != Variance::Contravariant || X.grade() != 1)
        throw Error("apply_vector: X must be a vector field");
    std::vector<ScalarExpr> terms;
    for (const auto& [idx, c] : X.components()) {
        ScalarExpr df = partial(f, idx[0]);
        if (!df.is_zero()) terms.push_back(c * df);
    }
    return sum_of(std::move(terms));
}

ScalarExpr divergence(const GradedField& X) {
    if (X.variance() != Variance::Contravariant || X.grade() != 1)
        throw Error("divergence: argument must be a vector field");
    std::vector<ScalarExpr> terms;
    for (const auto& [idx, c] : X.components()) {
        ScalarExpr dc = partial(c, idx[0]);
        if (!dc.is_zero()) terms.push_back(std::move(dc));
    }
    return sum_of(std::move(terms));
}

namespace {

// One decomposable summand c * d_{I[0]} ^ ... ^ d_{I[p-1]} bracketed with
// e * d_{J[0]} ^ ... ^ d_{J[q-1]}, accumulated into `out`. The expansion
// treats the monomial as the vector list (c d_{I0}, d_{I1}, ...), brackets
// every pair of legs, and wedges in what remains; coefficients left in the
// remainder multiply through.
void schouten_monomials(const IndexTuple& I, const ScalarExpr& c, const IndexTuple& J,
                        const ScalarExpr& e, GradedField& out) {
    const int p = static_cast<int>(I.size());
    const int q = static_cast<int>(J.size());

    if (p == 0 && q == 0) return;

    if (q == 0) {
        // [c d_I, f] = sum_k (-1)^(p-k) c (d f/dx_{I[k]}) d_{I minus k}   (1-based k)
        for (int k = 0; k < p; ++k) {
            ScalarExpr df = partial(e, I[k]);
            if (df.is_zero()) continue;
            ScalarExpr coeff = c * df;
            if ((p - (k + 1)) % 2 == 1) coeff = -coeff;
            out.accumulate(erase_at(I, k), std::move(coeff));
        }
        return;
    }
    if (p == 0) {
        // [f, Q] = (-1)^q [Q, f]
        GradedField tmp(out.chart(), Variance::Contravariant, out.grade());
        schouten_monomials(J, e, I, c, tmp);
        for (const auto& [idx, v] : tmp.components())
            out.accumulate(idx, q % 2 == 0 ? v : -v);
        return;
    }

    auto emit = [&](int k, int l, ScalarExpr coeff, int bracket_index) {
        // wedge the bracket leg with both remainders; k, l are 0-based
        if (coeff.is_zero()) return;
        if ((k + l) % 2 == 1) coeff = -coeff; // (-1)^(k+l) with 1-based positions
        IndexTuple idx;
        idx.reserve(p + q - 1);
        idx.push_back(bracket_index);
        for (int m = 0; m < p; ++m)
            if (m != k) idx.push_back(I[m]);
        for (int m = 0; m < q; ++m)
            if (m != l) idx.push_back(J[m]);
        out.accumulate(std::move(idx), std::move(coeff));
    };

    // leg pairs (k=0,l=0): [c d_{I0}, e d_{J0}] = c (de/dx_{I0}) d_{J0} - e (dc/dx_{J0}) d_{I0}
    {
        ScalarExpr de = partial(e, I[0]);
        if (!de.is_zero()) emit(0, 0, c * de, J[0]);
        ScalarExpr dc = partial(c, J[0]);
        if (!dc.is_zero()) emit(0, 0, -(e * dc), I[0]);
    }
    // (k=0, l>=1): [c d_{I0}, d_{Jl}] = -(dc/dx_{Jl}) d_{I0}; remainder carries e
    for (int l = 1; l < q; ++l) {
        ScalarExpr dc = partial(c, J[l]);
        if (!dc.is_zero()) emit(0, l, -(dc * e), I[0]);
    }
    // (k>=1, l=0): [d_{Ik}, e d_{J0}] = (de/dx_{Ik}) d_{J0}; remainder carries c
    for (int k = 1; k < p; ++k) {
        ScalarExpr de = partial(e, I[k]);
        if (!de.is_zero()) emit(k, 0, c * de, J[0]);
    }
    // (k>=1, l>=1): constant legs commute
}

} // namespace

GradedField schouten(const GradedField& P, const GradedField& Q) {
    require_compatible(P, Q);
    if (P.variance() != Variance::Contravariant)
        throw VarianceMismatch("schouten: arguments must be multivector fields");
    const int grade = std::max(P.grade() + Q.grade() - 1, 0);
    GradedField out(P.chart(), Variance::Contravariant, grade);
    if (P.grade() == 0 && Q.grade() == 0) return out;
    for (const auto& [I, c] : P.components())
        for (const auto& [J, e] : Q.components()) schouten_monomials(I, c, J, e, out);
    return out;
}

GradedField lie_multivector(const GradedField& X, const GradedField& P) {
    if (X.grade() != 1) throw Error("lie_multivector: direction must be a vector field");
    return schouten(X, P);
}

GradedField koszul(const GradedField& Lambda, const GradedField& a, const GradedField& b) {
    GradedField Xa = anchor1(Lambda, a);
    GradedField Xb = anchor1(Lambda, b);
    ScalarExpr lam_ab = pair_eval(Lambda, std::array{a, b});
    return lie_form(Xa, b) - lie_form(Xb, a) - d_scalar(a.chart(), lam_ab);
}

GradedField anchor1(const GradedField& Lambda, const GradedField& a) {
    if (Lambda.variance() != Variance::Contravariant || Lambda.grade() != 2)
        throw Error("anchor1: Lambda must be a bivector field");
    if (a.variance() != Variance::Covariant || a.grade() != 1)
        throw Error("anchor1: argument must be a 1-form");
    GradedField out = GradedField::multivector(Lambda.chart(), 1);
    for (const auto& [idx, c] : Lambda.components()) {
        const int i = idx[0], j = idx[1];
        ScalarExpr ai = a.component(std::array{i});
        ScalarExpr aj = a.component(std::array{j});
        // V^j += L^{ij} a_i,  V^i -= L^{ij} a_j
        if (!ai.is_zero()) out.accumulate({j}, c * ai);
        if (!aj.is_zero()) out.accumulate({i}, -(c * aj));
    }
    return out;
}

GradedField anchor_k(const GradedField& Lambda, const GradedField& form) {
    if (form.variance() != Variance::Covariant)
        throw VarianceMismatch("anchor_k: argument must be a form");
    const int k = form.grade();
    if (k == 0) return GradedField::scalar(form.chart(), Variance::Contravariant, form.scalar_value());

    const int dim = form.chart()->dim;
    std::vector<GradedField> anchored;
    anchored.reserve(dim);
    for (int j = 0; j < dim; ++j)
        anchored.push_back(anchor1(Lambda, coordinate_form(form.chart(), j)));

    GradedField out(form.chart(), Variance::Contravariant, k);
    const int sign = k % 2 == 0 ? 1 : -1;
    for_each_tuple(dim, k, [&](const IndexTuple& J) {
        std::vector<GradedField> legs;
        legs.reserve(k);
        for (int j : J) legs.push_back(anchored[j]);
        ScalarExpr value = pair_eval(form, legs);
        if (value.is_zero()) return;
        out.set(J, sign < 0 ? -value : value);
    });
    return out;
}

FieldEquivReport field_equiv(const GradedField& a, const GradedField& b, const Sampler& sampler,
                             std::string_view salt) {
    if (a.grade() != b.grade() || a.variance() != b.variance())
        throw Error("field_equiv: fields must share grade and variance");
    std::set<IndexTuple> keys;
    for (const auto& [idx, c] : a.components()) keys.insert(idx);
    for (const auto& [idx, c] : b.components()) keys.insert(idx);

    FieldEquivReport report;
    if (keys.empty()) {
        report.points_used = sampler.n_samples;
        return report;
    }
    for (const auto& idx : keys) {
        EquivReport r = equiv(a.component(idx), b.component(idx), *a.chart(), sampler,
                              tuple_salt(salt, idx));
        report.pass = report.pass && r.pass;
        report.max_residual = std::max(report.max_residual, r.max_residual);
        report.points_used += r.points_used;
    }
    return report;
}

FieldEquivReport field_is_zero(const GradedField& a, const Sampler& sampler,
                               std::string_view salt) {
    GradedField zero(a.chart(), a.variance(), a.grade());
    return field_equiv(a, zero, sampler, salt);
}

} // namespace atwist
