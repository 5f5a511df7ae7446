#include "atwist/structure.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "atwist/errors.hpp"

namespace atwist {

namespace {

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

std::shared_ptr<const AtpStructure> AtpStructure::make(GradedField Lambda, GradedField phi,
                                                       GradedField theta) {
    if (Lambda.variance() != Variance::Contravariant || Lambda.grade() != 2)
        throw Error("structure: Lambda must be a bivector field");
    if (phi.variance() != Variance::Covariant || phi.grade() != 3)
        throw Error("structure: phi must be a 3-form");
    if (theta.variance() != Variance::Covariant || theta.grade() != 1)
        throw Error("structure: theta must be a 1-form");
    if ((phi.chart() != Lambda.chart() && !same_chart(*phi.chart(), *Lambda.chart())) ||
        (theta.chart() != Lambda.chart() && !same_chart(*theta.chart(), *Lambda.chart())))
        throw ChartMismatch("structure: Lambda, phi, theta must share a chart");

    auto S = std::shared_ptr<AtpStructure>(new AtpStructure());
    S->chart_ = Lambda.chart();
    S->Lambda_ = std::move(Lambda);
    S->phi_ = std::move(phi);
    S->theta_ = std::move(theta);

    const int dim = S->chart_->dim;
    S->anchor_basis_.reserve(dim);
    for (int j = 0; j < dim; ++j)
        S->anchor_basis_.push_back(anchor1(S->Lambda_, coordinate_form(S->chart_, j)));

    S->coord_brackets_.resize(static_cast<size_t>(dim) * dim,
                              GradedField::form(S->chart_, 1));
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            GradedField b = twisted_bracket(*S, coordinate_form(S->chart_, i),
                                            coordinate_form(S->chart_, j));
            S->coord_brackets_[i * dim + j] = b;
            S->coord_brackets_[j * dim + i] = -b;
        }
    }
    return S;
}

GradedField AtpStructure::coord_bracket(int i, int j) const {
    const int dim = chart_->dim;
    if (i < 0 || j < 0 || i >= dim || j >= dim) throw Error("coord_bracket: index out of range");
    if (i == j) return GradedField::form(chart_, 1);
    return coord_brackets_[i * dim + j];
}

bool ValidationReport::pass() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

double ValidationReport::max_residual() const {
    double m = 0.0;
    for (const auto& r : results) m = std::max(m, r.max_residual);
    return m;
}

ValidationReport validate(const AtpStructure& S, const Sampler& sampler) {
    ValidationReport report;
    auto push = [&report](const std::string& name, const FieldEquivReport& r) {
        report.results.push_back({name, r.pass, r.max_residual});
    };

    push("dphi_vs_theta_phi",
         field_equiv(exterior_d(S.phi()), wedge(S.theta(), S.phi()), sampler, "axiom.dphi"));
    push("anchor_theta",
         field_is_zero(anchor1(S.Lambda(), S.theta()), sampler, "axiom.anchor_theta"));
    push("half_schouten_vs_anchor_phi",
         field_equiv(constant(0.5) * schouten(S.Lambda(), S.Lambda()), anchor_k(S.Lambda(), S.phi()),
                     sampler, "axiom.schouten"));
    push("dtheta", field_is_zero(exterior_d(S.theta()), sampler, "axiom.dtheta"));
    return report;
}

GradedField twisted_bracket(const AtpStructure& S, const GradedField& a, const GradedField& b) {
    GradedField Xa = anchor1(S.Lambda(), a);
    GradedField Xb = anchor1(S.Lambda(), b);
    GradedField phi_term = interior(Xb, interior(Xa, S.phi()));
    ScalarExpr lam_ab = pair_eval(S.Lambda(), std::array{a, b});
    return koszul(S.Lambda(), a, b) + phi_term + lam_ab * S.theta();
}

namespace {

ScalarExpr contract_first(const GradedField& v, const GradedField& gamma,
                          std::span<const int> rest) {
    // v(gamma, dx_rest...) = sum_m gamma_m v(dx_m, dx_rest...)
    std::vector<ScalarExpr> terms;
    IndexTuple idx(rest.size() + 1);
    std::copy(rest.begin(), rest.end(), idx.begin() + 1);
    for (const auto& [m, gm] : gamma.components()) {
        idx[0] = m[0];
        ScalarExpr comp = v.component(idx);
        if (!comp.is_zero()) terms.push_back(gm * comp);
    }
    return sum_of(std::move(terms));
}

} // namespace

ScalarExpr coboundary(const AtpStructure& S, const GradedField& v,
                      std::span<const GradedField> alphas) {
    if (v.variance() != Variance::Contravariant)
        throw VarianceMismatch("coboundary: v must be a multivector field");
    const int n = v.grade();
    if (n > 3) throw GradeUnsupported("coboundary supports grades 0 through 3");
    if (static_cast<int>(alphas.size()) != n + 1)
        throw Error("coboundary: need grade+1 argument forms");

    std::vector<ScalarExpr> terms;
    for (int i = 0; i <= n; ++i) {
        std::vector<GradedField> rest;
        rest.reserve(n);
        for (int m = 0; m <= n; ++m)
            if (m != i) rest.push_back(alphas[m]);
        ScalarExpr inner = pair_eval(v, rest);
        ScalarExpr term = apply_vector(anchor1(S.Lambda(), alphas[i]), inner);
        if (term.is_zero()) continue;
        terms.push_back(i % 2 == 0 ? term : -term);
    }
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            GradedField bracket = twisted_bracket(S, alphas[i], alphas[j]);
            std::vector<GradedField> args;
            args.reserve(n);
            args.push_back(bracket);
            for (int m = 0; m <= n; ++m)
                if (m != i && m != j) args.push_back(alphas[m]);
            ScalarExpr term = pair_eval(v, args);
            if (term.is_zero()) continue;
            terms.push_back((i + j) % 2 == 0 ? term : -term);
        }
    }
    return sum_of(std::move(terms));
}

GradedField coboundary_field(const AtpStructure& S, const GradedField& v) {
    if (v.variance() != Variance::Contravariant)
        throw VarianceMismatch("coboundary_field: v must be a multivector field");
    const int n = v.grade();
    if (n > 3) throw GradeUnsupported("coboundary supports grades 0 through 3");
    const int dim = S.chart()->dim;

    GradedField out(S.chart(), Variance::Contravariant, n + 1);
    for_each_tuple(dim, n + 1, [&](const IndexTuple& T) {
        std::vector<ScalarExpr> terms;
        // anchor derivative part
        for (int i = 0; i <= n; ++i) {
            IndexTuple rest;
            rest.reserve(n);
            for (int m = 0; m <= n; ++m)
                if (m != i) rest.push_back(T[m]);
            ScalarExpr inner = v.component(rest);
            if (inner.is_zero()) continue;
            ScalarExpr term = apply_vector(S.anchor_basis(T[i]), inner);
            if (term.is_zero()) continue;
            terms.push_back(i % 2 == 0 ? term : -term);
        }
        // bracket contraction part
        for (int i = 0; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                IndexTuple rest;
                rest.reserve(n - 1);
                for (int m = 0; m <= n; ++m)
                    if (m != i && m != j) rest.push_back(T[m]);
                ScalarExpr term = contract_first(v, S.coord_bracket(T[i], T[j]), rest);
                if (term.is_zero()) continue;
                terms.push_back((i + j) % 2 == 0 ? term : -term);
            }
        }
        out.set(T, sum_of(std::move(terms)));
    });
    return out;
}

ScalarExpr poisson_bracket(const AtpStructure& S, const ScalarExpr& f, const ScalarExpr& g) {
    return pair_eval(S.Lambda(), std::array{d_scalar(S.chart(), f), d_scalar(S.chart(), g)});
}

GradedField hamiltonian(const AtpStructure& S, const ScalarExpr& f) {
    return anchor1(S.Lambda(), d_scalar(S.chart(), f));
}

ScalarExpr jacobiator_residual(const AtpStructure& S, const ScalarExpr& f, const ScalarExpr& g,
                               const ScalarExpr& h) {
    ScalarExpr cyc = poisson_bracket(S, f, poisson_bracket(S, g, h)) +
                     poisson_bracket(S, g, poisson_bracket(S, h, f)) +
                     poisson_bracket(S, h, poisson_bracket(S, f, g));
    GradedField corr = anchor_k(S.Lambda(), S.phi());
    std::array legs{d_scalar(S.chart(), f), d_scalar(S.chart(), g), d_scalar(S.chart(), h)};
    return cyc - pair_eval(corr, legs);
}

GradedField chain_map_residual(const AtpStructure& S, const GradedField& mu) {
    return coboundary_field(S, anchor_k(S.Lambda(), mu)) + anchor_k(S.Lambda(), exterior_d(mu));
}

} // namespace atwist
