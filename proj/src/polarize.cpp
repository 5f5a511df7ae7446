#include "atwist/polarize.hpp"

#include <Eigen/Dense>
#include <numbers>
#include <string>

#include "atwist/errors.hpp"
#include "atwist/program.hpp"

namespace atwist {

namespace {
const Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};
}

Polarization make_polarization(std::vector<GradedField> generators) {
    if (generators.empty()) throw Error("polarization needs at least one generator");
    for (const auto& g : generators) {
        if (g.variance() != Variance::Covariant || g.grade() != 1)
            throw Error("polarization generators must be 1-forms");
        if (g.chart() != generators.front().chart() &&
            !same_chart(*g.chart(), *generators.front().chart()))
            throw ChartMismatch("polarization generators must share a chart");
    }
    return Polarization{std::move(generators)};
}

ValidationReport isotropy_check(const AtpStructure& S, const Polarization& P,
                                const Sampler& sampler) {
    ValidationReport report;
    const size_t n = P.generators.size();
    for (size_t r = 0; r < n; ++r) {
        for (size_t s = r + 1; s < n; ++s) {
            ScalarExpr pairing =
                pair_eval(S.Lambda(), std::array{P.generators[r], P.generators[s]});
            EquivReport e = equiv(pairing, constant(0.0), *S.chart(), sampler,
                                  "isotropy." + std::to_string(r) + "." + std::to_string(s));
            report.results.push_back({"isotropy_" + std::to_string(r + 1) + "_" +
                                          std::to_string(s + 1),
                                      e.pass, e.max_residual});
        }
    }
    if (n == 1) {
        // a single generator is trivially isotropic; record that
        report.results.push_back({"isotropy_trivial", true, 0.0});
    }
    return report;
}

namespace {

struct CompiledField {
    std::vector<std::pair<int, Program>> entries; // coordinate index -> program

    static CompiledField compile(const GradedField& f, double guard_eps) {
        CompiledField out;
        for (const auto& [idx, c] : f.components())
            out.entries.emplace_back(idx[0], Program::compile(c, guard_eps));
        return out;
    }

    void eval_into(std::span<const double> x, Eigen::VectorXcd& v,
                   std::vector<Complex>& scratch) const {
        v.setZero();
        for (const auto& [k, prog] : entries) v[k] = prog.run(x, scratch);
    }
};

} // namespace

SpanReport span_membership(const GradedField& gamma, const Polarization& P,
                           const std::vector<std::vector<double>>& points, double tol,
                           double guard_eps) {
    if (gamma.grade() != 1 || gamma.variance() != Variance::Covariant)
        throw Error("span_membership: gamma must be a 1-form");
    const int dim = gamma.chart()->dim;
    const int ngen = static_cast<int>(P.generators.size());

    CompiledField cgamma = CompiledField::compile(gamma, guard_eps);
    std::vector<CompiledField> cgen;
    cgen.reserve(ngen);
    for (const auto& g : P.generators) cgen.push_back(CompiledField::compile(g, guard_eps));

    SpanReport report;
    report.member = true;
    Eigen::MatrixXcd G(dim, ngen);
    Eigen::VectorXcd rhs(dim), col(dim);
    std::vector<Complex> scratch;

    for (const auto& x : points) {
        for (int c = 0; c < ngen; ++c) {
            cgen[c].eval_into(x, col, scratch);
            G.col(c) = col;
        }
        cgamma.eval_into(x, rhs, scratch);

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        double smax = sv.size() > 0 ? sv[0] : 0.0;
        if (sv.size() < ngen || smax == 0.0 || sv[sv.size() - 1] < 1e-10 * smax)
            throw DegenerateGenerators("generator values are linearly dependent at a sample point");

        Eigen::VectorXcd coeffs = svd.solve(rhs);
        double dist = (G * coeffs - rhs).norm();
        double rel = dist / (1.0 + rhs.norm());
        report.max_distance = std::max(report.max_distance, rel);
        if (rel > tol) report.member = false;
        ++report.points_used;
    }
    return report;
}

SpanReport span_membership(const GradedField& gamma, const Polarization& P, const Chart& chart,
                           const Sampler& sampler, std::string_view salt) {
    PointStream stream(chart, mix_seed(sampler.seed, salt));
    std::vector<std::vector<double>> points;
    points.reserve(sampler.n_samples);
    for (int n = 0; n < sampler.n_samples; ++n) points.push_back(stream.next());
    return span_membership(gamma, P, points, sampler.tol, chart.guard_eps);
}

MembershipReport in_P(const AtpStructure& S, const Polarization& P, const ScalarExpr& f,
                      const Sampler& sampler) {
    GradedField df = d_scalar(S.chart(), f);
    MembershipReport report;
    report.member = true;
    for (size_t r = 0; r < P.generators.size(); ++r) {
        GradedField bracket = twisted_bracket(S, df, P.generators[r]);
        SpanReport span = span_membership(bracket, P, *S.chart(), sampler,
                                          "in_P.gen" + std::to_string(r));
        report.member = report.member && span.member;
        report.max_distance = std::max(report.max_distance, span.max_distance);
    }
    return report;
}

MembershipReport pair_condition(const AtpStructure& S, const Polarization& P, const ScalarExpr& f,
                                const ScalarExpr& g, const Sampler& sampler) {
    GradedField Xf = hamiltonian(S, f);
    GradedField Xg = hamiltonian(S, g);
    GradedField xi = interior(Xg, interior(Xf, S.phi())) + poisson_bracket(S, f, g) * S.theta();

    MembershipReport report;
    report.member = true;
    for (size_t r = 0; r < P.generators.size(); ++r) {
        GradedField bracket = twisted_bracket(S, xi, P.generators[r]);
        SpanReport span = span_membership(bracket, P, *S.chart(), sampler,
                                          "pair_condition.gen" + std::to_string(r));
        report.member = report.member && span.member;
        report.max_distance = std::max(report.max_distance, span.max_distance);
    }
    return report;
}

QuantizableReport in_Q(const AtpStructure& S, const Polarization& P, const ScalarExpr& f,
                       std::span<const ScalarExpr> witnesses, const Sampler& sampler) {
    QuantizableReport report;
    report.polarized = in_P(S, P, f, sampler).member;
    if (!report.polarized) return report;

    // the constant witness: anchor(d 1) = 0 makes the pair form vanish, so
    // it always passes; try the listed witnesses first to report a real one
    for (size_t w = 0; w < witnesses.size(); ++w) {
        if (struct_eq(witnesses[w], f)) continue;
        if (!in_P(S, P, witnesses[w], sampler).member) continue;
        if (pair_condition(S, P, f, witnesses[w], sampler).member) {
            report.member = true;
            report.witness_index = static_cast<int>(w);
            return report;
        }
    }
    if (pair_condition(S, P, f, constant(1.0), sampler).member) {
        report.member = true;
        report.witness_index = -1;
    }
    return report;
}

QuantSection lie_half_density(const GradedField& X, const QuantSection& q) {
    return {apply_vector(X, q.u) + constant(0.5) * q.u * divergence(X)};
}

QuantSection extended_D(const ContravariantD& D, const GradedField& a, const QuantSection& q) {
    GradedField Xa = anchor1(D.S->Lambda(), a);
    ScalarExpr scale = pair1(D.omega, Xa) + constant(kTwoPiI) * pair1(a, D.Z) +
                       constant(0.5) * divergence(Xa);
    return {apply_vector(Xa, q.u) + scale * q.u};
}

KernelReport h0_residuals(const ContravariantD& D, const Polarization& P, const QuantSection& q,
                          const Sampler& sampler) {
    KernelReport report;
    report.member = true;
    for (size_t r = 0; r < P.generators.size(); ++r) {
        QuantSection res = extended_D(D, P.generators[r], q);
        EquivReport e = equiv(res.u, constant(0.0), *D.S->chart(), sampler,
                              "h0.gen" + std::to_string(r));
        report.member = report.member && e.pass;
        report.max_residual = std::max(report.max_residual, e.max_residual);
        report.residuals.push_back(std::move(res));
        report.checks.push_back(e);
    }
    return report;
}

QuantSection extended_hat(const ContravariantD& D, const ScalarExpr& f, const QuantSection& q) {
    QuantSection derivative = extended_D(D, d_scalar(D.S->chart(), f), q);
    return {derivative.u + constant(kTwoPiI) * f * q.u};
}

} // namespace atwist
