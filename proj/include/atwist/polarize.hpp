#pragma once

#include "atwist/prequantum.hpp"

namespace atwist {

/// Complex polarization candidate: a list of complex 1-form generators whose
/// pointwise span is the distribution. Nothing here assumes the generators
/// are closed under the twisted bracket; that is a separate check.
struct Polarization {
    std::vector<GradedField> generators;
};

Polarization make_polarization(std::vector<GradedField> generators);

/// Half-density-twisted section of the trivial bundle, represented by its
/// coefficient function.
struct QuantSection {
    ScalarExpr u;
};

/// Lambda(a_r, a_s) must vanish for all generator pairs.
ValidationReport isotropy_check(const AtpStructure& S, const Polarization& P,
                                const Sampler& sampler);

struct SpanReport {
    bool member = false;
    double max_distance = 0.0; // max over points of ||residual|| / (1 + ||gamma||)
    int points_used = 0;
};

/// Pointwise least-squares membership of gamma(x) in span{generators(x)}.
/// Throws DegenerateGenerators when the generator matrix loses rank at a
/// sample point.
SpanReport span_membership(const GradedField& gamma, const Polarization& P,
                           const std::vector<std::vector<double>>& points, double tol,
                           double guard_eps);

/// Draws sampler points on the chart box, then runs span_membership.
SpanReport span_membership(const GradedField& gamma, const Polarization& P, const Chart& chart,
                           const Sampler& sampler, std::string_view salt);

/// f is polarized when [df, a] stays in the span for every generator a.
struct MembershipReport {
    bool member = false;
    double max_distance = 0.0;
};
MembershipReport in_P(const AtpStructure& S, const Polarization& P, const ScalarExpr& f,
                      const Sampler& sampler);

/// Pair condition: [ i_{anchor(dg)} i_{anchor(df)} phi + {f,g} theta , a ]
/// lands in the span for every generator a.
MembershipReport pair_condition(const AtpStructure& S, const Polarization& P, const ScalarExpr& f,
                                const ScalarExpr& g, const Sampler& sampler);

/// in_P(f) plus a witness g (from `witnesses` or the constant 1) with
/// pair_condition(f, g) and in_P(g). witness_index is -1 for the constant.
struct QuantizableReport {
    bool member = false;
    bool polarized = false;
    int witness_index = -2; // -2: none found
};
QuantizableReport in_Q(const AtpStructure& S, const Polarization& P, const ScalarExpr& f,
                       std::span<const ScalarExpr> witnesses, const Sampler& sampler);

/// Half-density Lie derivative along a vector field:
///   u' = X(u) + (1/2) u div X
QuantSection lie_half_density(const GradedField& X, const QuantSection& q);

/// Derivative extended to half-density-twisted sections:
///   u' = anchor(a)(u) + u ( omega(anchor(a)) + 2 pi i a(Z) + (1/2) div anchor(a) )
QuantSection extended_D(const ContravariantD& D, const GradedField& a, const QuantSection& q);

/// Extended derivative along every generator; q lies in the kernel space
/// exactly when all residuals vanish.
struct KernelReport {
    std::vector<QuantSection> residuals;
    std::vector<EquivReport> checks;
    bool member = false;
    double max_residual = 0.0;
};
KernelReport h0_residuals(const ContravariantD& D, const Polarization& P, const QuantSection& q,
                          const Sampler& sampler);

/// extended_D(df, q) + 2 pi i f q.
QuantSection extended_hat(const ContravariantD& D, const ScalarExpr& f, const QuantSection& q);

} // namespace atwist
