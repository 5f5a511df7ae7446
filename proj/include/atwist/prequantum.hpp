#pragma once

#include <optional>

#include "atwist/structure.hpp"

namespace atwist {

/// Exactness certificate for the "prequantizable up to anchor" condition
///   Lambda + coboundary(Z) = anchor_k(Lambda, eta),   d eta = 0
/// with real vector field Z and real closed 2-form eta. When eta has a
/// known primitive (d vartheta = eta) the certificate can also build the
/// trivialized derivative below.
struct PrequantCertificate {
    GradedField Z;
    GradedField eta;
    std::optional<GradedField> vartheta;
};

/// Contravariant derivative on the trivial line bundle:
///   D_a u = anchor(a)(u) + ( omega(anchor(a)) + 2 pi i a(Z) ) u
/// omega is a complex connection 1-form, Z a real vector field. Both may be
/// zero, which leaves the bare anchor derivative.
struct ContravariantD {
    AtpPtr S;
    GradedField omega;
    GradedField Z;
};

ContravariantD make_derivative(AtpPtr S, GradedField omega, GradedField Z);

/// Derivative with omega = 0, Z = 0 (the plain anchor action).
ContravariantD bare_derivative(AtpPtr S);

ScalarExpr apply_D(const ContravariantD& D, const GradedField& a, const ScalarExpr& u);

/// C_D(a,b)u = D_a D_b u - D_b D_a u - D_{[a,b]} u
ScalarExpr curvature(const ContravariantD& D, const GradedField& a, const GradedField& b,
                     const ScalarExpr& u);

/// Assembles C_D into a bivector field, component (i,j) = C_D(dx_i, dx_j)(1).
/// First verifies that C_D is C^inf-multiplicative on all coordinate-form
/// pairs against all coordinate multipliers (complete, since the defect is
/// tensorial) and throws NotTensorial when that fails; it does fail on
/// structures that break the axioms, which is the point of the check.
GradedField curvature_bivector(const ContravariantD& D, const Sampler& sampler);

/// Named residuals: d eta = 0, the certificate equation, realness of the
/// certificate data, d vartheta = eta when a primitive is present.
ValidationReport check_certificate(const AtpPtr& S, const PrequantCertificate& cert,
                                   const Sampler& sampler);

/// The trivialized derivative with omega = -2 pi i vartheta and the
/// certificate's Z. Throws MissingPotential without a primitive.
ContravariantD build_derivative(AtpPtr S, const PrequantCertificate& cert);

/// X_D = -anchor_k(omega) + 2 pi i Z, the vector field with
/// D_a u = X_D-twisted anchor action; exposed for the curvature law tests.
GradedField associated_vector(const ContravariantD& D);

/// Leibniz defect of D against the fiber metric h(u1,u2) = u1 conj(u2):
///   anchor(a)(h(u1,u2)) - h(D_a u1, u2) - h(u1, D_a u2)
/// Zero for real a when omega is purely imaginary and Z is real.
ScalarExpr hermitian_residual(const ContravariantD& D, const GradedField& a, const ScalarExpr& u1,
                              const ScalarExpr& u2);

/// Prequantum operator action: f_hat(u) = D_{df} u + 2 pi i f u.
ScalarExpr hat(const ContravariantD& D, const ScalarExpr& f, const ScalarExpr& u);

/// Twisted operator bracket
///   {f_hat, g_hat}(u) = [f_hat, g_hat](u)
///                       - D_{ i_{anchor(dg)} i_{anchor(df)} phi } u
///                       - {f,g} D_theta u
ScalarExpr op_bracket(const ContravariantD& D, const ScalarExpr& f, const ScalarExpr& g,
                      const ScalarExpr& u);

/// hat({f,g}, u) - op_bracket(f, g, u); zero exactly when the curvature law
/// C_D = -2 pi i Lambda holds on exact forms.
ScalarExpr homomorphism_residual(const ContravariantD& D, const ScalarExpr& f, const ScalarExpr& g,
                                 const ScalarExpr& u);

} // namespace atwist
