#include "atwist/prequantum.hpp"

#include <array>
#include <numbers>

#include "atwist/errors.hpp"
#include "atwist/random_fields.hpp"

namespace atwist {

namespace {

const Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

} // namespace

ContravariantD make_derivative(AtpPtr S, GradedField omega, GradedField Z) {
    if (omega.variance() != Variance::Covariant || omega.grade() != 1)
        throw Error("derivative: omega must be a 1-form");
    if (Z.variance() != Variance::Contravariant || Z.grade() != 1)
        throw Error("derivative: Z must be a vector field");
    return ContravariantD{std::move(S), std::move(omega), std::move(Z)};
}

ContravariantD bare_derivative(AtpPtr S) {
    GradedField omega = GradedField::form(S->chart(), 1);
    GradedField Z = GradedField::multivector(S->chart(), 1);
    return ContravariantD{std::move(S), std::move(omega), std::move(Z)};
}

ScalarExpr apply_D(const ContravariantD& D, const GradedField& a, const ScalarExpr& u) {
    GradedField Xa = anchor1(D.S->Lambda(), a);
    ScalarExpr scale = pair1(D.omega, Xa) + constant(kTwoPiI) * pair1(a, D.Z);
    return apply_vector(Xa, u) + scale * u;
}

ScalarExpr curvature(const ContravariantD& D, const GradedField& a, const GradedField& b,
                     const ScalarExpr& u) {
    ScalarExpr ab = apply_D(D, a, apply_D(D, b, u));
    ScalarExpr ba = apply_D(D, b, apply_D(D, a, u));
    return ab - ba - apply_D(D, twisted_bracket(*D.S, a, b), u);
}

GradedField curvature_bivector(const ContravariantD& D, const Sampler& sampler) {
    const ChartPtr& chart = D.S->chart();
    const int dim = chart->dim;

    // Multiplicativity check C_D(a,b)(w u) == w C_D(a,b)(u). The defect is
    // tensorial in a and b and linear in u, so coordinate pairs with
    // coordinate w cover it completely; random draws could miss a sparse
    // defect. Fails exactly when the anchor is not a bracket homomorphism,
    // i.e. when the structure axioms are broken.
    GradedField out = GradedField::multivector(chart, 2);
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            GradedField dxi = coordinate_form(chart, i), dxj = coordinate_form(chart, j);
            ScalarExpr base = curvature(D, dxi, dxj, constant(1.0));
            for (int k = 0; k < dim; ++k) {
                ScalarExpr wk = coordinate(k);
                std::string salt = "curvature.tensorial." + std::to_string(i) + "_" +
                                   std::to_string(j) + "_" + std::to_string(k);
                EquivReport r = equiv(curvature(D, dxi, dxj, wk), wk * base, *chart, sampler, salt);
                if (!r.pass)
                    throw NotTensorial("curvature is not C^inf-multiplicative on this structure");
            }
            out.set({i, j}, base);
        }
    }
    return out;
}

ValidationReport check_certificate(const AtpPtr& S, const PrequantCertificate& cert,
                                   const Sampler& sampler) {
    if (cert.Z.variance() != Variance::Contravariant || cert.Z.grade() != 1)
        throw Error("certificate: Z must be a vector field");
    if (cert.eta.variance() != Variance::Covariant || cert.eta.grade() != 2)
        throw Error("certificate: eta must be a 2-form");

    ValidationReport report;
    auto push = [&report](const std::string& name, const FieldEquivReport& r) {
        report.results.push_back({name, r.pass, r.max_residual});
    };

    push("eta_closed", field_is_zero(exterior_d(cert.eta), sampler, "certificate.eta_closed"));
    push("certificate_equation",
         field_equiv(S->Lambda() + coboundary_field(*S, cert.Z), anchor_k(S->Lambda(), cert.eta),
                     sampler, "certificate.equation"));

    // realness of the certificate data (checked structurally through conj)
    {
        GradedField Zc(cert.Z.chart(), cert.Z.variance(), 1);
        for (const auto& [idx, c] : cert.Z.components()) Zc.set(idx, conj_expr(c));
        GradedField ec(cert.eta.chart(), cert.eta.variance(), 2);
        for (const auto& [idx, c] : cert.eta.components()) ec.set(idx, conj_expr(c));
        FieldEquivReport rz = field_equiv(cert.Z, Zc, sampler, "certificate.Z_real");
        FieldEquivReport re = field_equiv(cert.eta, ec, sampler, "certificate.eta_real");
        push("data_real", FieldEquivReport{rz.pass && re.pass,
                                           std::max(rz.max_residual, re.max_residual),
                                           rz.points_used + re.points_used});
    }

    if (cert.vartheta) {
        if (cert.vartheta->variance() != Variance::Covariant || cert.vartheta->grade() != 1)
            throw Error("certificate: vartheta must be a 1-form");
        push("potential",
             field_equiv(exterior_d(*cert.vartheta), cert.eta, sampler, "certificate.potential"));
    }
    return report;
}

ContravariantD build_derivative(AtpPtr S, const PrequantCertificate& cert) {
    if (!cert.vartheta)
        throw MissingPotential("certificate carries no primitive for eta");
    GradedField omega = constant(-kTwoPiI) * *cert.vartheta;
    return make_derivative(std::move(S), std::move(omega), cert.Z);
}

GradedField associated_vector(const ContravariantD& D) {
    // omega(anchor(a)) = -anchor_k(omega)(a), so the scalar part of D is
    // pairing with -anchor_k(omega) + 2 pi i Z
    GradedField anchored = anchor_k(D.S->Lambda(), D.omega);
    return -anchored + constant(kTwoPiI) * D.Z;
}

ScalarExpr hermitian_residual(const ContravariantD& D, const GradedField& a, const ScalarExpr& u1,
                              const ScalarExpr& u2) {
    GradedField Xa = anchor1(D.S->Lambda(), a);
    ScalarExpr h = u1 * conj_expr(u2);
    return apply_vector(Xa, h) - apply_D(D, a, u1) * conj_expr(u2) -
           u1 * conj_expr(apply_D(D, a, u2));
}

ScalarExpr hat(const ContravariantD& D, const ScalarExpr& f, const ScalarExpr& u) {
    return apply_D(D, d_scalar(D.S->chart(), f), u) + constant(kTwoPiI) * f * u;
}

ScalarExpr op_bracket(const ContravariantD& D, const ScalarExpr& f, const ScalarExpr& g,
                      const ScalarExpr& u) {
    ScalarExpr commutator = hat(D, f, hat(D, g, u)) - hat(D, g, hat(D, f, u));
    GradedField Xf = hamiltonian(*D.S, f);
    GradedField Xg = hamiltonian(*D.S, g);
    GradedField phi_leg = interior(Xg, interior(Xf, D.S->phi()));
    ScalarExpr fg = poisson_bracket(*D.S, f, g);
    return commutator - apply_D(D, phi_leg, u) - fg * apply_D(D, D.S->theta(), u);
}

ScalarExpr homomorphism_residual(const ContravariantD& D, const ScalarExpr& f, const ScalarExpr& g,
                                 const ScalarExpr& u) {
    return hat(D, poisson_bracket(*D.S, f, g), u) - op_bracket(D, f, g, u);
}

} // namespace atwist
