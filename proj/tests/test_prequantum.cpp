#include "doctest.h"

#include <cmath>

#include "atwist/errors.hpp"
#include "atwist/prequantum.hpp"
#include "atwist/random_fields.hpp"

using namespace atwist;

namespace {

constexpr Complex kTwoPiI{0.0, 2.0 * 3.14159265358979323846};

// two exponential symplectic planes with f = x1, g = x3, twisted along x5;
// carries the exactness certificate Z = d/dx5, eta = d(vartheta)
AtpPtr product_structure() {
    auto c = make_chart(5);
    ScalarExpr x1 = coordinate(0), x3 = coordinate(2);

    GradedField L = GradedField::multivector(c, 2);
    L.set({0, 1}, exp(x1));
    L.set({2, 3}, exp(x3));

    GradedField phi = GradedField::form(c, 3);
    phi.set({0, 1, 4}, exp(-x1));
    phi.set({2, 3, 4}, exp(-x3));

    GradedField theta = GradedField::form(c, 1);
    theta.set({4}, constant(1.0));

    return AtpStructure::make(std::move(L), std::move(phi), std::move(theta));
}

PrequantCertificate product_certificate(const ChartPtr& c) {
    ScalarExpr x1 = coordinate(0), x3 = coordinate(2);

    GradedField Z = GradedField::multivector(c, 1);
    Z.set({4}, constant(1.0));

    GradedField eta = GradedField::form(c, 2);
    eta.set({0, 1}, -exp(-x1));
    eta.set({2, 3}, -exp(-x3));

    GradedField vt = GradedField::form(c, 1);
    vt.set({1}, exp(-x1));
    vt.set({3}, exp(-x3));

    return {std::move(Z), std::move(eta), std::move(vt)};
}

AtpPtr broken_structure() {
    auto c = make_chart(4);
    GradedField L = GradedField::multivector(c, 2);
    L.set({0, 1}, constant(1.0));
    L.set({2, 3}, coordinate(0));
    return AtpStructure::make(std::move(L), GradedField::form(c, 3), GradedField::form(c, 1));
}

AtpPtr plane_structure() {
    auto c = make_chart(2);
    GradedField L = GradedField::multivector(c, 2);
    L.set({0, 1}, constant(1.0));
    return AtpStructure::make(std::move(L), GradedField::form(c, 3), GradedField::form(c, 1));
}

const NamedResult& find(const ValidationReport& rep, std::string_view name) {
    for (const auto& r : rep.results)
        if (r.name == name) return r;
    REQUIRE(false);
    return rep.results.front();
}

} // namespace

TEST_CASE("an exact bivector certifies with eta = 0") {
    auto S = plane_structure();
    auto c = S->chart();
    Sampler s;

    // coboundary(x2 d/dx2) = d/dx1 ^ d/dx2, so Z = -x2 d/dx2 absorbs Lambda
    GradedField Z = GradedField::multivector(c, 1);
    Z.set({1}, -coordinate(1));
    PrequantCertificate cert{Z, GradedField::form(c, 2), GradedField::form(c, 1)};

    auto rep = check_certificate(S, cert, s);
    CHECK(rep.pass());
    CHECK(find(rep, "certificate_equation").max_residual < 1e-12);
}

TEST_CASE("the product structure certificate closes") {
    auto S = product_structure();
    Sampler s;
    auto cert = product_certificate(S->chart());

    auto rep = check_certificate(S, cert, s);
    CHECK(rep.pass());
    CHECK(find(rep, "eta_closed").pass);
    CHECK(find(rep, "certificate_equation").pass);
    CHECK(find(rep, "data_real").pass);
    CHECK(find(rep, "potential").pass);
}

TEST_CASE("a slightly wrong eta is caught") {
    auto S = product_structure();
    Sampler s;
    auto cert = product_certificate(S->chart());
    cert.eta = constant(1.01) * cert.eta;

    auto rep = check_certificate(S, cert, s);
    CHECK(!rep.pass());
    CHECK(find(rep, "eta_closed").pass); // scaling keeps it closed
    CHECK(!find(rep, "certificate_equation").pass);
    CHECK(find(rep, "certificate_equation").max_residual > 1e-3);
}

TEST_CASE("build_derivative needs the potential") {
    auto S = product_structure();
    auto cert = product_certificate(S->chart());
    cert.vartheta.reset();
    CHECK_THROWS_AS(build_derivative(S, cert), MissingPotential);
}

TEST_CASE("the derivative acts through its associated vector") {
    auto S = product_structure();
    auto c = S->chart();
    FieldRng rng(7);
    Sampler s;
    GradedField omega = random_form(c, 1, rng, {.complex_coeffs = true});
    GradedField Z = random_multivector(c, 1, rng);
    auto D = make_derivative(S, omega, Z);
    GradedField X = associated_vector(D);

    for (int round = 0; round < 4; ++round) {
        GradedField a = random_form(c, 1, rng);
        ScalarExpr u = random_polynomial(c, rng, {.complex_coeffs = true});
        ScalarExpr expected = apply_vector(anchor1(S->Lambda(), a), u) + pair1(a, X) * u;
        CHECK(equiv(apply_D(D, a, u), expected, *c, s, "assoc").pass);

        // Leibniz along the anchor
        ScalarExpr f = random_polynomial(c, rng);
        ScalarExpr lhs = apply_D(D, a, f * u);
        ScalarExpr rhs = apply_vector(anchor1(S->Lambda(), a), f) * u + f * apply_D(D, a, u);
        CHECK(equiv(lhs, rhs, *c, s, "leib").pass);
    }
}

TEST_CASE("curvature of the certificate derivative is -2 pi i Lambda") {
    auto S = product_structure();
    Sampler s;
    auto D = build_derivative(S, product_certificate(S->chart()));
    GradedField P = curvature_bivector(D, s);
    CHECK(field_is_zero(P + kTwoPiI * S->Lambda(), s, "law").pass);
}

TEST_CASE("curvature with Z = 0 is the anchored differential of omega") {
    auto S = product_structure();
    auto c = S->chart();
    FieldRng rng(11);
    Sampler s;
    for (int round = 0; round < 5; ++round) {
        GradedField omega = random_form(c, 1, rng, {.complex_coeffs = true});
        auto D = make_derivative(S, omega, GradedField::multivector(c, 1));
        GradedField P = curvature_bivector(D, s);
        CHECK(field_equiv(P, anchor_k(S->Lambda(), exterior_d(omega)), s, "dw").pass);
    }
}

TEST_CASE("curvature is function-linear in the section") {
    auto S = product_structure();
    auto c = S->chart();
    FieldRng rng(13);
    Sampler s;
    auto D = build_derivative(S, product_certificate(c));
    GradedField a = random_form(c, 1, rng), b = random_form(c, 1, rng);
    ScalarExpr u = random_polynomial(c, rng, {.complex_coeffs = true});
    ScalarExpr f = random_polynomial(c, rng);
    CHECK(equiv(curvature(D, a, b, f * u), f * curvature(D, a, b, u), *c, s, "tens").pass);
}

TEST_CASE("curvature assembly rejects broken structures") {
    auto S = broken_structure();
    Sampler s;
    CHECK_THROWS_AS(curvature_bivector(bare_derivative(S), s), NotTensorial);
}

TEST_CASE("the fiber metric is parallel for the certificate derivative") {
    auto S = product_structure();
    auto c = S->chart();
    FieldRng rng(17);
    Sampler s;
    auto D = build_derivative(S, product_certificate(c));
    for (int round = 0; round < 6; ++round) {
        GradedField a = random_form(c, 1, rng); // real coefficients
        ScalarExpr u1 = random_polynomial(c, rng, {.complex_coeffs = true});
        ScalarExpr u2 = random_polynomial(c, rng, {.complex_coeffs = true});
        CHECK(equiv(hermitian_residual(D, a, u1, u2), ScalarExpr{}, *c, s, "herm").pass);
    }
}

TEST_CASE("a real connection form breaks metric compatibility") {
    auto S = product_structure();
    auto c = S->chart();
    Sampler s;
    GradedField omega = GradedField::form(c, 1);
    omega.set({1}, constant(1.0)); // dx2, real: pumps the norm along anchor(dx1)
    auto D = make_derivative(S, omega, GradedField::multivector(c, 1));
    ScalarExpr r = hermitian_residual(D, coordinate_form(c, 0), constant(1.0), constant(1.0));
    // residual = -2 Re omega(anchor(dx1)) = -2 e^{x1}
    CHECK(equiv(r, -2.0 * exp(coordinate(0)), *c, s, "real").pass);
}

TEST_CASE("hat operators represent the bracket through the certificate") {
    auto S = product_structure();
    auto c = S->chart();
    FieldRng rng(19);
    Sampler s;
    auto D = build_derivative(S, product_certificate(c));
    for (int round = 0; round < 4; ++round) {
        ScalarExpr f = random_polynomial(c, rng), g = random_polynomial(c, rng);
        ScalarExpr u = random_polynomial(c, rng, {.complex_coeffs = true});
        CHECK(equiv(homomorphism_residual(D, f, g, u), ScalarExpr{}, *c, s, "rep").pass);
    }
}

TEST_CASE("the bare derivative misses the bracket by the symplectic phase") {
    auto S = product_structure();
    auto c = S->chart();
    Sampler s;
    auto D = bare_derivative(S);
    ScalarExpr x1 = coordinate(0), x2 = coordinate(1);
    ScalarExpr u = constant(1.0) + imaginary_unit() * x2;

    // {x1, x2} = e^{x1}; with omega = 0, Z = 0 the whole phase term survives
    ScalarExpr expected = constant(-kTwoPiI) * exp(x1) * u;
    CHECK(equiv(homomorphism_residual(D, x1, x2, u), expected, *c, s, "bare").pass);

    auto rep = equiv(homomorphism_residual(D, x1, x2, u), ScalarExpr{}, *c, s, "barenz");
    CHECK(!rep.pass);
    CHECK(rep.max_residual > 1e-3);
}

TEST_CASE("hat is linear and sends constants to phases") {
    auto S = product_structure();
    auto c = S->chart();
    FieldRng rng(23);
    Sampler s;
    auto D = build_derivative(S, product_certificate(c));
    ScalarExpr u = random_polynomial(c, rng, {.complex_coeffs = true});

    // d(const) = 0, so only the multiplication term remains
    CHECK(equiv(hat(D, constant(3.0), u), constant(Complex(0, 6.0 * 3.14159265358979323846)) * u,
                *c, s, "const").pass);

    ScalarExpr f = random_polynomial(c, rng), g = random_polynomial(c, rng);
    CHECK(equiv(hat(D, f + g, u), hat(D, f, u) + hat(D, g, u), *c, s, "add").pass);
}
