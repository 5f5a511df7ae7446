#include "doctest.h"

#include <cmath>

#include "atwist/errors.hpp"
#include "atwist/polarize.hpp"
#include "atwist/random_fields.hpp"

using namespace atwist;

namespace {

constexpr double kPi = 3.14159265358979323846;

// the polarized product structure: f = x1, g = x3, complex pairs
// z1 = x1 + i x2, z2 = x3 + i x4
AtpPtr polarized_structure() {
    auto c = make_chart(5, {}, {}, {{0, 1}, {2, 3}});
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

GradedField dz(const ChartPtr& c, int pair) {
    GradedField out = GradedField::form(c, 1);
    out.set({2 * pair}, constant(1.0));
    out.set({2 * pair + 1}, imaginary_unit());
    return out;
}

GradedField dzbar(const ChartPtr& c, int pair) {
    GradedField out = GradedField::form(c, 1);
    out.set({2 * pair}, constant(1.0));
    out.set({2 * pair + 1}, -imaginary_unit());
    return out;
}

Polarization holomorphic_polarization(const ChartPtr& c) {
    return make_polarization({dz(c, 0), dz(c, 1)});
}

ContravariantD hilbert_derivative(const AtpPtr& S) {
    return make_derivative(S, GradedField::form(S->chart(), 1),
                           GradedField::multivector(S->chart(), 1));
}

} // namespace

TEST_CASE("the holomorphic span is isotropic, mixing in a conjugate is not") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;

    CHECK(isotropy_check(*S, holomorphic_polarization(c), s).pass());

    Polarization bad = make_polarization({dz(c, 0), dzbar(c, 0)});
    auto rep = isotropy_check(*S, bad, s);
    CHECK(!rep.pass());
    // Lambda(dz1, dz1bar) = -2i e^{x1}: order e^{x1}, nowhere small
    CHECK(rep.max_residual() > 0.3);
}

TEST_CASE("span membership projects pointwise") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    auto P = holomorphic_polarization(c);
    FieldRng rng(3);

    // C^inf combinations of the generators stay inside
    ScalarExpr f = random_polynomial(c, rng, {.complex_coeffs = true});
    ScalarExpr g = random_polynomial(c, rng, {.complex_coeffs = true});
    GradedField inside = f * dz(c, 0) + g * dz(c, 1);
    auto rin = span_membership(inside, P, *c, s, "in");
    CHECK(rin.member);
    CHECK(rin.max_distance < 1e-9);
    CHECK(rin.points_used == s.n_samples);

    // the conjugate direction is orthogonal to the whole span
    auto rout = span_membership(dzbar(c, 0), P, *c, s, "out");
    CHECK(!rout.member);
    CHECK(rout.max_distance > 0.3);

    GradedField mixed = dz(c, 0) + constant(0.125) * dzbar(c, 1);
    CHECK(!span_membership(mixed, P, *c, s, "mix").member);
}

TEST_CASE("pointwise dependent generators are rejected") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    Polarization dep = make_polarization(
        {coordinate_form(c, 0), coordinate(0) * coordinate_form(c, 0)});
    CHECK_THROWS_AS(span_membership(coordinate_form(c, 1), dep, *c, s, "dep"),
                    DegenerateGenerators);
}

TEST_CASE("polarized functions are exactly the holomorphic ones") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    auto P = holomorphic_polarization(c);
    ScalarExpr x1 = coordinate(0), x2 = coordinate(1), x5 = coordinate(4);
    ScalarExpr i = imaginary_unit();
    ScalarExpr z1 = x1 + i * x2, z2 = coordinate(2) + i * coordinate(3);

    CHECK(in_P(*S, P, z1, s).member);
    CHECK(in_P(*S, P, z1 * z2 + pow(z1, 3), s).member);
    CHECK(in_P(*S, P, x5, s).member); // unpaired coordinate, trivially holomorphic
    CHECK(!in_P(*S, P, x1, s).member);
    CHECK(!in_P(*S, P, conj_expr(z1), s).member);

    // agreement with the wirtinger criterion on random polynomials
    FieldRng rng(5);
    for (int round = 0; round < 10; ++round) {
        ScalarExpr h = random_polynomial(c, rng, {.complex_coeffs = round % 2 == 1});
        bool holo = equiv(wirtinger(*c, h, 0, true), ScalarExpr{}, *c, s, "w1").pass &&
                    equiv(wirtinger(*c, h, 1, true), ScalarExpr{}, *c, s, "w2").pass;
        CHECK(in_P(*S, P, h, s).member == holo);
    }
}

TEST_CASE("the bracket of dx1 with dz1 leaves the span") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    ScalarExpr i = imaginary_unit();

    GradedField br = twisted_bracket(*S, coordinate_form(c, 0), dz(c, 0));
    GradedField expected = GradedField::form(c, 1);
    expected.set({0}, i * exp(coordinate(0)));
    expected.set({4}, 2.0 * i * exp(coordinate(0)));
    CHECK(field_equiv(br, expected, s, "br").pass);

    CHECK(!span_membership(br, holomorphic_polarization(c), *c, s, "brs").member);
}

TEST_CASE("pair condition and quantizability witnesses") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    auto P = holomorphic_polarization(c);
    ScalarExpr x5 = coordinate(4);
    ScalarExpr z1 = coordinate(0) + imaginary_unit() * coordinate(1);

    CHECK(pair_condition(*S, P, x5, constant(1.0), s).member);
    CHECK(pair_condition(*S, P, x5, z1, s).member);

    std::vector<ScalarExpr> witnesses = {x5};
    auto q = in_Q(*S, P, x5, witnesses, s);
    CHECK(q.member);
    CHECK(q.polarized);
    // the constant witness is tried first and already suffices
    CHECK(q.witness_index == -1);

    auto bad = in_Q(*S, P, coordinate(0), witnesses, s);
    CHECK(!bad.member);
    CHECK(!bad.polarized);
    CHECK(bad.witness_index == -2);
}

TEST_CASE("half-density transport includes the divergence weight") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    ScalarExpr x1 = coordinate(0);
    ScalarExpr u = exp(x1) + coordinate(4);

    GradedField X = GradedField::multivector(c, 1);
    X.set({0}, x1); // div = 1
    QuantSection out = lie_half_density(X, {u});
    CHECK(equiv(out.u, x1 * partial(u, 0) + 0.5 * u, *c, s, "half").pass);

    GradedField flat = GradedField::multivector(c, 1);
    flat.set({0}, constant(1.0)); // divergence-free
    CHECK(equiv(lie_half_density(flat, {u}).u, partial(u, 0), *c, s, "flat").pass);
}

TEST_CASE("the extended derivative is wirtinger transport along the anchor") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    auto D = hilbert_derivative(S);
    ScalarExpr x1 = coordinate(0);
    ScalarExpr i = imaginary_unit();
    FieldRng rng(7);

    // anchor(dz1) = -2i e^{x1} d/dz1bar and div anchor(dz1) = -i e^{x1}
    for (int round = 0; round < 5; ++round) {
        ScalarExpr u = random_polynomial(c, rng, {.complex_coeffs = true});
        ScalarExpr expected = constant(Complex(0, -2)) * exp(x1) * wirtinger(*c, u, 0, true) -
                              constant(Complex(0, 0.5)) * exp(x1) * u;
        CHECK(equiv(extended_D(D, dz(c, 0), {u}).u, expected, *c, s, "ext").pass);
    }

    // the kernel member: u0 = e^{-(f+g)/2 + x5}
    ScalarExpr u0 = exp(constant(-0.5) * (x1 + coordinate(2)) + coordinate(4));
    CHECK(equiv(extended_D(D, dz(c, 0), {u0}).u, ScalarExpr{}, *c, s, "k1").pass);
    CHECK(equiv(extended_D(D, dz(c, 1), {u0}).u, ScalarExpr{}, *c, s, "k2").pass);

    auto rep = h0_residuals(D, holomorphic_polarization(c), {u0}, s);
    CHECK(rep.member);
    CHECK(rep.max_residual < 1e-9);
    CHECK(rep.residuals.size() == 2);
    CHECK(rep.checks.size() == 2);
}

TEST_CASE("the one-factor section misses the kernel in the second leg") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    auto D = hilbert_derivative(S);
    ScalarExpr x3 = coordinate(2);

    ScalarExpr u = exp(constant(-0.5) * coordinate(0) + coordinate(4));
    auto rep = h0_residuals(D, holomorphic_polarization(c), {u}, s);
    CHECK(!rep.member);
    // first leg transports to zero, the second leaves half the divergence
    CHECK(rep.checks[0].pass);
    CHECK(!rep.checks[1].pass);
    ScalarExpr expected = constant(Complex(0, -0.5)) * exp(x3) * u;
    CHECK(equiv(rep.residuals[1].u, expected, *c, s, "second").pass);
}

TEST_CASE("the unpaired observable acts as a pure phase") {
    auto S = polarized_structure();
    auto c = S->chart();
    Sampler s;
    auto D = hilbert_derivative(S);
    ScalarExpr x5 = coordinate(4);
    ScalarExpr u0 = exp(constant(-0.5) * (coordinate(0) + coordinate(2)) + x5);

    QuantSection tu = extended_hat(D, x5, {u0});
    CHECK(equiv(tu.u, constant(Complex(0, 2 * kPi)) * x5 * u0, *c, s, "phase").pass);

    // and therefore preserves the kernel
    auto rep = h0_residuals(D, holomorphic_polarization(c), tu, s);
    CHECK(rep.member);
    CHECK(rep.max_residual < 1e-9);
}
