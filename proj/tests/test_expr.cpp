#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "atwist/errors.hpp"
#include "atwist/expr.hpp"
#include "atwist/parser.hpp"
#include "atwist/program.hpp"
#include "atwist/random_fields.hpp"
#include "atwist/sampler.hpp"

using namespace atwist;

namespace {

ChartPtr chart5() {
    return make_chart(5);
}

ChartPtr chart5_pairs() {
    return make_chart(5, {}, {}, {{0, 1}, {2, 3}});
}

// assorted non-polynomial trees the pure polynomial generator never emits
ScalarExpr composite(int which, const ChartPtr& c) {
    ScalarExpr x1 = coordinate(0), x2 = coordinate(1), x3 = coordinate(2);
    switch (which % 5) {
    case 0: return exp(x1 * x2) - sin(x3);
    case 1: return cos(x1) / (constant(2.0) + pow(x2, 2));
    case 2: return ln(constant(1.5) + pow(x1, 2)) * x3;
    case 3: return conj_expr((constant(Complex(0.0, 1.0)) * x1 + x2) * exp(x3));
    default: return pow(x1 + x2 * x3, -2) + constant(Complex(0.25, -0.5));
    }
    (void)c;
}

} // namespace

TEST_CASE("partial differentiates polynomials and the chain rule") {
    auto c = chart5();
    ScalarExpr x1 = coordinate(0), x3 = coordinate(2), x5 = coordinate(4);
    Sampler s;

    // d/dx1 (x1^3) = 3 x1^2
    CHECK(equiv(partial(pow(x1, 3), 0), 3.0 * pow(x1, 2), *c, s, "cube").pass);

    // d/dx5 exp(-(x3^2 + x5)) = -exp(-(x3^2 + x5))
    ScalarExpr g = exp(-(pow(x3, 2) + x5));
    CHECK(equiv(partial(g, 4), -g, *c, s, "gauss").pass);
    // and the x3 direction picks up the inner factor
    CHECK(equiv(partial(g, 2), -2.0 * x3 * g, *c, s, "gauss3").pass);

    // coordinates are independent
    CHECK(partial(x1, 4).is_zero());
    CHECK(partial(x1, 0).is_one());

    // quotient rule, ln, sin/cos
    CHECK(equiv(partial(x1 / x3, 2), -x1 / pow(x3, 2), *c, s, "quot").pass);
    CHECK(equiv(partial(ln(x3), 2), constant(1.0) / x3, *c, s, "ln").pass);
    CHECK(equiv(partial(sin(x1), 0), cos(x1), *c, s, "sin").pass);
    CHECK(equiv(partial(cos(x1), 0), -sin(x1), *c, s, "cos").pass);
}

TEST_CASE("partial satisfies the product rule on random polynomials") {
    auto c = chart5();
    FieldRng rng(2024);
    Sampler s;
    for (int round = 0; round < 50; ++round) {
        ScalarExpr f = random_polynomial(c, rng);
        ScalarExpr g = random_polynomial(c, rng);
        int k = rng.below(c->dim);
        ScalarExpr lhs = partial(f * g, k);
        ScalarExpr rhs = partial(f, k) * g + f * partial(g, k);
        auto rep = equiv(lhs, rhs, *c, s, "prodrule");
        CHECK(rep.pass);
    }
}

TEST_CASE("wirtinger derivatives see z and zbar as independent") {
    auto c = chart5_pairs();
    ScalarExpr x1 = coordinate(0), x2 = coordinate(1);
    ScalarExpr i = imaginary_unit();
    ScalarExpr z1 = x1 + i * x2;
    ScalarExpr z1bar = x1 - i * x2;

    ScalarExpr dz_z = wirtinger(*c, z1, 0, false);
    ScalarExpr dzbar_z = wirtinger(*c, z1, 0, true);
    ScalarExpr dz_zbar = wirtinger(*c, z1bar, 0, false);
    ScalarExpr dzbar_zbar = wirtinger(*c, z1bar, 0, true);

    CHECK(dz_z.is_one());
    CHECK(dzbar_z.is_zero());
    CHECK(dz_zbar.is_zero());
    CHECK(dzbar_zbar.is_one());

    // z1 is holomorphic in the second pair's variables too
    CHECK(wirtinger(*c, z1, 1, true).is_zero());

    // holomorphic composition: d/dzbar exp(z1) = 0, d/dz exp(z1) = exp(z1).
    // The zero is a cancellation of equal subtrees, so it is numeric, not
    // structural (the simplifier folds constants; it does not collect terms).
    Sampler s;
    CHECK(equiv(wirtinger(*c, exp(z1), 0, true), ScalarExpr{}, *c, s, "expzbar").pass);
    CHECK(equiv(wirtinger(*c, exp(z1), 0, false), exp(z1), *c, s, "expz").pass);

    CHECK_THROWS_AS(wirtinger(*chart5(), z1, 0, false), NoSuchPair);
    CHECK_THROWS_AS(wirtinger(*c, z1, 2, false), NoSuchPair);
}

TEST_CASE("apply_derivation contracts components against partials") {
    auto c = chart5();
    ScalarExpr x1 = coordinate(0), x2 = coordinate(1);
    std::vector<ScalarExpr> comps(5);
    comps[0] = x2;
    comps[1] = -x1;
    ScalarExpr f = pow(x1, 2) + pow(x2, 2);
    // rotation field annihilates the radius (numerically: the two cross
    // terms cancel as values, not as trees)
    Sampler s;
    CHECK(equiv(apply_derivation(comps, f), ScalarExpr{}, *c, s, "radius").pass);
    CHECK(equiv(apply_derivation(comps, pow(x1, 2)), 2.0 * x1 * x2, *c, s, "rot").pass);
}

TEST_CASE("printing and reparsing reproduces the tree") {
    auto c = chart5();
    FieldRng rng(7);
    for (int round = 0; round < 40; ++round) {
        ScalarExpr e = random_polynomial(c, rng, {.complex_coeffs = round % 2 == 1});
        ScalarExpr back = parse_expression(to_string(e, *c), *c);
        CHECK(struct_eq(e, back));
    }
    for (int which = 0; which < 5; ++which) {
        ScalarExpr e = composite(which, c);
        CHECK(struct_eq(e, parse_expression(to_string(e, *c), *c)));
    }
    // complex constants round-trip through the printer
    ScalarExpr z = constant(Complex(-2.5, 0.375)) * coordinate(3) + constant(Complex(0.0, -1.0));
    CHECK(struct_eq(z, parse_expression(to_string(z, *c), *c)));
}

TEST_CASE("format_real emits shortest exact decimals") {
    for (double v : {0.1, 1.0, -2.5, 1.0 / 3.0, 6.62607015e-34, 1e300, 0.0, -0.0, 123456789.0}) {
        std::string s = format_real(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.1) == "0.1");
}

TEST_CASE("simplify is idempotent and builders fold constants") {
    auto c = chart5();
    FieldRng rng(99);
    for (int round = 0; round < 30; ++round) {
        ScalarExpr e = round < 25 ? random_polynomial(c, rng, {.complex_coeffs = true})
                                  : composite(round, c);
        CHECK(struct_eq(simplify(e), e));
        CHECK(struct_eq(simplify(simplify(e)), simplify(e)));
    }

    ScalarExpr x1 = coordinate(0);
    CHECK((constant(2.0) + constant(-1.0)).is_one());
    CHECK((constant(0.0) * x1).is_zero());
    CHECK((constant(1.0) * x1).kind() == ExprKind::Coord);
    CHECK(struct_eq(-(-x1), x1));
    CHECK(struct_eq(conj_expr(conj_expr(composite(3, c))), composite(3, c)));
    CHECK(pow(x1, 1).kind() == ExprKind::Coord);
    CHECK(pow(x1, 0).is_one());
}

TEST_CASE("conjugation commutes with evaluation at real points") {
    auto c = chart5();
    FieldRng rng(123);
    PointStream pts(*c, 5150);
    for (int round = 0; round < 20; ++round) {
        ScalarExpr e = random_polynomial(c, rng, {.complex_coeffs = true});
        const auto& p = pts.next();
        Complex direct = std::conj(eval(e, p));
        Complex through = eval(conj_expr(e), p);
        CHECK(std::abs(direct - through) <= 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("eval guards division and logarithm singularities") {
    ScalarExpr x1 = coordinate(0), x2 = coordinate(1);
    std::vector<double> singular = {0.5, 0.0, 0.0, 0.0, 0.0};
    std::vector<double> fine = {0.5, 0.25, 0.0, 0.0, 0.0};

    CHECK_THROWS_AS(eval(x1 / x2, singular), DivisionNearZero);
    CHECK(std::abs(eval(x1 / x2, fine) - 2.0) < 1e-15);
    // the guard is a band, not an exact-zero test
    std::vector<double> near = {0.5, 1e-14, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(eval(x1 / x2, near, 1e-12), DivisionNearZero);

    CHECK_THROWS_AS(eval(ln(x2), singular), LnOfZero);
    CHECK(std::abs(eval(ln(x1), fine) - std::log(0.5)) < 1e-15);
}

TEST_CASE("compiled programs agree with recursive evaluation") {
    auto c = chart5();
    FieldRng rng(31337);
    PointStream pts(*c, 42);
    for (int round = 0; round < 30; ++round) {
        ScalarExpr e = round % 3 == 2 ? composite(round, c) : random_polynomial(c, rng);
        Program prog = Program::compile(e);
        for (int rep = 0; rep < 4; ++rep) {
            const auto& p = pts.next();
            Complex a = prog.run(p);
            Complex b = eval(e, p);
            CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(b)));
        }
    }

    // shared subtrees are evaluated once but still correctly
    ScalarExpr x1 = coordinate(0);
    ScalarExpr shared = exp(x1 * x1);
    ScalarExpr dag = shared * shared + shared;
    Program prog = Program::compile(dag);
    CHECK(prog.size() < 10);
    std::vector<double> p = {0.3, 0, 0, 0, 0};
    double v = std::exp(0.09);
    CHECK(std::abs(prog.run(p) - Complex(v * v + v)) < 1e-14);
}

TEST_CASE("program propagates evaluation guards") {
    ScalarExpr x2 = coordinate(1);
    Program prog = Program::compile(constant(1.0) / x2, 1e-12);
    std::vector<double> singular = {0.0, 0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(prog.run(singular), DivisionNearZero);
}
