#include "atwist/random_fields.hpp"

#include <algorithm>

#include "atwist/errors.hpp"

namespace atwist {

int FieldRng::below(int n) {
    // simple unbiased-enough draw; determinism matters here, not statistics
    return static_cast<int>(rng_() % static_cast<std::uint64_t>(n));
}

double FieldRng::coeff() {
    int v = below(32) - 16; // -16..15
    if (v >= 0) ++v;        // skip zero
    return v / 8.0;
}

namespace {

ScalarExpr random_monomial(const ChartPtr& chart, FieldRng& rng, const PolynomialOptions& opts,
                           bool complex_coeff) {
    Complex c{rng.coeff(), complex_coeff ? rng.coeff() : 0.0};
    std::vector<ScalarExpr> factors{constant(c)};
    int total = 0;
    for (int k = 0; k < chart->dim && total < opts.max_total_degree; ++k) {
        int e = rng.below(opts.max_degree + 1);
        e = std::min(e, opts.max_total_degree - total);
        if (e == 0) continue;
        total += e;
        factors.push_back(pow(coordinate(k), e));
    }
    return product_of(std::move(factors));
}

} // namespace

ScalarExpr random_polynomial(const ChartPtr& chart, FieldRng& rng, const PolynomialOptions& opts) {
    int terms = 1 + rng.below(std::max(opts.max_terms, 1));
    std::vector<ScalarExpr> sum;
    sum.reserve(terms);
    for (int t = 0; t < terms; ++t)
        sum.push_back(random_monomial(chart, rng, opts, opts.complex_coeffs));
    ScalarExpr out = sum_of(std::move(sum));
    if (out.is_zero()) return constant(rng.coeff());
    return out;
}

namespace {

GradedField random_field(const ChartPtr& chart, Variance variance, int grade, FieldRng& rng,
                         const PolynomialOptions& opts) {
    GradedField out(chart, variance, grade);
    if (grade > chart->dim) return out;
    if (grade == 0) {
        out.set({}, random_polynomial(chart, rng, opts));
        return out;
    }
    // a couple of random ascending tuples, possibly coinciding
    const int picks = 1 + rng.below(3);
    for (int p = 0; p < picks; ++p) {
        IndexTuple idx;
        std::vector<int> pool(chart->dim);
        for (int k = 0; k < chart->dim; ++k) pool[k] = k;
        for (int g = 0; g < grade; ++g) {
            int at = rng.below(static_cast<int>(pool.size()));
            idx.push_back(pool[at]);
            pool.erase(pool.begin() + at);
        }
        std::sort(idx.begin(), idx.end());
        out.accumulate(std::move(idx), random_polynomial(chart, rng, opts));
    }
    return out;
}

} // namespace

GradedField random_form(const ChartPtr& chart, int grade, FieldRng& rng,
                        const PolynomialOptions& opts) {
    return random_field(chart, Variance::Covariant, grade, rng, opts);
}

GradedField random_multivector(const ChartPtr& chart, int grade, FieldRng& rng,
                               const PolynomialOptions& opts) {
    return random_field(chart, Variance::Contravariant, grade, rng, opts);
}

} // namespace atwist
