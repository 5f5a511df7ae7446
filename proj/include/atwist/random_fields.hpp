#pragma once

#include <cstdint>
#include <random>

#include "atwist/field.hpp"

namespace atwist {

/// Deterministic generator for randomized property checks. Coefficients are
/// small multiples of 1/8 (exact binary fractions, magnitude <= 2) so the
/// identities under test cancel with plenty of margin against the 1e-9
/// relative tolerance.
class FieldRng {
public:
    explicit FieldRng(std::uint64_t seed) : rng_(seed) {}

    /// integer in [0, n)
    int below(int n);

    /// nonzero coefficient in {-2, ..., -1/8, 1/8, ..., 2}
    double coeff();

private:
    std::mt19937_64 rng_;
};

struct PolynomialOptions {
    int max_terms = 4;
    int max_degree = 2;      // per-variable exponent cap
    int max_total_degree = 3;
    bool complex_coeffs = false;
};

/// Random sparse polynomial in the chart coordinates, never identically zero.
ScalarExpr random_polynomial(const ChartPtr& chart, FieldRng& rng,
                             const PolynomialOptions& opts = {});

/// Random form / multivector with polynomial coefficients on a few tuples.
GradedField random_form(const ChartPtr& chart, int grade, FieldRng& rng,
                        const PolynomialOptions& opts = {});
GradedField random_multivector(const ChartPtr& chart, int grade, FieldRng& rng,
                               const PolynomialOptions& opts = {});

} // namespace atwist
