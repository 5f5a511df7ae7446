#pragma once

#include "atwist/polarize.hpp"

namespace atwist {

/// Midpoint tensor-product rule over the chart box (optionally overridden).
/// The rule is spectrally accurate for smooth integrands that vanish to all
/// orders at the boundary, which is the compact-support regime the inner
/// product is meant for.
struct QuadratureGrid {
    int points_per_axis = 17;
    std::vector<std::array<double, 2>> box; // empty: use the chart box
    double boundary_tol = 1e-9;             // leak detection threshold
};

struct InnerProductResult {
    Complex value{};
    bool boundary_leak = false; // |u1 conj(u2)| above boundary_tol at a probe
    double boundary_max = 0.0;
    long points = 0;
};

/// integral of u1 conj(u2) over the box. Summation is chunked pairwise in a
/// fixed order, so the result is bit-for-bit reproducible for a given grid,
/// including under the internal parallelism. Conjugate symmetry
/// inner(a,b) == conj(inner(b,a)) holds exactly in floating point.
InnerProductResult inner_product(const QuantSection& q1, const QuantSection& q2,
                                 const Chart& chart, const QuadratureGrid& grid);

} // namespace atwist
