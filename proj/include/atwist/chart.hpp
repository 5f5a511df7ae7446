#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace atwist {

/// A coordinate chart on a box in R^dim. Coordinates are real; complex
/// coordinates enter through declared pairs z_k = x_a + i*x_b.
///
/// All indices in the C++ API are 0-based. The manifest text format is
/// 1-based and converted at the parser boundary.
struct Chart {
    int dim = 0;
    std::vector<std::string> coord_names;
    std::vector<std::array<double, 2>> box;          // per-coordinate [lo, hi]
    std::vector<std::array<int, 2>> complex_pairs;   // (re, im) coordinate indices
    double guard_eps = 1e-12;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Builds a validated chart. Empty `names` means x1..x<dim>. Empty `box`
/// means [-1,1] on every axis. Throws atwist::Error on bad data ("i" is a
/// reserved identifier and cannot name a coordinate).
ChartPtr make_chart(int dim,
                    std::vector<std::string> names = {},
                    std::vector<std::array<double, 2>> box = {},
                    std::vector<std::array<int, 2>> complex_pairs = {},
                    double guard_eps = 1e-12);

/// Structural equality; fields built from separately parsed but identical
/// manifests are considered chart-compatible.
bool same_chart(const Chart& a, const Chart& b);

} // namespace atwist
