#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "atwist/chart.hpp"
#include "atwist/expr.hpp"

namespace atwist {

/// Randomized identity checking: two expressions are accepted as equal when
/// |e1 - e2| <= tol * (1 + max(|e1|, |e2|)) at every sampled point of the
/// chart box. Points that hit a singularity of either side are replaced, up
/// to resample_limit replacements per check.
struct Sampler {
    std::uint64_t seed = 0;
    int n_samples = 64;
    double tol = 1e-9;
    int resample_limit = 100;

    Sampler with_seed(std::uint64_t s) const {
        Sampler out = *this;
        out.seed = s;
        return out;
    }
};

/// Splits one user-facing seed into independent deterministic streams, one
/// per named check, so checks can run in any order (or in parallel) without
/// changing each other's points.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt);

/// Deterministic point source for a chart box. mt19937_64 has a fixed
/// standard-mandated sequence and the uniform mapping below avoids
/// std::uniform_real_distribution (whose output is implementation-defined),
/// so identical seeds give identical points everywhere.
class PointStream {
public:
    PointStream(const Chart& chart, std::uint64_t seed);

    /// Uniform draw from [0,1).
    double unit();

    const std::vector<double>& next();

private:
    const Chart& chart_;
    std::mt19937_64 rng_;
    std::vector<double> point_;
};

struct EquivReport {
    bool pass = false;
    double max_residual = 0.0; // max over points of |e1-e2| / (1 + max|ei|)
    int points_used = 0;
    int resamples = 0;
};

/// Randomized equivalence check for two expressions over one chart.
/// `salt` names the check; it decorrelates the point stream from other
/// checks run with the same user seed. Throws TooManySingularPoints when
/// the resample budget runs out.
EquivReport equiv(const ScalarExpr& e1, const ScalarExpr& e2, const Chart& chart,
                  const Sampler& sampler, std::string_view salt = {});

} // namespace atwist
