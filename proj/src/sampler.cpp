#include "atwist/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "atwist/errors.hpp"
#include "atwist/program.hpp"

namespace atwist {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt) {
    return splitmix(seed ^ fnv1a(salt));
}

PointStream::PointStream(const Chart& chart, std::uint64_t seed)
    : chart_(chart), rng_(seed), point_(chart.dim) {}

double PointStream::unit() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

const std::vector<double>& PointStream::next() {
    for (int k = 0; k < chart_.dim; ++k) {
        auto [lo, hi] = chart_.box[k];
        point_[k] = lo + (hi - lo) * unit();
    }
    return point_;
}

EquivReport equiv(const ScalarExpr& e1, const ScalarExpr& e2, const Chart& chart,
                  const Sampler& sampler, std::string_view salt) {
    Program p1 = Program::compile(e1, chart.guard_eps);
    Program p2 = Program::compile(e2, chart.guard_eps);
    PointStream points(chart, mix_seed(sampler.seed, salt));

    EquivReport report;
    report.pass = true;
    for (int n = 0; n < sampler.n_samples; ++n) {
        Complex v1, v2;
        while (true) {
            const auto& x = points.next();
            try {
                v1 = p1.run(x);
                v2 = p2.run(x);
                break;
            } catch (const DivisionNearZero&) {
            } catch (const LnOfZero&) {
            }
            if (++report.resamples > sampler.resample_limit)
                throw TooManySingularPoints("equiv: resample budget exhausted");
        }
        double rel = std::abs(v1 - v2) / (1.0 + std::max(std::abs(v1), std::abs(v2)));
        report.max_residual = std::max(report.max_residual, rel);
        if (rel > sampler.tol) report.pass = false;
        ++report.points_used;
    }
    return report;
}

} // namespace atwist
