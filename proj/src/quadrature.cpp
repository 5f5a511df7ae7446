#include "atwist/quadrature.hpp"

#include <cmath>
#include <future>
#include <thread>

#include "atwist/errors.hpp"
#include "atwist/program.hpp"

namespace atwist {

namespace {

// Pairwise reduction in fixed index order. Deterministic regardless of how
// the partial sums were produced.
Complex pairwise_sum(std::span<const Complex> values) {
    if (values.empty()) return {};
    if (values.size() == 1) return values[0];
    size_t half = values.size() / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

struct GridShape {
    std::vector<std::array<double, 2>> box;
    int per_axis;
    int dim;
    long total;

    void point_at(long flat, std::vector<double>& x) const {
        for (int k = 0; k < dim; ++k) {
            long m = flat % per_axis;
            flat /= per_axis;
            auto [lo, hi] = box[k];
            double h = (hi - lo) / per_axis;
            x[k] = lo + (static_cast<double>(m) + 0.5) * h;
        }
    }
};

} // namespace

InnerProductResult inner_product(const QuantSection& q1, const QuantSection& q2,
                                 const Chart& chart, const QuadratureGrid& grid) {
    if (grid.points_per_axis < 1) throw Error("quadrature needs at least one point per axis");

    GridShape shape;
    shape.box = grid.box.empty() ? chart.box : grid.box;
    if (static_cast<int>(shape.box.size()) != chart.dim)
        throw Error("quadrature box needs one interval per coordinate");
    shape.per_axis = grid.points_per_axis;
    shape.dim = chart.dim;
    shape.total = 1;
    for (int k = 0; k < shape.dim; ++k) shape.total *= shape.per_axis;

    double cell = 1.0;
    for (auto [lo, hi] : shape.box) cell *= (hi - lo) / shape.per_axis;

    const Program p1 = Program::compile(q1.u, chart.guard_eps);
    const Program p2 = Program::compile(q2.u, chart.guard_eps);

    constexpr long kChunk = 8192;
    const long n_chunks = (shape.total + kChunk - 1) / kChunk;

    auto chunk_sum = [&](long chunk) {
        const long begin = chunk * kChunk;
        const long end = std::min(begin + kChunk, shape.total);
        std::vector<double> x(shape.dim);
        std::vector<Complex> s1, s2;
        Complex acc{};
        for (long flat = begin; flat < end; ++flat) {
            shape.point_at(flat, x);
            acc += p1.run(x, s1) * std::conj(p2.run(x, s2));
        }
        return acc;
    };

    std::vector<Complex> partials(n_chunks);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (n_chunks > 4 && hw > 1) {
        std::vector<std::future<Complex>> futures;
        futures.reserve(n_chunks);
        for (long c = 0; c < n_chunks; ++c)
            futures.push_back(std::async(std::launch::async, chunk_sum, c));
        for (long c = 0; c < n_chunks; ++c) partials[c] = futures[c].get();
    } else {
        for (long c = 0; c < n_chunks; ++c) partials[c] = chunk_sum(c);
    }

    InnerProductResult result;
    result.value = pairwise_sum(partials) * cell;
    result.points = shape.total;

    // boundary decay probes: the integrand is sampled on the outermost
    // midpoint layer (face centers and corners, inset by half a cell), the
    // closest the rule itself ever gets to the boundary
    {
        std::vector<double> inset_lo(shape.dim), inset_hi(shape.dim), center(shape.dim);
        for (int k = 0; k < shape.dim; ++k) {
            double h = (shape.box[k][1] - shape.box[k][0]) / shape.per_axis;
            inset_lo[k] = shape.box[k][0] + 0.5 * h;
            inset_hi[k] = shape.box[k][1] - 0.5 * h;
            center[k] = 0.5 * (shape.box[k][0] + shape.box[k][1]);
        }
        std::vector<std::vector<double>> probes;
        for (int k = 0; k < shape.dim; ++k) {
            for (int side = 0; side < 2; ++side) {
                auto p = center;
                p[k] = side == 0 ? inset_lo[k] : inset_hi[k];
                probes.push_back(std::move(p));
            }
        }
        const long corners = 1L << shape.dim;
        for (long mask = 0; mask < corners; ++mask) {
            std::vector<double> p(shape.dim);
            for (int k = 0; k < shape.dim; ++k) p[k] = ((mask >> k) & 1) ? inset_hi[k] : inset_lo[k];
            probes.push_back(std::move(p));
        }
        std::vector<Complex> s1, s2;
        for (const auto& p : probes) {
            double mag;
            try {
                mag = std::abs(p1.run(p, s1) * std::conj(p2.run(p, s2)));
            } catch (const Error&) {
                // singular that close to the boundary: certainly not decayed
                mag = std::numeric_limits<double>::infinity();
            }
            result.boundary_max = std::max(result.boundary_max, mag);
        }
        result.boundary_leak = result.boundary_max > grid.boundary_tol;
    }
    return result;
}

} // namespace atwist
