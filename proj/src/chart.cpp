#include "atwist/chart.hpp"

#include <set>

#include "atwist/errors.hpp"

namespace atwist {

ChartPtr make_chart(int dim, std::vector<std::string> names,
                    std::vector<std::array<double, 2>> box,
                    std::vector<std::array<int, 2>> complex_pairs, double guard_eps) {
    if (dim < 1) throw Error("chart dimension must be at least 1");
    if (names.empty()) {
        names.reserve(dim);
        for (int k = 1; k <= dim; ++k) names.push_back("x" + std::to_string(k));
    }
    if (static_cast<int>(names.size()) != dim)
        throw Error("chart needs exactly one name per coordinate");
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw Error("coordinate names must be non-empty");
        if (n == "i") throw Error("\"i\" is reserved for the imaginary unit");
        if (!seen.insert(n).second) throw Error("duplicate coordinate name: " + n);
    }
    if (box.empty()) box.assign(dim, {-1.0, 1.0});
    if (static_cast<int>(box.size()) != dim)
        throw Error("chart box needs one interval per coordinate");
    for (const auto& [lo, hi] : box)
        if (!(lo < hi)) throw Error("chart box intervals must satisfy lo < hi");
    std::set<int> used;
    for (const auto& [re, im] : complex_pairs) {
        if (re < 0 || re >= dim || im < 0 || im >= dim || re == im)
            throw Error("complex pair indices out of range");
        if (!used.insert(re).second || !used.insert(im).second)
            throw Error("complex pairs must not share coordinates");
    }
    if (!(guard_eps > 0.0)) throw Error("guard_eps must be positive");

    auto chart = std::make_shared<Chart>();
    chart->dim = dim;
    chart->coord_names = std::move(names);
    chart->box = std::move(box);
    chart->complex_pairs = std::move(complex_pairs);
    chart->guard_eps = guard_eps;
    return chart;
}

bool same_chart(const Chart& a, const Chart& b) {
    return a.dim == b.dim && a.coord_names == b.coord_names && a.box == b.box &&
           a.complex_pairs == b.complex_pairs && a.guard_eps == b.guard_eps;
}

} // namespace atwist
