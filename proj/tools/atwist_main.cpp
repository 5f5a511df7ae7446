#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atwist/checks.hpp"
#include "atwist/errors.hpp"
#include "atwist/manifest.hpp"

namespace {

using Runner = std::vector<atwist::CheckReport> (*)(const atwist::Manifest&,
                                                    const atwist::RunOptions&);

const std::map<std::string, std::pair<Runner, const char*>> kSuites = {
    {"validate", {&atwist::run_validate, "structure axioms, coboundary, chain map, Jacobiator"}},
    {"prequant", {&atwist::run_prequant, "exactness certificate and derivative laws"}},
    {"polarize", {&atwist::run_polarize, "polarization isotropy, closure, membership"}},
    {"hilbert", {&atwist::run_hilbert, "kernel sections, operator invariance, inner product"}},
    {"report", {&atwist::run_report, "every suite the manifest has blocks for"}},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical checker for almost twisted Poisson manifests"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string json_path;
    atwist::RunOptions opts;

    for (const auto& [name, suite] : kSuites) {
        CLI::App* sub = app.add_subcommand(name, suite.second);
        sub->add_option("manifest", manifest_path, "manifest file")->required();
        sub->add_option("--samples", opts.samples, "points per randomized identity check")
            ->capture_default_str();
        sub->add_option("--tol", opts.tol, "relative tolerance for identity checks")
            ->capture_default_str();
        sub->add_option("--seed", opts.seed, "base seed for all sample streams")
            ->capture_default_str();
        sub->add_option("--grid", opts.grid,
                        "quadrature points per axis (default: manifest value, else 17)");
        sub->add_option("--json", json_path, "also write the report as JSON to this path");
        sub->add_flag("--timings", opts.timings,
                      "fill wall_ms with real timings (makes reports non-reproducible)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        atwist::Manifest m = atwist::load_manifest(manifest_path);
        std::vector<atwist::CheckReport> reports;
        for (const auto& [name, suite] : kSuites)
            if (app.got_subcommand(name)) reports = suite.first(m, opts);

        std::fputs(atwist::reports_to_table(reports).c_str(), stdout);
        long failed = 0;
        for (const auto& r : reports)
            if (r.status == atwist::CheckStatus::Fail) ++failed;
        if (failed == 0)
            std::printf("%zu checks passed\n", reports.size());
        else
            std::printf("%ld of %zu checks FAILED\n", failed, reports.size());

        if (!json_path.empty()) {
            std::ofstream f(json_path, std::ios::binary);
            if (!f) {
                std::fprintf(stderr, "atwist: cannot write %s\n", json_path.c_str());
                return 2;
            }
            f << atwist::reports_to_json(reports);
        }
        return atwist::exit_code_for(reports);
    } catch (const atwist::Error& e) {
        std::fprintf(stderr, "atwist: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "atwist: unexpected error: %s\n", e.what());
        return 2;
    }
}
