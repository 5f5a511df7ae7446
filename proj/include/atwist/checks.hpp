#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atwist/manifest.hpp"

namespace atwist {

enum class CheckStatus { Pass, Fail, Warn };

const char* to_string(CheckStatus s);

/// One row of a suite run. `samples` is the number of evaluation points the
/// row's verdict rests on (random samples for identity checks, grid points
/// for quadrature rows).
struct CheckReport {
    std::string check;
    CheckStatus status = CheckStatus::Pass;
    double max_residual = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

struct RunOptions {
    int samples = 64;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int grid = 0;         // quadrature points per axis; 0 defers to the manifest
    bool timings = false; // off: wall_ms reported as 0 so reports are byte-stable
};

/// Structure axioms, coboundary squares to zero, anchor chain map, Jacobiator.
/// Needs [Lambda]; [phi] and [theta] default to zero.
std::vector<CheckReport> run_validate(const Manifest& m, const RunOptions& opts);

/// Certificate residuals, curvature law against the bivector, hermitian
/// compatibility, operator-bracket homomorphism. Needs [Lambda], [Z], [eta],
/// [vartheta].
std::vector<CheckReport> run_prequant(const Manifest& m, const RunOptions& opts);

/// Generator isotropy and bracket closure, plus polarized/quantizable
/// membership of every listed observable. Needs [Lambda], [polarization].
std::vector<CheckReport> run_polarize(const Manifest& m, const RunOptions& opts);

/// Kernel residuals for every listed section, operator invariance of the
/// kernel, and the quadrature anti-Hermiticity probe when the manifest
/// carries h/u1/u2. Needs [Lambda], [polarization], [sections]; the
/// derivative is built from [omega]/[Z], each defaulting to zero.
std::vector<CheckReport> run_hilbert(const Manifest& m, const RunOptions& opts);

/// Every suite whose manifest blocks are present, in the order above.
std::vector<CheckReport> run_report(const Manifest& m, const RunOptions& opts);

/// 0 when nothing failed (warn rows count as passes), 1 otherwise.
int exit_code_for(const std::vector<CheckReport>& reports);

/// JSON array, one object per row, fixed key order
/// {check, status, max_residual, samples, seed, wall_ms}.
std::string reports_to_json(const std::vector<CheckReport>& reports);

/// Aligned human-readable table.
std::string reports_to_table(const std::vector<CheckReport>& reports);

} // namespace atwist
