#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atwist/chart.hpp"
#include "atwist/expr.hpp"
#include "atwist/field.hpp"

namespace atwist {

/// Midpoint-rule settings plus the anti-Hermiticity test data: h is the
/// observable whose hat operator is probed, u1/u2 are the test sections the
/// inner products are taken between.
struct QuadratureBlock {
    int points_per_axis = 17;
    std::optional<ScalarExpr> h;
    std::optional<ScalarExpr> u1;
    std::optional<ScalarExpr> u2;
};

/// Fully resolved manifest: every expression is parsed and named scalars are
/// substituted away. Optional blocks stay disengaged when the section is
/// absent, so check runners can tell "absent" from "explicitly zero" (a
/// present-but-empty section is the zero field of that block's grade).
struct Manifest {
    ChartPtr chart;
    std::optional<MultiVectorField> Lambda;  // grade-2 multivector
    std::optional<FormField> phi;            // 3-form
    std::optional<FormField> theta;          // 1-form
    std::optional<MultiVectorField> Z;       // vector field
    std::optional<FormField> eta;            // 2-form
    std::optional<FormField> vartheta;       // 1-form, potential for eta
    std::optional<FormField> omega;          // 1-form, complex coefficients allowed
    std::vector<FormField> polarization;     // complex 1-form generators
    std::vector<std::pair<std::string, ScalarExpr>> sections;
    std::vector<std::pair<std::string, ScalarExpr>> observables;
    std::optional<QuadratureBlock> quadrature;
};

/// Parses the sectioned manifest text format (see README: bracketed section
/// headers, component keys as parenthesized 1-based index tuples, named
/// scalars resolved acyclically). Throws ParseError carrying kind, 1-based
/// line/column and the offending token on any malformed input.
Manifest parse_manifest(const std::string& text);

/// Reads and parses a manifest file. Throws atwist::Error when the file
/// cannot be read, ParseError on bad content.
Manifest load_manifest(const std::string& path);

/// Renders a manifest the parser maps back to a structurally equal value.
/// Named scalars were inlined during parsing, so none appear in the output.
std::string serialize_manifest(const Manifest& m);

bool struct_eq(const Manifest& a, const Manifest& b);

} // namespace atwist
