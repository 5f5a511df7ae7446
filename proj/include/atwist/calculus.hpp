#pragma once

#include "atwist/field.hpp"
#include "atwist/sampler.hpp"

namespace atwist {

// Exterior/Schouten calculus over a chart. Sign conventions used throughout:
//
//   * k-forms and k-vectors pair through the determinant,
//     (dx_{i_1} ^ ... ^ dx_{i_k})(X_1,...,X_k) = det [ dx_{i_a}(X_b) ]
//   * interior product fills the FIRST slot: (i_X w)(Y,...) = w(X, Y, ...)
//   * anchor on 1-forms:  anchor1(L, a)(b) = L(a, b)
//   * anchor on k-forms:  anchor_k(L, w)(a_1..a_k)
//                            = (-1)^k w(anchor1(L,a_1), ..., anchor1(L,a_k))
//     and the identity on grade 0.

/// a ^ b. Both arguments must share chart and variance.
GradedField wedge(const GradedField& a, const GradedField& b);

/// Interior product of a grade-1 field into a grade-k field of the opposite
/// variance (vector into form, or 1-form into multivector). Grade 0 input
/// contracts to the zero scalar.
GradedField interior(const GradedField& one_leg, const GradedField& field);

/// Full contraction: field(legs[0], ..., legs[k-1]) with opposite-variance
/// grade-1 legs.
ScalarExpr pair_eval(const GradedField& field, std::span<const GradedField> legs);

/// Convenience pairing of a 1-form with a vector field (either order).
ScalarExpr pair1(const GradedField& a, const GradedField& b);

/// Exterior derivative of a form.
GradedField exterior_d(const GradedField& form);

/// df as a 1-form.
GradedField d_scalar(const ChartPtr& chart, const ScalarExpr& f);

/// Cartan formula: L_X = i_X d + d i_X on forms.
GradedField lie_form(const GradedField& X, const GradedField& form);

/// Derivation X(f) = sum_j X^j df/dx_j.
ScalarExpr apply_vector(const GradedField& X, const ScalarExpr& f);

/// sum_j dX^j/dx_j.
ScalarExpr divergence(const GradedField& X);

/// Schouten bracket of multivector fields, normalized so that it extends the
/// Lie bracket of vector fields with [P, f] = (-1)^(p-1) i_{df} P and the
/// graded Leibniz/Jacobi identities checked in the test suite. Grade of the
/// result is p + q - 1 (grade-0 pairs bracket to zero).
GradedField schouten(const GradedField& P, const GradedField& Q);

/// Lie derivative of a multivector along a vector field.
GradedField lie_multivector(const GradedField& X, const GradedField& P);

/// Koszul bracket of 1-forms:
///   [a, b] = L_{anchor(a)} b - L_{anchor(b)} a - d( L(a,b) )
GradedField koszul(const GradedField& Lambda, const GradedField& a, const GradedField& b);

/// Vector field anchor1(L, a) with components L(a, dx_j).
GradedField anchor1(const GradedField& Lambda, const GradedField& a);

/// Grade-preserving anchor of a k-form (see the convention block above).
GradedField anchor_k(const GradedField& Lambda, const GradedField& form);

struct FieldEquivReport {
    bool pass = true;
    double max_residual = 0.0;
    int points_used = 0;
};

/// Componentwise randomized equivalence of two fields (same grade/variance).
/// Each component pair gets its own point stream derived from `salt` and the
/// component tuple.
FieldEquivReport field_equiv(const GradedField& a, const GradedField& b, const Sampler& sampler,
                             std::string_view salt = {});

/// Shorthand for comparing against the zero field.
FieldEquivReport field_is_zero(const GradedField& a, const Sampler& sampler,
                               std::string_view salt = {});

} // namespace atwist
