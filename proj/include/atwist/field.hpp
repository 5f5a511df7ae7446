#pragma once

#include <map>
#include <span>
#include <vector>

#include "atwist/chart.hpp"
#include "atwist/expr.hpp"

namespace atwist {

enum class Variance { Covariant, Contravariant };

using IndexTuple = std::vector<int>;

/// Sorts indices ascending in place. Returns the permutation sign, or 0 when
/// an index repeats.
int sort_with_sign(IndexTuple& idx);

/// Antisymmetric tensor field of homogeneous grade: a differential form
/// (covariant) or multivector field (contravariant) with ScalarExpr
/// coefficients on strictly ascending index tuples. Components that
/// simplify to zero are not stored, so an empty map is the zero field.
/// Grade 0 holds a single coefficient at the empty tuple.
class GradedField {
public:
    GradedField() = default;
    GradedField(ChartPtr chart, Variance variance, int grade);

    static GradedField form(ChartPtr chart, int grade);
    static GradedField multivector(ChartPtr chart, int grade);
    static GradedField scalar(ChartPtr chart, Variance variance, const ScalarExpr& value);

    const ChartPtr& chart() const { return chart_; }
    Variance variance() const { return variance_; }
    int grade() const { return grade_; }
    bool is_zero_field() const { return components_.empty(); }

    /// Sets the coefficient on a strictly ascending tuple (throws otherwise).
    /// Zero expressions erase the entry.
    void set(IndexTuple ascending, ScalarExpr value);

    /// Adds into the coefficient at an arbitrary-order tuple, applying the
    /// permutation sign; tuples with a repeated index are dropped.
    void accumulate(IndexTuple idx, ScalarExpr value);

    /// Coefficient at an arbitrary-order tuple with permutation sign applied;
    /// zero for repeated or absent indices.
    ScalarExpr component(std::span<const int> idx) const;

    /// Grade-0 coefficient.
    ScalarExpr scalar_value() const;

    const std::map<IndexTuple, ScalarExpr>& components() const { return components_; }

private:
    ChartPtr chart_;
    Variance variance_ = Variance::Covariant;
    int grade_ = 0;
    std::map<IndexTuple, ScalarExpr> components_;
};

using FormField = GradedField;
using MultiVectorField = GradedField;

GradedField operator+(const GradedField& a, const GradedField& b);
GradedField operator-(const GradedField& a, const GradedField& b);
GradedField operator-(const GradedField& a);
GradedField operator*(const ScalarExpr& s, const GradedField& a);
GradedField operator*(Complex c, const GradedField& a);

/// Throws ChartMismatch / VarianceMismatch unless a and b live on the same
/// chart with the stated variances.
void require_compatible(const GradedField& a, const GradedField& b);

/// The coordinate 1-form dx_j.
GradedField coordinate_form(ChartPtr chart, int j);

/// The coordinate vector field d/dx_j.
GradedField coordinate_vector(ChartPtr chart, int j);

/// Structural equality of all components (same chart contents assumed).
bool struct_eq(const GradedField& a, const GradedField& b);

} // namespace atwist
