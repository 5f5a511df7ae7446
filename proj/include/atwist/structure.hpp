#pragma once

#include <memory>
#include <string>

#include "atwist/calculus.hpp"

namespace atwist {

/// Bivector Lambda, 3-form phi and closed 1-form theta tied together by the
/// almost twisted compatibility axioms
///
///   (1) d phi = theta ^ phi
///   (2) anchor1(Lambda, theta) = 0
///   (3) (1/2) [Lambda, Lambda] = anchor_k(Lambda, phi)
///
/// which validate() checks numerically along with d theta = 0. The structure
/// caches the anchors of the coordinate forms and the twisted brackets of
/// coordinate form pairs; both get hit constantly by the coboundary.
class AtpStructure {
public:
    static std::shared_ptr<const AtpStructure> make(GradedField Lambda, GradedField phi,
                                                    GradedField theta);

    const ChartPtr& chart() const { return chart_; }
    const GradedField& Lambda() const { return Lambda_; }
    const GradedField& phi() const { return phi_; }
    const GradedField& theta() const { return theta_; }

    /// anchor1(Lambda, dx_j)
    const GradedField& anchor_basis(int j) const { return anchor_basis_[j]; }

    /// [dx_i, dx_j] under the twisted bracket (antisymmetric in i, j).
    GradedField coord_bracket(int i, int j) const;

private:
    AtpStructure() = default;

    ChartPtr chart_;
    GradedField Lambda_, phi_, theta_;
    std::vector<GradedField> anchor_basis_;
    std::vector<GradedField> coord_brackets_; // upper triangle, row-major
};

using AtpPtr = std::shared_ptr<const AtpStructure>;

struct NamedResult {
    std::string name;
    bool pass = false;
    double max_residual = 0.0;
};

struct ValidationReport {
    std::vector<NamedResult> results;
    bool pass() const;
    double max_residual() const;
};

/// Checks the three structure axioms plus closedness of theta.
ValidationReport validate(const AtpStructure& S, const Sampler& sampler);

/// Twisted bracket of 1-forms:
///   [a,b] = koszul(Lambda,a,b) + i_{anchor(b)} i_{anchor(a)} phi + Lambda(a,b) theta
GradedField twisted_bracket(const AtpStructure& S, const GradedField& a, const GradedField& b);

/// Twisted coboundary of a multivector field v of grade n <= 3, evaluated on
/// general 1-forms:
///   (dv)(a_1..a_{n+1}) = sum_i (-1)^(i-1) anchor(a_i)( v(..hat i..) )
///                      + sum_{i<j} (-1)^(i+j) v([a_i,a_j], ..hat i..hat j..)
ScalarExpr coboundary(const AtpStructure& S, const GradedField& v,
                      std::span<const GradedField> alphas);

/// Same operator assembled on coordinate 1-forms into a grade n+1 field.
/// Throws GradeUnsupported above grade 3.
GradedField coboundary_field(const AtpStructure& S, const GradedField& v);

/// {f, g} = Lambda(df, dg)
ScalarExpr poisson_bracket(const AtpStructure& S, const ScalarExpr& f, const ScalarExpr& g);

/// X_f = anchor1(Lambda, df)
GradedField hamiltonian(const AtpStructure& S, const ScalarExpr& f);

/// Cyclic Jacobi defect minus its phi correction:
///   {f,{g,h}} + {g,{h,f}} + {h,{f,g}} - anchor_k(Lambda,phi)(df,dg,dh)
/// Identically zero on a valid structure.
ScalarExpr jacobiator_residual(const AtpStructure& S, const ScalarExpr& f, const ScalarExpr& g,
                               const ScalarExpr& h);

/// coboundary(anchor_k(mu)) + anchor_k(d mu); zero iff the anchor
/// intertwines d and the twisted coboundary (with a sign).
GradedField chain_map_residual(const AtpStructure& S, const GradedField& mu);

} // namespace atwist
