#include "atwist/field.hpp"

#include <algorithm>

#include "atwist/errors.hpp"

namespace atwist {

int sort_with_sign(IndexTuple& idx) {
    // insertion sort, counting inversions; tuples are tiny
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        int v = idx[i];
        size_t j = i;
        while (j > 0 && idx[j - 1] > v) {
            idx[j] = idx[j - 1];
            --j;
            sign = -sign;
        }
        idx[j] = v;
    }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

GradedField::GradedField(ChartPtr chart, Variance variance, int grade)
    : chart_(std::move(chart)), variance_(variance), grade_(grade) {
    if (!chart_) throw Error("field needs a chart");
    if (grade_ < 0) throw Error("field grade must be non-negative");
}

GradedField GradedField::form(ChartPtr chart, int grade) {
    return GradedField(std::move(chart), Variance::Covariant, grade);
}

GradedField GradedField::multivector(ChartPtr chart, int grade) {
    return GradedField(std::move(chart), Variance::Contravariant, grade);
}

GradedField GradedField::scalar(ChartPtr chart, Variance variance, const ScalarExpr& value) {
    GradedField f(std::move(chart), variance, 0);
    f.set({}, value);
    return f;
}

void GradedField::set(IndexTuple ascending, ScalarExpr value) {
    if (static_cast<int>(ascending.size()) != grade_)
        throw Error("component tuple length must equal the field grade");
    for (size_t i = 0; i < ascending.size(); ++i) {
        if (ascending[i] < 0 || ascending[i] >= chart_->dim)
            throw Error("component index out of chart range");
        if (i > 0 && ascending[i] <= ascending[i - 1])
            throw Error("component tuple must be strictly ascending");
    }
    if (value.is_zero()) components_.erase(ascending);
    else components_[std::move(ascending)] = std::move(value);
}

void GradedField::accumulate(IndexTuple idx, ScalarExpr value) {
    if (value.is_zero()) return;
    int sign = sort_with_sign(idx);
    if (sign == 0) return;
    ScalarExpr signed_value = sign < 0 ? -value : value;
    auto it = components_.find(idx);
    if (it == components_.end()) {
        set(std::move(idx), std::move(signed_value));
    } else {
        ScalarExpr combined = it->second + signed_value;
        if (combined.is_zero()) components_.erase(it);
        else it->second = std::move(combined);
    }
}

ScalarExpr GradedField::component(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != grade_)
        throw Error("component tuple length must equal the field grade");
    IndexTuple key(idx.begin(), idx.end());
    int sign = sort_with_sign(key);
    if (sign == 0) return constant(0.0);
    auto it = components_.find(key);
    if (it == components_.end()) return constant(0.0);
    return sign < 0 ? -it->second : it->second;
}

ScalarExpr GradedField::scalar_value() const {
    if (grade_ != 0) throw Error("scalar_value: field has positive grade");
    auto it = components_.find(IndexTuple{});
    return it == components_.end() ? constant(0.0) : it->second;
}

void require_compatible(const GradedField& a, const GradedField& b) {
    if (!a.chart() || !b.chart()) throw ChartMismatch("field without a chart");
    if (a.chart() != b.chart() && !same_chart(*a.chart(), *b.chart()))
        throw ChartMismatch("fields live on different charts");
    if (a.variance() != b.variance())
        throw VarianceMismatch("fields have different variance");
}

GradedField operator+(const GradedField& a, const GradedField& b) {
    require_compatible(a, b);
    if (a.grade() != b.grade()) throw Error("cannot add fields of different grade");
    GradedField out(a.chart(), a.variance(), a.grade());
    for (const auto& [idx, c] : a.components()) out.accumulate(idx, c);
    for (const auto& [idx, c] : b.components()) out.accumulate(idx, c);
    return out;
}

GradedField operator-(const GradedField& a, const GradedField& b) { return a + (-b); }

GradedField operator-(const GradedField& a) {
    GradedField out(a.chart(), a.variance(), a.grade());
    for (const auto& [idx, c] : a.components()) out.set(idx, -c);
    return out;
}

GradedField operator*(const ScalarExpr& s, const GradedField& a) {
    GradedField out(a.chart(), a.variance(), a.grade());
    if (s.is_zero()) return out;
    for (const auto& [idx, c] : a.components()) out.set(idx, s * c);
    return out;
}

GradedField operator*(Complex c, const GradedField& a) { return constant(c) * a; }

GradedField coordinate_form(ChartPtr chart, int j) {
    GradedField f = GradedField::form(std::move(chart), 1);
    f.set({j}, constant(1.0));
    return f;
}

GradedField coordinate_vector(ChartPtr chart, int j) {
    GradedField f = GradedField::multivector(std::move(chart), 1);
    f.set({j}, constant(1.0));
    return f;
}

bool struct_eq(const GradedField& a, const GradedField& b) {
    if (a.variance() != b.variance() || a.grade() != b.grade()) return false;
    if (a.components().size() != b.components().size()) return false;
    auto ia = a.components().begin();
    auto ib = b.components().begin();
    for (; ia != a.components().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!struct_eq(ia->second, ib->second)) return false;
    }
    return true;
}

} // namespace atwist
