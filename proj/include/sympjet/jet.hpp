#pragma once

#include "sympjet/poly.hpp"

namespace sympjet {

/// Truncated Taylor polynomial of a self-map of ℂ^dim anchored at `base`.
///
/// Components are stored in local coordinates w = z − base, so the constant
/// terms are the image of the base point. Every stored monomial has degree
/// at most `order`; all operations truncate eagerly.
class JetMap {
public:
    JetMap() = default;
    JetMap(Vec base, int order, PolyMap components);

    static JetMap identity(const Vec& base, int order);
    /// z ↦ image + A (z − base).
    static JetMap linear(const Vec& base, const Mat& a, int order, const Vec& image);

    int dim() const noexcept { return static_cast<int>(base_.size()); }
    int order() const noexcept { return order_; }
    const Vec& base() const noexcept { return base_; }
    const PolyMap& components() const noexcept { return comps_; }
    const PolyScalar& operator[](int i) const { return comps_[static_cast<std::size_t>(i)]; }

    /// Image of the base point (constant parts).
    Vec image() const;

    /// Evaluates the truncation at an ambient point z.
    Vec eval(const Vec& z) const;

    JetMap truncated(int order) const;

    /// Max coefficient difference; bases must agree.
    double distance(const JetMap& o) const;

private:
    Vec base_;
    int order_ = 0;
    PolyMap comps_;
};

/// Scalar evaluation of a PolyScalar (dimension-checked).
cplx poly_eval(const PolyScalar& f, const Vec& z);
/// Evaluation of a jet at an ambient point.
Vec poly_eval(const JetMap& f, const Vec& z);

/// outer ∘ inner, truncated at min(orders). Requires inner.image() to match
/// outer.base() within `tol` (relative to the point scale).
JetMap jet_compose(const JetMap& outer, const JetMap& inner, double tol = tolerance());

/// Jet G at F(base) with G ∘ F = id up to F's order.
/// Throws PreconditionError when the linear part is singular or its
/// condition number exceeds `max_condition`.
JetMap jet_invert(const JetMap& f, double max_condition = 1e12);

/// Degree-r terms of every component (local coordinates).
PolyMap homogeneous_part(const JetMap& f, int r);

/// Jacobian of the truncation at the base point.
Mat linear_part(const JetMap& f);

/// Largest |coefficient| of degree < `below` in `f − id` at f's base
/// (constant part measured against the base itself).
double identity_defect(const JetMap& f, int below);

}  // namespace sympjet
