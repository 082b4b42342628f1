#include "sympjet/jet.hpp"

#include <algorithm>
#include <cmath>

namespace sympjet {

JetMap::JetMap(Vec base, int order, PolyMap components)
    : base_(std::move(base)), order_(order), comps_(std::move(components)) {
    if (order_ < 0) throw PreconditionError("JetMap: negative order");
    if (static_cast<Eigen::Index>(comps_.size()) != base_.size())
        throw PreconditionError("JetMap: component count must equal the ambient dimension");
    const int d = dim();
    for (auto& c : comps_) {
        if (c.nvars() == 0 && c.empty()) c = PolyScalar(d);
        if (c.nvars() != d) throw PreconditionError("JetMap: component variable count mismatch");
        c = c.truncated(order_);
    }
}

JetMap JetMap::identity(const Vec& base, int order) {
    return linear(base, Mat::Identity(base.size(), base.size()), order, base);
}

JetMap JetMap::linear(const Vec& base, const Mat& a, int order, const Vec& image) {
    const int d = static_cast<int>(base.size());
    if (a.rows() != d || a.cols() != d || image.size() != d) throw PreconditionError("JetMap::linear: size mismatch");
    PolyMap comps;
    comps.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        PolyScalar p(d);
        p.add_term(MultiIndex(d), image(i));
        if (order >= 1) {
            for (int j = 0; j < d; ++j) p.add_term(MultiIndex::unit(d, j), a(i, j));
        }
        comps.push_back(std::move(p));
    }
    return JetMap(base, order, std::move(comps));
}

Vec JetMap::image() const {
    Vec out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = comps_[static_cast<std::size_t>(i)].constant_term();
    return out;
}

Vec JetMap::eval(const Vec& z) const {
    if (z.size() != base_.size()) throw PreconditionError("JetMap::eval: dimension mismatch");
    const Vec w = z - base_;
    Vec out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = comps_[static_cast<std::size_t>(i)].eval(w);
    return out;
}

JetMap JetMap::truncated(int order) const {
    PolyMap comps;
    for (const auto& c : comps_) comps.push_back(c.truncated(order));
    return JetMap(base_, std::min(order, order_), std::move(comps));
}

double JetMap::distance(const JetMap& o) const {
    if (o.dim() != dim()) throw PreconditionError("JetMap::distance: dimension mismatch");
    if ((o.base_ - base_).norm() > tolerance() * (1.0 + base_.norm()))
        throw PreconditionError("JetMap::distance: jets are anchored at different points");
    return sympjet::distance(comps_, o.comps_);
}

cplx poly_eval(const PolyScalar& f, const Vec& z) { return f.eval(z); }

Vec poly_eval(const JetMap& f, const Vec& z) { return f.eval(z); }

JetMap jet_compose(const JetMap& outer, const JetMap& inner, double tol) {
    if (outer.dim() != inner.dim()) throw PreconditionError("jet_compose: dimension mismatch");
    const Vec q = inner.image();
    const double gap = (q - outer.base()).norm();
    if (gap > tol * (1.0 + outer.base().norm()))
        throw PreconditionError("jet_compose: inner image does not match outer base",
                                {{"gap", gap}});
    const int d = inner.dim();
    const int m = std::min(outer.order(), inner.order());
    // Outer is written in u = y − q; substitute u = inner − q.
    PolyMap shifted = inner.components();
    for (int i = 0; i < d; ++i) {
        shifted[static_cast<std::size_t>(i)] = shifted[static_cast<std::size_t>(i)].truncated(m);
        shifted[static_cast<std::size_t>(i)].set_term(MultiIndex(d), 0.0);
    }
    PolyMap comps;
    comps.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) comps.push_back(substitute(outer[i].truncated(m), shifted, m));
    return JetMap(inner.base(), m, std::move(comps));
}

JetMap jet_invert(const JetMap& f, double max_condition) {
    if (f.order() < 1) throw PreconditionError("jet_invert: order must be at least 1");
    const Mat a = linear_part(f);
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > max_condition)
        throw PreconditionError("jet_invert: linear part is singular or ill-conditioned",
                                {{"condition", smin > 0.0 ? sv(0) / smin : INFINITY}});
    const Mat ainv = a.inverse();
    const int d = f.dim();
    const int m = f.order();
    const Vec q = f.image();

    JetMap g = JetMap::linear(q, ainv, m, f.base());
    const JetMap id_q = JetMap::identity(q, m);
    // Newton sweep G ← G − A⁻¹(F∘G − id): each sweep makes F∘G = id exact
    // through one more degree. A right inverse of a jet is also a left inverse.
    for (int sweep = 1; sweep < m; ++sweep) {
        const JetMap fg = jet_compose(f, g);
        PolyMap err(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) err[static_cast<std::size_t>(i)] = fg[i] - id_q[i];
        PolyMap next = g.components();
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (ainv(i, j) != cplx(0.0)) next[static_cast<std::size_t>(i)] -= err[static_cast<std::size_t>(j)] * ainv(i, j);
            }
        }
        g = JetMap(q, m, std::move(next));
    }
    return g;
}

PolyMap homogeneous_part(const JetMap& f, int r) {
    if (r < 0 || r > f.order())
        throw PreconditionError("homogeneous_part: degree " + std::to_string(r) + " exceeds truncation order " +
                                std::to_string(f.order()));
    PolyMap out;
    for (const auto& c : f.components()) out.push_back(c.homogeneous(r));
    return out;
}

Mat linear_part(const JetMap& f) {
    const int d = f.dim();
    Mat a = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a(i, j) = f[i].coeff(MultiIndex::unit(d, j));
    }
    return a;
}

double identity_defect(const JetMap& f, int below) {
    const int d = f.dim();
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        PolyScalar diff = f[i];
        diff.add_term(MultiIndex(d), -f.base()(i));
        diff.add_term(MultiIndex::unit(d, i), -1.0);
        for (const auto& [m, c] : diff.terms()) {
            if (m.degree() >= below) break;
            worst = std::max(worst, std::abs(c));
        }
    }
    return worst;
}

}  // namespace sympjet
