#include "sympjet/shear.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sympjet/symplectic.hpp"

namespace sympjet {

Word compose(const Word& outer, const Word& inner) {
    Word out = outer;
    out.factors.insert(out.factors.end(), inner.factors.begin(), inner.factors.end());
    return out;
}

cplx ipow(cplx z, int r) {
    cplx acc = 1.0;
    for (int i = 0; i < r; ++i) acc *= z;
    return acc;
}

cplx shear_argument(const Shear& s, const Vec& z) { return ipow(lambda(s.v, z), s.power); }

namespace {

void check_dim(const Vec& z, Eigen::Index d) {
    if (z.size() != d) throw PreconditionError("dimension mismatch: expected " + std::to_string(d));
}

int grad_n(const GradShear& g) { return g.potential.nvars(); }

Vec block(const Vec& z, int start, int n) { return z.segment(start, n); }

// Gradient and Hessian of a potential in n variables.
Vec gradient_at(const PolyScalar& f, const Vec& w) {
    const int n = f.nvars();
    Vec g(n);
    for (int i = 0; i < n; ++i) g(i) = f.derivative(i).eval(w);
    return g;
}

Mat hessian_at(const PolyScalar& f, const Vec& w) {
    const int n = f.nvars();
    Mat h(n, n);
    for (int i = 0; i < n; ++i) {
        const PolyScalar di = f.derivative(i);
        for (int j = 0; j < n; ++j) h(i, j) = di.derivative(j).eval(w);
    }
    return h;
}

struct ShearVisitor {
    const Vec& z;

    Vec operator()(const Shear& s) const {
        check_dim(z, s.v.size());
        return z + s.f.eval(shear_argument(s, z)) * s.v;
    }
    Vec operator()(const GradShear& g) const {
        const int n = grad_n(g);
        check_dim(z, 2 * n);
        Vec out = z;
        if (g.side == GradSide::first)
            out.head(n) += gradient_at(g.potential, block(z, n, n));
        else
            out.tail(n) += gradient_at(g.potential, block(z, 0, n));
        return out;
    }
};

}  // namespace

Vec shear_apply(const WordFactor& f, const Vec& z) { return std::visit(ShearVisitor{z}, f); }

Vec word_apply(const Word& w, const Vec& z) {
    Vec out = z;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) out = shear_apply(*it, out);
    return out;
}

WordFactor factor_inverse(const WordFactor& f) {
    if (const auto* s = std::get_if<Shear>(&f)) return Shear{s->v, s->f.negated(), s->power};
    const auto& g = std::get<GradShear>(f);
    return GradShear{g.side, -g.potential};
}

Word word_inverse(const Word& w) {
    Word out;
    out.factors.reserve(w.size());
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) out.factors.push_back(factor_inverse(*it));
    return out;
}

Mat factor_jacobian(const WordFactor& f, const Vec& z) {
    if (const auto* s = std::get_if<Shear>(&f)) {
        check_dim(z, s->v.size());
        const int d = static_cast<int>(z.size());
        const int n = d / 2;
        const cplx l = lambda(s->v, z);
        const auto [val, df] = s->f.eval_with_derivative(ipow(l, s->power));
        (void)val;
        const cplx chain = df * static_cast<double>(s->power) * ipow(l, s->power - 1);
        // ∇λ_v = Jv: (Jv)_i = v_{n+i}, (Jv)_{n+i} = −v_i.
        Vec jv(d);
        for (int i = 0; i < n; ++i) {
            jv(i) = s->v(n + i);
            jv(n + i) = -s->v(i);
        }
        Mat out = Mat::Identity(d, d);
        out += chain * s->v * jv.transpose();
        return out;
    }
    const auto& g = std::get<GradShear>(f);
    const int n = grad_n(g);
    check_dim(z, 2 * n);
    Mat out = Mat::Identity(2 * n, 2 * n);
    if (g.side == GradSide::first)
        out.topRightCorner(n, n) = hessian_at(g.potential, block(z, n, n));
    else
        out.bottomLeftCorner(n, n) = hessian_at(g.potential, block(z, 0, n));
    return out;
}

Mat word_jacobian(const Word& w, const Vec& z) {
    Mat acc = Mat::Identity(z.size(), z.size());
    Vec p = z;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
        acc = factor_jacobian(*it, p) * acc;
        p = shear_apply(*it, p);
    }
    return acc;
}

namespace {

JetMap shear_after(const Shear& s, const JetMap& inner) {
    const int d = inner.dim();
    if (s.v.size() != d) throw PreconditionError("apply_factor: dimension mismatch");
    const int n = d / 2;
    const int m = inner.order();

    // ℓ = λ_v ∘ inner without its constant; the constant is recomputed through
    // lambda() so that it agrees with pointwise evaluation exactly.
    PolyScalar ell(d);
    for (int i = 0; i < n; ++i) {
        if (s.v(n + i) != cplx(0.0)) ell += inner[i] * s.v(n + i);
        if (s.v(i) != cplx(0.0)) ell -= inner[n + i] * s.v(i);
    }
    const cplx l0 = lambda(s.v, inner.image());
    ell.set_term(MultiIndex(d), 0.0);

    // t = (l0 + ℓ)^power − l0^power, truncated.
    PolyScalar t(d);
    if (s.power == 1) {
        t = ell;
    } else {
        PolyScalar full = ell;
        full.add_term(MultiIndex(d), l0);
        PolyScalar acc = full;
        for (int k = 1; k < s.power; ++k) acc = acc.mul(full, m);
        acc.set_term(MultiIndex(d), 0.0);
        t = acc;
    }
    const cplx t0 = ipow(l0, s.power);

    const std::vector<cplx> coeffs = s.f.taylor(t0, m);
    // g = Σ_k coeffs[k] t^k by Horner; t has no constant term.
    PolyScalar g = PolyScalar::constant(d, coeffs[static_cast<std::size_t>(m)]);
    for (int k = m - 1; k >= 0; --k) {
        g = g.mul(t, m);
        g.add_term(MultiIndex(d), coeffs[static_cast<std::size_t>(k)]);
    }
    // The value term must agree with pointwise evaluation exactly.
    g.set_term(MultiIndex(d), s.f.eval(t0));

    PolyMap comps = inner.components();
    for (int i = 0; i < d; ++i) {
        if (s.v(i) != cplx(0.0)) comps[static_cast<std::size_t>(i)] += g * s.v(i);
    }
    return JetMap(inner.base(), m, std::move(comps));
}

JetMap grad_after(const GradShear& gs, const JetMap& inner) {
    const int n = grad_n(gs);
    const int d = inner.dim();
    if (d != 2 * n) throw PreconditionError("apply_factor: dimension mismatch");
    const int m = inner.order();
    const int src = gs.side == GradSide::first ? n : 0;
    const int dst = gs.side == GradSide::first ? 0 : n;
    std::vector<PolyScalar> args(inner.components().begin() + src, inner.components().begin() + src + n);
    PolyMap comps = inner.components();
    for (int i = 0; i < n; ++i) {
        const PolyScalar di = gs.potential.derivative(i);
        if (di.empty()) continue;
        comps[static_cast<std::size_t>(dst + i)] += substitute(di, args, m);
    }
    return JetMap(inner.base(), m, std::move(comps));
}

}  // namespace

JetMap apply_factor(const WordFactor& f, const JetMap& inner) {
    if (const auto* s = std::get_if<Shear>(&f)) return shear_after(*s, inner);
    return grad_after(std::get<GradShear>(f), inner);
}

JetMap word_after(const Word& w, const JetMap& inner) {
    JetMap out = inner;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) out = apply_factor(*it, out);
    return out;
}

JetMap word_jet(const Word& w, const Vec& p, int m) {
    if (m < 0) throw PreconditionError("word_jet: negative order");
    return word_after(w, JetMap::identity(p, m));
}

namespace {

int word_dim(const Word& w, const VerifyRequest& req) {
    for (const auto& f : w.factors) {
        if (const auto* s = std::get_if<Shear>(&f)) return static_cast<int>(s->v.size());
        return 2 * std::get<GradShear>(f).potential.nvars();
    }
    if (!req.targets.empty()) return req.targets.front().dim();
    if (!req.fixpoints.empty()) return static_cast<int>(req.fixpoints.front().size());
    if (!req.flats.empty()) return static_cast<int>(req.flats.front().point.size());
    if (!req.region.empty()) return static_cast<int>(req.region.front().size());
    return 0;
}

}  // namespace

VerifyReport word_verify(const Word& w, const VerifyRequest& req) {
    VerifyReport rep;
    const int d = word_dim(w, req);

    std::vector<Vec> samples = req.samples;
    if (samples.empty() && d > 0) {
        std::mt19937_64 rng(req.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int s = 0; s < req.sample_count; ++s) {
            Vec z(d);
            for (int i = 0; i < d; ++i) z(i) = cplx(gauss(rng), gauss(rng));
            samples.push_back(req.sample_radius * z / std::max(1.0, z.norm()));
        }
    }
    if (d > 0) {
        const Mat j = symplectic_form(d / 2);
        for (const auto& z : samples) {
            const Mat g = word_jacobian(w, z);
            const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
            rep.symplectic_residual =
                std::max(rep.symplectic_residual, (g.transpose() * j * g - j).cwiseAbs().maxCoeff() / (scale * scale));
            if (req.defect_order >= 1) {
                const JetMap jet = word_jet(w, z, req.defect_order);
                const TwoFormPoly defect = pullback_defect(jet);
                const double jscale = std::max(1.0, max_abs_coeff(jet.components()));
                rep.defect_max = std::max(rep.defect_max, defect.max_abs_coeff() / (jscale * jscale));
            }
        }
    }
    rep.symplectic_ok = rep.symplectic_residual < req.symplectic_tol && rep.defect_max < req.symplectic_tol;

    for (const auto& t : req.targets) {
        const double err = word_jet(w, t.base(), t.order()).distance(t);
        rep.jet_errors.push_back(err);
        if (!(err < req.jet_tol)) rep.jets_ok = false;
    }
    for (const auto& fp : req.flats) {
        const double err = fp.order <= 0 ? 0.0 : identity_defect(word_jet(w, fp.point, fp.order - 1), fp.order);
        rep.flat_errors.push_back(err);
        if (!(err < req.flat_tol)) rep.flats_ok = false;
    }
    for (const auto& c : req.fixpoints) {
        const double err = (word_apply(w, c) - c).norm();
        rep.fixpoint_errors.push_back(err);
        if (!(err < req.fixpoint_tol)) rep.fixpoints_ok = false;
    }
    for (const auto& z : req.region) rep.region_sup = std::max(rep.region_sup, (word_apply(w, z) - z).norm());
    rep.region_ok = req.region.empty() || rep.region_sup <= req.eps;
    return rep;
}

}  // namespace sympjet
