#include "sympjet/sp_factor.hpp"

#include <cmath>
#include <random>

namespace sympjet {

namespace {

void check_indices(int n, int i, int j) {
    if (n < 1 || i < 0 || j < 0 || i >= n || j >= n || i > j)
        throw PreconditionError("elementary factor indices out of range",
                                {{"n", n}, {"i", i + 1}, {"j", j + 1}});
}

}  // namespace

Mat sym_basis(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    check_indices(n, i, j);
    Mat e = Mat::Zero(n, n);
    if (i == j) {
        e(i, i) = 1.0;
    } else {
        e(i, j) = e(j, i) = e(i, i) = e(j, j) = 1.0;
    }
    return e;
}

SympMatrix elem_matrix(int n, const ElemFactor& f) {
    Mat m = Mat::Identity(2 * n, 2 * n);
    const Mat b = f.alpha * sym_basis(n, f.i, f.j);
    if (f.side == Side::upper)
        m.topRightCorner(n, n) = b;
    else
        m.bottomLeftCorner(n, n) = b;
    return SympMatrix(std::move(m));
}

Mat transvection_matrix(const Transvection& t) {
    const auto d = t.v.size();
    const Eigen::Index n = d / 2;
    Vec jv(d);
    for (Eigen::Index i = 0; i < n; ++i) {
        jv(i) = t.v(n + i);
        jv(n + i) = -t.v(i);
    }
    Mat m = Mat::Identity(d, d);
    m += t.alpha * t.v * jv.transpose();
    return m;
}

Mat factor_matrix(int n, const Factor& f) {
    if (const auto* e = std::get_if<ElemFactor>(&f)) return elem_matrix(n, *e).matrix();
    const auto& t = std::get<Transvection>(f);
    if (t.v.size() != 2 * n) throw PreconditionError("transvection dimension mismatch");
    return transvection_matrix(t);
}

Mat product(const FactorWord& w) {
    Mat acc = Mat::Identity(2 * w.n, 2 * w.n);
    for (const auto& f : w.factors) acc = acc * factor_matrix(w.n, f);
    return acc;
}

std::vector<ElemFactor> split_symmetric_block(Side side, const Mat& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) throw PreconditionError("split_symmetric_block: expected a square block");
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol * std::max(1.0, a.cwiseAbs().maxCoeff()))
        throw PreconditionError("split_symmetric_block: block is not symmetric", {{"asymmetry", asym}});
    const int n = static_cast<int>(a.rows());
    std::vector<ElemFactor> out;
    for (int i = 0; i < n; ++i) {
        cplx diag = a(i, i);
        for (int j = 0; j < n; ++j) {
            if (j != i) diag -= a(i, j);
        }
        if (diag != cplx(0.0)) out.push_back({side, i, i, diag});
        for (int j = i + 1; j < n; ++j) {
            if (a(i, j) != cplx(0.0)) out.push_back({side, i, j, a(i, j)});
        }
    }
    return out;
}

namespace {

cplx omega(const Vec& x, const Vec& y) { return lambda(y, x); }  // xᵀJy

struct Builder {
    int n;
    Mat m;                       // current τ_s⋯τ_1 M
    std::vector<Transvection> taus;
    int cap;
    const FactorOptions& opts;
    std::mt19937_64 rng;

    void emit(const Vec& v, cplx alpha) {
        if (static_cast<int>(taus.size()) >= cap)
            throw NumericError("factor_sp: factor cap exceeded", {{"cap", cap}, {"n", n}});
        Transvection t{v, alpha};
        m = transvection_matrix(t) * m;
        taus.push_back(std::move(t));
    }

    bool admissible(const Vec& v) const { return !opts.admissible || opts.admissible(v); }

    // Quality of the single transvection mapping u to w.
    double score(const Vec& u, const Vec& w) const {
        const Vec v = w - u;
        const double vn = v.norm();
        if (vn == 0.0) return INFINITY;
        if (!admissible(v)) return 0.0;
        return std::abs(omega(u, w)) / (std::max(1.0, u.norm()) * vn);
    }

    void map_direct(const Vec& u, const Vec& w) {
        const Vec v = w - u;
        if (v.norm() == 0.0) return;
        emit(v, 1.0 / omega(u, w));
    }

    // u ↦ w with every transvection in the symplectic complement of the
    // already fixed pairs (first `fixed` of them). `pin` forces y_{n+pin} = 1
    // when the partner e_pin must stay fixed.
    void map(const Vec& u, const Vec& w, int fixed, int pin) {
        const double tol = 1e-12 * std::max(1.0, u.norm());
        if ((w - u).norm() <= tol) return;
        const double direct = score(u, w);
        if (direct >= 1e-2 && std::isfinite(direct)) {
            map_direct(u, w);
            return;
        }
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec best;
        double best_score = direct;
        for (int c = 0; c < opts.witness_candidates; ++c) {
            Vec y = Vec::Zero(2 * n);
            for (int k = fixed; k < n; ++k) {
                y(k) = cplx(gauss(rng), gauss(rng));
                y(n + k) = cplx(gauss(rng), gauss(rng));
            }
            if (pin >= 0) y(n + pin) = 1.0;
            const double s = std::min(score(u, y), score(y, w));
            if (s > best_score) {
                best_score = s;
                best = y;
            }
        }
        if (best.size() == 0) {
            if (direct > 0.0 && std::abs(omega(u, w)) > 0.0) {
                map_direct(u, w);
                return;
            }
            throw NumericError("factor_sp: no usable witness found", {{"candidates", opts.witness_candidates}});
        }
        map_direct(u, best);
        map_direct(best, w);
    }
};

}  // namespace

FactorWord factor_sp(const SympMatrix& msym, std::uint64_t seed, const FactorOptions& opts) {
    const int n = msym.n();
    Builder b{n, msym.matrix(), {}, opts.max_factors > 0 ? opts.max_factors : 8 * n, opts, std::mt19937_64(seed)};
    const double scale = std::max(1.0, msym.matrix().cwiseAbs().maxCoeff());

    for (int i = 0; i < n; ++i) {
        const Vec ei = Vec::Unit(2 * n, i);
        b.map(b.m.col(i), ei, i, -1);
        // Now M′e_i = e_i; transvections mapping M′e_{n+i} to e_{n+i} keep it.
        const Vec fi = Vec::Unit(2 * n, n + i);
        b.map(b.m.col(n + i), fi, i, i);
    }
    const double res = (b.m - Mat::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();
    if (res > 1e-8 * scale * scale)
        throw NumericError("factor_sp: elimination did not reach the identity", {{"residual", res}});

    // τ_s⋯τ_1 M = I, so M = τ_1⁻¹ τ_2⁻¹ ⋯ τ_s⁻¹.
    FactorWord out;
    out.n = n;
    for (const auto& t : b.taus) out.factors.emplace_back(Transvection{t.v, -t.alpha});
    return out;
}

Vec elem_direction(int n, const ElemFactor& f) {
    check_indices(n, f.i, f.j);
    Vec v = Vec::Zero(2 * n);
    if (f.side == Side::upper) {
        v(f.i) = -1.0;
        if (f.j != f.i) v(f.j) = -1.0;
    } else {
        v(n + f.i) = 1.0;
        if (f.j != f.i) v(n + f.j) = 1.0;
    }
    return v;
}

Shear shear_of_factor(int n, const Factor& f) {
    if (const auto* e = std::get_if<ElemFactor>(&f)) {
        const cplx a = e->side == Side::upper ? -e->alpha : e->alpha;
        return Shear{elem_direction(n, *e), UniPoly::from_coefficients({0.0, a}), 1};
    }
    const auto& t = std::get<Transvection>(f);
    return Shear{t.v, UniPoly::from_coefficients({0.0, t.alpha}), 1};
}

}  // namespace sympjet
