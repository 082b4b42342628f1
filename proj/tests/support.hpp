#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sympjet/interpolation.hpp"
#include "sympjet/sp_factor.hpp"
#include "sympjet/symplectic.hpp"
#include "sympjet/tame_sets.hpp"

namespace sympjet::testing {

using Rng = std::mt19937_64;

inline cplx random_cplx(Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    return scale * cplx(re, g(rng));
}

inline Vec random_vec(Rng& rng, int dim, double scale = 1.0) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = random_cplx(rng, scale);
    return v;
}

inline Vec random_ball_point(Rng& rng, int dim, double radius) {
    Vec v = random_vec(rng, dim);
    return radius * v / std::max(1.0, v.norm());
}

inline UniPoly random_unipoly(Rng& rng, int degree, double scale, bool vanish_at_zero = false) {
    std::vector<cplx> c(static_cast<std::size_t>(degree + 1));
    for (int i = 0; i <= degree; ++i) c[static_cast<std::size_t>(i)] = random_cplx(rng, scale);
    if (vanish_at_zero) c[0] = 0.0;
    return UniPoly::from_coefficients(std::move(c));
}

inline PolyScalar random_poly(Rng& rng, int nvars, int min_degree, int max_degree, double scale) {
    PolyScalar p(nvars);
    for (int d = min_degree; d <= max_degree; ++d)
        for (const auto& m : monomials_of_degree(nvars, d)) p.add_term(m, random_cplx(rng, scale));
    return p;
}

inline Shear random_shear(Rng& rng, int n, int degree, double scale) {
    return Shear{random_vec(rng, 2 * n) / std::sqrt(2.0 * n), random_unipoly(rng, degree, scale), 1};
}

inline GradShear random_gradshear(Rng& rng, int n, int degree, double scale) {
    const GradSide side = (rng() % 2 == 0) ? GradSide::first : GradSide::second;
    return GradShear{side, random_poly(rng, n, 2, degree, scale)};
}

/// Random symplectic word of `count` shears whose jets at p serve as targets.
inline Word random_shear_word(Rng& rng, int n, int count, int degree, double scale) {
    Word w;
    for (int i = 0; i < count; ++i) w.factors.emplace_back(random_shear(rng, n, degree, scale));
    return w;
}

inline std::vector<Vec> cluster(Rng& rng, const Vec& centre, double radius, int count) {
    std::vector<Vec> out;
    for (int i = 0; i < count; ++i) out.push_back(centre + random_ball_point(rng, static_cast<int>(centre.size()), radius));
    return out;
}

/// Job whose target jet is the truncation of a known random shear word at p.
inline InterpolationJob oracle_job(int n, int k, std::uint64_t seed) {
    Rng rng(seed);
    const int d = 2 * n;
    const Vec delta = delta_vector(d);
    InterpolationJob job;
    // Redraw until the target is desk-scale (moderate image and coefficients).
    for (;;) {
        const Word w = random_shear_word(rng, n, 3, 3, 0.3);
        const Vec p = random_vec(rng, d, 0.5);
        job.jet = word_jet(w, p, k);
        if (job.jet.image().norm() <= 3.0 && max_abs_coeff(job.jet.components()) <= 8.0) break;
    }
    job.flats.push_back({random_vec(rng, d, 0.5) + 2.0 * random_vec(rng, d, 0.5), 3});
    job.flats.push_back({random_vec(rng, d, 0.5) - 2.0 * random_vec(rng, d, 0.5), 3});
    for (int i : {4, 5, 6}) job.fixpoints.push_back(static_cast<double>(i) * delta);
    const Vec centre = 3.0 * random_vec(rng, d, 1.0) / std::sqrt(static_cast<double>(d)) + 3.0 * delta;
    job.region = cluster(rng, centre, 0.3, 8);
    job.eps = 1e-3;
    job.seed = seed;
    return job;
}

/// Jet at αΔ with image αΔ: a random shear word's jet with its constant term reset,
/// redrawn until desk scale.
inline JetMap anchored_jet(Rng& rng, int n, int alpha, int order) {
    const Vec at = static_cast<double>(alpha) * delta_vector(2 * n);
    for (;;) {
        const Word w = random_shear_word(rng, n, 2, 2, 0.2);
        PolyMap comps = word_jet(w, at, order).components();
        for (int i = 0; i < 2 * n; ++i) comps[static_cast<std::size_t>(i)].set_term(MultiIndex(2 * n), at(i));
        JetMap jet(at, order, comps);
        if (max_abs_coeff(jet.components()) <= 8.0) return jet;
    }
}

/// ElemFactor with i ≤ j (0-based) and a random coefficient.
inline ElemFactor random_elem(Rng& rng, int n, double scale) {
    int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (i > j) std::swap(i, j);
    return ElemFactor{(rng() % 2 == 0) ? Side::upper : Side::lower, i, j, random_cplx(rng, scale)};
}

}  // namespace sympjet::testing
