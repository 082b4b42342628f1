#include "sympjet/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "sympjet/json_io.hpp"
#include "sympjet/symplectic.hpp"

namespace sympjet {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    // splitmix64 finaliser over the combined words
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Margin ratio δ/R demanded of region images; relaxed on later attempts.
double margin_ratio(int attempt) {
    static const double schedule[] = {0.5, 0.4, 0.3, 0.3, 0.2, 0.2, 0.1, 0.05};
    return schedule[std::min(attempt, 7)];
}

constexpr int kMaxAttempts = 12;

std::vector<Vec> constraint_points(const StageConstraints& c) {
    std::vector<Vec> pts;
    for (const auto& f : c.flats) pts.push_back(f.point);
    for (const auto& x : c.fixpoints) pts.push_back(x);
    return pts;
}

std::vector<cplx> region_images(const Vec& v, int r, const std::vector<Vec>& region) {
    std::vector<cplx> out;
    out.reserve(region.size());
    for (const auto& z : region) out.push_back(ipow(lambda(v, z), r));
    return out;
}

// λ_v^r separates the constraint points from each other and from 0, and
// keeps the region images in a half-plane with margin ratio ≥ `ratio`.
bool usable_direction(const Vec& v, int r, const StageConstraints& c, double ratio) {
    const double vn = v.norm();
    if (vn == 0.0) return false;
    std::vector<cplx> imgs;
    double pscale = 1.0;
    for (const auto& x : constraint_points(c)) {
        imgs.push_back(ipow(lambda(v, x), r));
        pscale = std::max(pscale, x.norm());
    }
    const double scale = std::pow(vn * pscale, r);
    for (std::size_t i = 0; i < imgs.size(); ++i) {
        if (std::abs(imgs[i]) <= 1e-6 * scale) return false;
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(imgs[i] - imgs[j]) <= 1e-6 * scale) return false;
        }
    }
    if (!c.region.empty()) {
        const auto samples = region_images(v, r, c.region);
        const auto [u, delta] = separating_direction(samples);
        double radius = 0.0;
        for (auto s : samples) radius = std::max(radius, std::abs(s));
        if (!(delta > ratio * radius)) return false;
    }
    return true;
}

std::vector<Vec> push_forward(const WordFactor& f, std::vector<Vec> pts) {
    for (auto& z : pts) z = shear_apply(f, z);
    return pts;
}

// Shear z + g(λ_v(z)^r)·v with g = β ζ (1 + …), flat and vanishing at the
// λ^r-images of the constraints and below eps on the region.
Shear constrained_shear(const Vec& dir, int r, cplx beta, const StageConstraints& c, double eps, int jet_order) {
    // β λ_v^r v = β |v|^{r+1} λ_u^r u with u = v / |v|
    const double vn = dir.norm();
    const Vec v = dir / vn;
    beta *= std::pow(vn, r + 1);
    std::vector<Flat> flats;
    for (const auto& f : c.flats) flats.push_back({ipow(lambda(v, f.point), r), f.order});
    std::vector<cplx> zeros;
    for (const auto& x : c.fixpoints) zeros.push_back(ipow(lambda(v, x), r));
    std::optional<CompactRegion> region;
    if (!c.region.empty()) region = CompactRegion::from_samples(region_images(v, r, c.region));
    MagicOptions opts;
    opts.exact_order = jet_order / r;
    return Shear{v, magic_function(1, beta, flats, zeros, region, eps, opts), r};
}

double jet_scale(const JetMap& j) { return std::max(1.0, max_abs_coeff(j.components())); }

}  // namespace

StageBudget stage_budget(double eps, int k, int flat_order) {
    StageBudget b;
    b.stages = k + 1;
    b.per_stage_eps = eps / (k + 1);
    b.flat_order = flat_order;
    return b;
}

LambdaImageReport lambda_image_check(const std::vector<Vec>& points, const Vec& v, double tol) {
    LambdaImageReport rep;
    double scale = 1.0;
    for (const auto& x : points) {
        rep.images.push_back(lambda(v, x));
        scale = std::max(scale, std::abs(rep.images.back()));
    }
    for (std::size_t i = 0; i < rep.images.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) rep.min_gap = std::min(rep.min_gap, std::abs(rep.images[i] - rep.images[j]));
    }
    rep.injective = rep.images.size() < 2 || rep.min_gap > tol * scale;
    return rep;
}

Word tame_normalizer(const std::vector<Vec>& targets, const std::vector<int>& orders) {
    if (targets.empty()) return {};
    if (targets.size() != orders.size()) throw PreconditionError("tame_normalizer: targets and orders differ in length");
    const int d = static_cast<int>(targets.front().size());
    if (d == 0 || d % 2 != 0) throw PreconditionError("tame_normalizer: odd or empty dimension");
    const Vec delta = delta_vector(d);
    const Vec dtilde = symplectic_form(d / 2) * delta;

    std::vector<cplx> gamma;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (targets[j].size() != d) throw PreconditionError("tame_normalizer: dimension mismatch");
        if (orders[j] < 0) throw PreconditionError("tame_normalizer: negative order");
        const cplx g = targets[j].sum() / static_cast<double>(d);
        if ((targets[j] - g * delta).norm() > tolerance() * (1.0 + std::abs(g)))
            throw PreconditionError("tame_normalizer: target is not on span{Delta}", {{"index", j + 1}});
        gamma.push_back(g);
    }

    std::vector<Vec> pts;
    for (std::size_t j = 0; j < targets.size(); ++j) pts.push_back(static_cast<double>(j + 1) * delta);

    auto stage = [&](const char* name, const Vec& v, auto value) {
        const auto check = lambda_image_check(pts, v);
        if (!check.injective)
            throw PreconditionError("tame_normalizer: lambda images collide", {{"stage", name}, {"min_gap", check.min_gap}});
        std::vector<OsculationConstraint> cons;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            std::vector<cplx> jet(static_cast<std::size_t>(orders[j] + 1), cplx(0.0));
            jet[0] = value(j);
            cons.push_back({check.images[j], std::move(jet)});
        }
        Shear s{v, hermite_osculate(cons), 1};
        pts = push_forward(s, pts);
        return s;
    };

    // jΔ → jΔ + jJΔ → γ_jΔ + jJΔ → γ_jΔ
    const Shear s1 = stage("psi1", dtilde, [](std::size_t j) { return cplx(static_cast<double>(j + 1)); });
    const Shear s2 = stage("psi2", delta, [&](std::size_t j) { return gamma[j] - static_cast<double>(j + 1); });
    const Shear s3 = stage("psi3", dtilde, [](std::size_t j) { return cplx(-static_cast<double>(j + 1)); });
    return Word{{s3, s2, s1}};
}

namespace {

std::optional<Shear> direct_mover(const Vec& p, const Vec& q, const StageConstraints& c, double eps, int jet_order) {
    const Vec v = q - p;
    const double vn = v.norm();
    const int d = static_cast<int>(p.size());
    const Vec delta = delta_vector(d);
    if (std::abs(lambda(v, delta)) <= 1e-8 * vn * delta.norm()) return std::nullopt;

    const cplx zp = lambda(v, p);
    double scale = std::max(1.0, std::abs(zp));
    for (const auto& x : constraint_points(c)) scale = std::max(scale, std::abs(lambda(v, x)));
    const double sep = 1e-8 * scale;

    std::vector<cplx> nodes;
    std::vector<cplx> weights;
    if (std::abs(zp) > sep) {
        nodes.push_back(0.0);
        weights.push_back(1.0 / zp);
    }
    std::vector<cplx> flat_imgs;
    for (const auto& f : c.flats) {
        const cplx a = lambda(v, f.point);
        if (std::abs(a - zp) <= sep) return std::nullopt;
        flat_imgs.push_back(a);
        for (int i = 0; i < f.order; ++i) {
            nodes.push_back(a);
            weights.push_back(1.0 / (zp - a));
        }
    }
    for (const auto& x : c.fixpoints) {
        const cplx z = lambda(v, x);
        if (std::abs(z - zp) <= sep) return std::nullopt;
        if (std::find(flat_imgs.begin(), flat_imgs.end(), z) != flat_imgs.end()) continue;
        if (std::find(nodes.begin(), nodes.end(), z) != nodes.end() && z != cplx(0.0)) continue;
        nodes.push_back(z);
        weights.push_back(1.0 / (zp - z));
    }
    // f ≡ 1 to order jet_order at λ(p): the mover is a translation there.
    const UniPoly rest = UniPoly::product(1.0, std::move(nodes), std::move(weights));
    std::vector<cplx> jet(static_cast<std::size_t>(jet_order + 1), cplx(0.0));
    jet[0] = 1.0;
    try {
        std::optional<CompactRegion> k;
        if (!c.region.empty()) k = CompactRegion::from_samples(region_images(v, 1, c.region));
        return Shear{v, attenuate_with_jet(rest, k, zp, eps / vn, jet), 1};
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Bound on the rounding amplification when the order ≤ m Taylor coefficients
// of f are evaluated at s: the Taylor recursion run on absolute values.
double taylor_condition(const UniPoly& f, cplx s, int m) {
    const auto& nodes = f.nodes();
    const auto& weights = f.weights();
    const auto& coeffs = f.newton_coeffs();
    std::vector<double> acc(static_cast<std::size_t>(m + 1), 0.0);
    if (coeffs.empty()) return 0.0;
    acc[0] = std::abs(coeffs.back());
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const double w = std::abs(weights[i]);
        const double shift = std::abs(s - nodes[i]);
        for (int k = m; k >= 1; --k)
            acc[static_cast<std::size_t>(k)] = w * (shift * acc[static_cast<std::size_t>(k)] + acc[static_cast<std::size_t>(k - 1)]);
        acc[0] = w * shift * acc[0] + std::abs(coeffs[i]);
    }
    return *std::max_element(acc.begin(), acc.end());
}

double mover_condition(const Shear& s, const Vec& p, int jet_order) {
    return s.v.norm() * taylor_condition(s.f, lambda(s.v, p), std::max(1, jet_order));
}

// Direct movers above this condition are replaced by a better two-stage one when possible.
constexpr double kMoverCondition = 1e4;
constexpr int kMoverAttempts = 64;
constexpr int kMoverCandidates = 8;

void check_mover_constraints(const Vec& p, const Vec& q, const StageConstraints& c) {
    const double tol = tolerance() * (1.0 + std::max(p.norm(), q.norm()));
    for (const auto& x : constraint_points(c)) {
        if ((x - p).norm() <= tol || (x - q).norm() <= tol)
            throw PreconditionError("point_mover: constraint point coincides with p or q");
    }
}

}  // namespace

MoverResult point_mover(const Vec& p, const Vec& q, const StageConstraints& c, double eps, std::uint64_t seed,
                        int jet_order) {
    if (p.size() != q.size() || p.size() % 2 != 0) throw PreconditionError("point_mover: dimension mismatch");
    if ((q - p).norm() == 0.0) throw PreconditionError("point_mover: p = q");
    if (!(eps > 0.0)) throw PreconditionError("point_mover: eps must be positive");
    check_mover_constraints(p, q, c);

    MoverResult out;
    double best = std::numeric_limits<double>::infinity();
    if (auto s = direct_mover(p, q, c, eps, jet_order)) {
        best = mover_condition(*s, p, jet_order);
        out.word.factors.push_back(*s);
        if (best <= kMoverCondition) return out;
    }

    const int d = static_cast<int>(p.size());
    const double scale = std::max(1.0, (q - p).norm());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int found = 0;
    for (int attempt = 0; attempt < kMoverAttempts && found < kMoverCandidates; ++attempt) {
        Vec r = 0.5 * (p + q);
        for (int i = 0; i < d; ++i) r(i) += scale * cplx(gauss(rng), gauss(rng));
        bool clash = false;
        for (const auto& x : constraint_points(c)) clash = clash || (x - r).norm() < 1e-6 * scale;
        if (clash) continue;
        auto s1 = direct_mover(p, r, c, eps / 2, jet_order);
        if (!s1) continue;
        StageConstraints c2 = c;
        c2.region = push_forward(*s1, c.region);
        const Vec r_img = shear_apply(*s1, p);
        auto s2 = direct_mover(r_img, q, c2, eps / 2, jet_order);
        if (!s2) continue;
        ++found;
        const double cond = std::max(mover_condition(*s1, p, jet_order), mover_condition(*s2, r_img, jet_order));
        if (cond < best) {
            best = cond;
            out.word.factors = {*s2, *s1};
            out.two_stage = true;
            out.intermediate = r;
        }
    }
    if (!out.word.factors.empty()) return out;
    throw PreconditionError("point_mover: no valid intermediate point found", {{"attempts", 64}});
}

StageResult linear_stage(const SympMatrix& q, const StageConstraints& c, double eps, std::uint64_t seed,
                         int jet_order) {
    const int n = q.n();
    StageResult out;
    out.region = c.region;
    if ((q.matrix() - Mat::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() == 0.0) return out;

    nlohmann::json failures = nlohmann::json::array();
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double ratio = margin_ratio(attempt);
        try {
            FactorOptions opts;
            opts.admissible = [&](const Vec& v) { return usable_direction(v, 1, c, ratio); };
            const FactorWord fw = factor_sp(q, mix(seed, 1, attempt), opts);
            const auto count = static_cast<double>(fw.factors.size());
            StageConstraints cur = c;
            std::vector<WordFactor> applied;
            for (auto it = fw.factors.rbegin(); it != fw.factors.rend(); ++it) {
                const auto& t = std::get<Transvection>(*it);
                Shear s = constrained_shear(t.v, 1, t.alpha, cur, eps / count, jet_order);
                cur.region = push_forward(s, cur.region);
                applied.emplace_back(std::move(s));
            }
            Word w;
            w.factors.assign(applied.rbegin(), applied.rend());
            const JetMap wj = word_jet(w, Vec::Zero(2 * n), std::max(1, jet_order));
            const Mat lin = linear_part(wj);
            const double res = (lin - q.matrix()).cwiseAbs().maxCoeff();
            const double scale = std::max(1.0, q.matrix().cwiseAbs().maxCoeff());
            if (res > 1e-8 * scale) throw NumericError("linear_stage: linear part mismatch", {{"residual", res}});
            double higher = 0.0;
            for (int r = 2; r <= jet_order; ++r) higher = std::max(higher, max_abs_coeff(homogeneous_part(wj, r)));
            if (higher > 1e-8 * std::pow(scale, jet_order))
                throw NumericError("linear_stage: word is not linear to the jet order", {{"higher", higher}});
            out.word = std::move(w);
            out.region = std::move(cur.region);
            out.attempts = attempt + 1;
            return out;
        } catch (const Error& e) {
            failures.push_back({{"error", e.what()}, {"diagnostic", e.diagnostic()}});
        }
    }
    throw NumericError("linear_stage: no admissible factorization", {{"failures", failures}});
}

StageResult higher_stage(const JetMap& residual, int r, const StageConstraints& c, double eps, std::uint64_t seed) {
    if (r < 2 || r > residual.order())
        throw PreconditionError("higher_stage: degree out of range", {{"r", r}, {"order", residual.order()}});
    const int d = residual.dim();
    const double scale = jet_scale(residual);
    if (residual.base().norm() != 0.0 || residual.image().norm() > 1e-9 * scale)
        throw PreconditionError("higher_stage: residual must fix the origin");
    const double below = identity_defect(residual, r);
    if (below > 1e-7 * scale)
        throw PreconditionError("higher_stage: residual is not the identity below degree r",
                                {{"r", r}, {"defect", below}});
    if (!is_symplectic_to_order(residual, r, 1e-7))
        throw PreconditionError("higher_stage: residual is not symplectic of order r", {{"r", r}});

    StageResult out;
    out.region = c.region;
    const PolyMap pr = homogeneous_part(residual, r);
    const double pscale = max_abs_coeff(pr);
    if (pscale <= 1e-14 * scale) return out;

    nlohmann::json failures = nlohmann::json::array();
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double ratio = margin_ratio(attempt);
        try {
            const auto dec = hamiltonian_decompose(
                pr, r, mix(seed, static_cast<std::uint64_t>(r), attempt),
                [&](const Vec& b) { return usable_direction(b, r, c, ratio); }, 1e-7);
            std::vector<std::size_t> used;
            for (std::size_t j = 0; j < dec.coefficients.size(); ++j) {
                if (std::abs(dec.coefficients[j]) > 1e-14 * pscale) used.push_back(j);
            }
            const double count = static_cast<double>(std::max<std::size_t>(1, used.size()));
            const double sign = r % 2 == 0 ? 1.0 : -1.0;  // (bᵀJz)^r = (−1)^r λ_b(z)^r
            StageConstraints cur = c;
            std::vector<WordFactor> applied;
            for (auto j : used) {
                Shear s = constrained_shear(dec.directions[j], r, sign * dec.coefficients[j], cur, eps / count,
                                            residual.order());
                cur.region = push_forward(s, cur.region);
                applied.emplace_back(std::move(s));
            }
            Word w;
            w.factors.assign(applied.rbegin(), applied.rend());

            const JetMap wj = word_jet(w, Vec::Zero(d), r);
            const double lower = identity_defect(wj, r);
            const double top = distance(homogeneous_part(wj, r), pr);
            if (lower > 1e-9 * scale || top > 1e-8 * std::max(1.0, pscale))
                throw NumericError("higher_stage: word does not reproduce the degree-r part",
                                   {{"lower", lower}, {"top", top}});
            out.word = std::move(w);
            out.region = std::move(cur.region);
            out.attempts = attempt + 1;
            return out;
        } catch (const Error& e) {
            failures.push_back({{"error", e.what()}, {"diagnostic", e.diagnostic()}});
        }
    }
    throw NumericError("higher_stage: no admissible decomposition", {{"r", r}, {"failures", failures}});
}

namespace {

void validate_job(const InterpolationJob& job) {
    const JetMap& jet = job.jet;
    const int d = jet.dim();
    if (d == 0 || d % 2 != 0) throw PreconditionError("interpolation job: odd or empty dimension");
    if (!(job.eps > 0.0)) throw PreconditionError("interpolation job: eps must be positive");
    const Vec p = jet.base();
    const Vec q = jet.image();
    const double tol = tolerance() * (1.0 + std::max(p.norm(), q.norm()));
    std::vector<Vec> pts;
    for (const auto& f : job.flats) {
        if (f.point.size() != d) throw PreconditionError("interpolation job: flat point dimension mismatch");
        if (f.order < 0) throw PreconditionError("interpolation job: negative flat order");
        pts.push_back(f.point);
    }
    for (const auto& c : job.fixpoints) {
        if (c.size() != d) throw PreconditionError("interpolation job: fixpoint dimension mismatch");
        pts.push_back(c);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if ((pts[i] - p).norm() <= tol || (pts[i] - q).norm() <= tol)
            throw PreconditionError("interpolation job: constraint point coincides with p or q", {{"index", i}});
        if (pts[i].norm() <= tol) throw PreconditionError("interpolation job: constraint point at the origin");
        for (std::size_t j = 0; j < i; ++j) {
            if ((pts[i] - pts[j]).norm() <= tol)
                throw PreconditionError("interpolation job: repeated constraint point", {{"index", i}});
        }
    }
    for (const auto& z : job.region) {
        if (z.size() != d) throw PreconditionError("interpolation job: region sample dimension mismatch");
    }

    if (!is_symplectic_to_order(jet, jet.order())) {
        const TwoFormPoly defect = pullback_defect(jet);
        // Report the largest coefficient of the lowest offending degree.
        const double thr = tolerance() * std::pow(jet_scale(jet), 2);
        const int low = defect.min_degree(thr);
        nlohmann::json worst;
        double best = -1.0;
        for (const auto& [ij, g] : defect.coeffs) {
            for (const auto& [m, c] : g.terms()) {
                if (m.degree() == low && std::abs(c) > best) {
                    best = std::abs(c);
                    worst = {{"i", ij.first + 1}, {"j", ij.second + 1}, {"exp", m.exponents()}, {"c", to_json(c)}};
                }
            }
        }
        throw PreconditionError("target jet is not symplectic of order k",
                                {{"k", jet.order()}, {"lowest_defect_degree", low}, {"coefficient", worst}});
    }
}

// Jet with base and image forced to the origin.
JetMap pin_origin(const JetMap& j) {
    PolyMap comps = j.components();
    for (auto& c : comps) c.set_term(MultiIndex(j.dim()), 0.0);
    return JetMap(Vec::Zero(j.dim()), j.order(), std::move(comps));
}

struct Core {
    Word word;
    std::vector<int> sizes;
};

Core build_core(const JetMap& p0, const StageConstraints& c, double eps, std::uint64_t seed) {
    const int k = p0.order();
    const int d = p0.dim();
    const Vec zero = Vec::Zero(d);
    const StageBudget budget = stage_budget(eps, k, 0);
    Core core;
    if (k == 0) return core;

    // P0 = L ∘ S_k ∘ ⋯ ∘ S_2: the higher stages peel R = L⁻¹ ∘ P0 from the
    // inside, then the linear stage (exactly linear to order k) goes last.
    const Mat l = linear_part(p0);
    const SympMatrix lin(l, 1e-7);
    JetMap residual = pin_origin(jet_compose(JetMap::linear(zero, l.inverse(), k, zero), p0));
    const double scale = jet_scale(residual);
    if (identity_defect(residual, 2) > 1e-7 * scale)
        throw NumericError("linear part did not cancel", {{"defect", identity_defect(residual, 2)}});

    StageConstraints cur = c;
    Word inner;
    std::vector<int> sizes;
    for (int r = 2; r <= k; ++r) {
        const StageResult sr = higher_stage(residual, r, cur, budget.per_stage_eps, mix(seed, 12, r));
        cur.region = sr.region;
        sizes.push_back(static_cast<int>(sr.word.size()));
        inner = compose(sr.word, inner);
        residual = pin_origin(jet_compose(residual, word_jet(word_inverse(sr.word), zero, k)));
        const double defect = identity_defect(residual, r + 1);
        if (defect > 1e-7 * std::max(scale, jet_scale(residual)))
            throw NumericError("higher stage left a residual below degree r+1", {{"r", r}, {"defect", defect}});
    }

    const StageResult s1 = linear_stage(lin, cur, budget.per_stage_eps, mix(seed, 11), k);
    core.word = compose(s1.word, inner);
    core.sizes.push_back(static_cast<int>(s1.word.size()));
    core.sizes.insert(core.sizes.end(), sizes.begin(), sizes.end());
    return core;
}

double region_sup(const Word& w, const std::vector<Vec>& region) {
    double sup = 0.0;
    for (const auto& z : region) sup = std::max(sup, (word_apply(w, z) - z).norm());
    return sup;
}

}  // namespace

InterpolationResult finite_jet_interpolate(const InterpolationJob& job) {
    validate_job(job);
    const JetMap& jet = job.jet;
    const int d = jet.dim();
    const int k = jet.order();
    const Vec p = jet.base();
    const Vec q = jet.image();
    const Vec zero = Vec::Zero(d);
    InterpolationResult out;

    const bool same_point = (p - q).norm() == 0.0;
    if (same_point && identity_defect(jet, k + 1) == 0.0) return out;

    StageConstraints base{job.flats, job.fixpoints, job.region};
    const bool move_in = p.norm() != 0.0;
    const bool move_out = q.norm() != 0.0;
    const double eps_mover = job.eps / 4;
    const double eps_core = (move_in || move_out) ? job.eps / 2 : job.eps;

    Word a;
    if (move_in) a = point_mover(p, zero, base, eps_mover, mix(job.seed, 1), k).word;
    StageConstraints core_c = base;
    for (auto& z : core_c.region) z = word_apply(a, z);
    const JetMap after_a = jet_compose(jet, word_jet(word_inverse(a), zero, k));

    // The outgoing mover must be small on the core's image of the region,
    // which depends on the mover itself; iterate on the sample set.
    std::vector<Vec> b_region = core_c.region;
    for (int round = 0; round < 4; ++round) {
        Word b;
        if (move_out) {
            StageConstraints bc = base;
            bc.region = b_region;
            b = point_mover(zero, q, bc, eps_mover, mix(job.seed, 2, round), k).word;
        }
        const JetMap p0 = pin_origin(jet_compose(word_jet(word_inverse(b), q, k), after_a));
        const Core core = build_core(p0, core_c, eps_core, mix(job.seed, 3, round));

        std::vector<Vec> z1 = core_c.region;
        for (auto& z : z1) z = word_apply(core.word, z);
        if (move_out && !z1.empty() && region_sup(b, z1) >= eps_mover && round + 1 < 4) {
            b_region = core_c.region;
            b_region.insert(b_region.end(), z1.begin(), z1.end());
            continue;
        }

        out.word = compose(b, compose(core.word, a));
        out.mover_in = static_cast<int>(a.size());
        out.mover_out = static_cast<int>(b.size());
        out.stage_sizes = core.sizes;
        const double sup = region_sup(out.word, job.region);
        if (sup > job.eps)
            throw NumericError("finite_jet_interpolate: region bound exceeded", {{"sup", sup}, {"eps", job.eps}});
        return out;
    }
    throw NumericError("finite_jet_interpolate: outgoing mover did not settle");
}

VerifyRequest verification_request(const InterpolationJob& job) {
    VerifyRequest req;
    req.seed = job.seed;
    req.defect_order = std::max(1, std::min(job.jet.order(), 3));
    req.targets.push_back(job.jet);
    req.flats = job.flats;
    req.fixpoints = job.fixpoints;
    req.region = job.region;
    req.eps = job.eps;
    return req;
}

MultiPointResult multi_point_stage(const std::vector<MultiPointJob>& jobs, const MultiPointOptions& opts) {
    MultiPointResult out;
    if (jobs.empty()) return out;
    const int d = jobs.front().jet.dim();
    const Vec delta = delta_vector(d);
    int prev = 0;
    for (const auto& j : jobs) {
        if (j.alpha <= prev) throw PreconditionError("multi_point_stage: alphas must be strictly increasing positive integers");
        prev = j.alpha;
        const Vec at = static_cast<double>(j.alpha) * delta;
        const double tol = tolerance() * (1.0 + at.norm());
        if (j.jet.dim() != d || (j.jet.base() - at).norm() > tol || (j.jet.image() - at).norm() > tol)
            throw PreconditionError("multi_point_stage: each jet must map alpha*Delta to itself", {{"alpha", j.alpha}});
        out.flat_order = std::max(out.flat_order, j.jet.order() + 1);
    }

    for (std::size_t s = 0; s < jobs.size(); ++s) {
        const auto& job = jobs[s];
        const Vec at = static_cast<double>(job.alpha) * delta;
        InterpolationJob ij;
        const JetMap back = word_jet(word_inverse(out.word), at, job.jet.order());
        ij.jet = jet_compose(job.jet, back);
        // Every other job point stays flat, so later stages see their jets unchanged.
        for (std::size_t t = 0; t < jobs.size(); ++t)
            if (t != s) ij.flats.push_back({static_cast<double>(jobs[t].alpha) * delta, out.flat_order});
        for (int i = job.alpha + 1; i <= opts.horizon; ++i) {
            bool is_job = false;
            for (const auto& other : jobs) is_job = is_job || other.alpha == i;
            if (!is_job) ij.fixpoints.push_back(static_cast<double>(i) * delta);
        }
        ij.region = opts.region;
        ij.eps = opts.eps;
        ij.seed = mix(opts.seed, 21, s);
        const InterpolationResult res = finite_jet_interpolate(ij);
        out.stages.push_back(res.word);
        out.word = compose(res.word, out.word);
    }
    return out;
}

std::vector<MultiPointStageCheck> multi_point_check(const std::vector<MultiPointJob>& jobs,
                                                    const MultiPointResult& result, const MultiPointOptions& opts) {
    std::vector<MultiPointStageCheck> out;
    if (jobs.empty()) return out;
    const Vec delta = delta_vector(jobs.front().jet.dim());
    Word partial;
    for (std::size_t k = 0; k < result.stages.size() && k < jobs.size(); ++k) {
        partial = compose(result.stages[k], partial);
        VerifyRequest req;
        req.seed = mix(opts.seed, 31, k);
        req.sample_count = 4;
        req.defect_order = 1;
        for (std::size_t t = 0; t <= k; ++t) req.targets.push_back(jobs[t].jet);
        for (int i = jobs[k].alpha + 1; i <= opts.horizon; ++i) req.fixpoints.push_back(static_cast<double>(i) * delta);
        req.region = opts.region;
        req.eps = opts.eps * static_cast<double>(k + 1);
        const VerifyReport rep = word_verify(partial, req);
        out.push_back({static_cast<int>(k + 1), rep.jet_errors, rep.fixpoint_errors, rep.region_sup,
                       rep.jets_ok && rep.fixpoints_ok && rep.region_ok});
    }
    return out;
}

}  // namespace sympjet
