#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sympjet/osculation.hpp"
#include "sympjet/shear.hpp"
#include "sympjet/sp_factor.hpp"

namespace sympjet {

/// Target jet P (base p, image q, order k) plus side conditions on the
/// interpolating automorphism F:
///   F − id flat to the given order at every flat point,
///   F(c) = c at every fixpoint,
///   |F(z) − z| ≤ eps on the region samples.
/// Constraint points must avoid p, q and the origin.
struct InterpolationJob {
    JetMap jet;
    std::vector<FlatPoint> flats;
    std::vector<Vec> fixpoints;
    std::vector<Vec> region;
    double eps = 1e-3;
    std::uint64_t seed = 0;
};

/// Constraints handed to a single stage. `region` holds the current images
/// of the region samples and is advanced by every emitted factor.
struct StageConstraints {
    std::vector<FlatPoint> flats;
    std::vector<Vec> fixpoints;
    std::vector<Vec> region;
};

struct StageBudget {
    int stages = 1;
    double per_stage_eps = 0.0;
    int flat_order = 0;
};

/// eps/(k+1) per stage.
StageBudget stage_budget(double eps, int k, int flat_order);

struct LambdaImageReport {
    std::vector<cplx> images;
    bool injective = true;
    double min_gap = INFINITY;
};

/// λ_v on a finite set: images, injectivity and the smallest pairwise gap.
LambdaImageReport lambda_image_check(const std::vector<Vec>& points, const Vec& v, double tol = tolerance());

/// Three-shear word along JΔ, Δ, JΔ mapping jΔ ↦ targets[j−1] (j = 1, 2, …)
/// and agreeing with a translation to order orders[j−1] at jΔ. Targets must
/// lie on span{Δ}.
Word tame_normalizer(const std::vector<Vec>& targets, const std::vector<int>& orders);

struct MoverResult {
    Word word;
    bool two_stage = false;
    Vec intermediate;  // empty unless two_stage
};

/// Automorphism mapping p to q, flat at the flat points, fixing the
/// fixpoints and moving the region samples by less than eps. It agrees with
/// the translation by q − p to order `jet_order` at p.
MoverResult point_mover(const Vec& p, const Vec& q, const StageConstraints& constraints, double eps,
                        std::uint64_t seed, int jet_order = 0);

struct StageResult {
    Word word;
    std::vector<Vec> region;  // region samples after the stage
    int attempts = 1;
};

/// Shear word whose jet at 0 is exactly z ↦ Qz to order `jet_order`
/// (one magic function per transvection).
StageResult linear_stage(const SympMatrix& q, const StageConstraints& constraints, double eps, std::uint64_t seed,
                         int jet_order = 1);

/// Shear word S = id + P^r + O(r+1) for the r-homogeneous part P^r of a
/// residual jet id + P^r + O(r+1) at the origin. Each shear's jet at 0 is
/// exactly its leading term up to the residual's order.
StageResult higher_stage(const JetMap& residual, int r, const StageConstraints& constraints, double eps,
                         std::uint64_t seed);

struct InterpolationResult {
    Word word;
    int mover_in = 0;   // factors of the p ↦ 0 mover
    int mover_out = 0;  // factors of the 0 ↦ q mover
    std::vector<int> stage_sizes;  // factors per stage r = 1..k
};

InterpolationResult finite_jet_interpolate(const InterpolationJob& job);

/// Verification request covering every promise of finite_jet_interpolate.
VerifyRequest verification_request(const InterpolationJob& job);

struct MultiPointJob {
    int alpha = 1;  // jet anchored at αΔ with image αΔ
    JetMap jet;
};

struct MultiPointOptions {
    int horizon = 10;        // lattice points iΔ up to this index stay fixed
    double eps = 1e-3;
    std::vector<Vec> region;
    std::uint64_t seed = 0;
};

struct MultiPointResult {
    Word word;                 // F^M = Ψ_M ∘ ⋯ ∘ Ψ_1
    std::vector<Word> stages;  // Ψ_1, …, Ψ_M
    int flat_order = 0;
};

MultiPointResult multi_point_stage(const std::vector<MultiPointJob>& jobs, const MultiPointOptions& opts);

struct MultiPointStageCheck {
    int stage = 0;                        // 1-based
    std::vector<double> jet_errors;       // (i_k): jets at α_1Δ, …, α_kΔ
    std::vector<double> fixpoint_errors;  // (ii_k): iΔ for α_k < i ≤ horizon
    double region_sup = 0.0;
    bool ok = false;
};

/// Re-checks every partial composition F^k = Ψ_k ∘ ⋯ ∘ Ψ_1.
std::vector<MultiPointStageCheck> multi_point_check(const std::vector<MultiPointJob>& jobs,
                                                    const MultiPointResult& result, const MultiPointOptions& opts);

}  // namespace sympjet
