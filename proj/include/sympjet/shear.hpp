#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sympjet/jet.hpp"
#include "sympjet/unipoly.hpp"

namespace sympjet {

/// F(z) = z + f(λ_v(z)^power)·v.
///
/// `power` keeps shears of the form z + g(λ^r)v in product form so that
/// roots placed at λ^r-images stay exact.
struct Shear {
    Vec v;
    UniPoly f;
    int power = 1;
};

enum class GradSide { first, second };

/// first:  (z, w) ↦ (z + ∇f(w), w)
/// second: (z, w) ↦ (z, w + ∇f(z))
/// The potential lives in n variables.
struct GradShear {
    GradSide side = GradSide::first;
    PolyScalar potential;
};

using WordFactor = std::variant<Shear, GradShear>;

/// Finite composition; factors.front() is applied last.
struct Word {
    std::vector<WordFactor> factors;

    bool empty() const noexcept { return factors.empty(); }
    std::size_t size() const noexcept { return factors.size(); }
};

/// outer ∘ inner.
Word compose(const Word& outer, const Word& inner);

/// z^r by repeated multiplication; shared by every evaluation path so that
/// nodes computed at construction time match evaluations bit for bit.
cplx ipow(cplx z, int r);

/// λ_v(z)^power.
cplx shear_argument(const Shear& s, const Vec& z);

Vec shear_apply(const WordFactor& f, const Vec& z);
Vec word_apply(const Word& w, const Vec& z);

WordFactor factor_inverse(const WordFactor& f);
Word word_inverse(const Word& w);

Mat factor_jacobian(const WordFactor& f, const Vec& z);
Mat word_jacobian(const Word& w, const Vec& z);

/// factor ∘ inner as a jet at inner's base.
JetMap apply_factor(const WordFactor& f, const JetMap& inner);
/// W ∘ inner.
JetMap word_after(const Word& w, const JetMap& inner);
/// Degree-m Taylor truncation of W at p.
JetMap word_jet(const Word& w, const Vec& p, int m);

struct FlatPoint {
    Vec point;
    int order = 1;  // W − id vanishes to this order
};

struct VerifyRequest {
    std::vector<Vec> samples;  // Jacobian sample points; generated from seed when empty
    std::uint64_t seed = 0;
    int sample_count = 20;
    double sample_radius = 1.0;
    int defect_order = 3;          // order of the jets whose pullback defect is measured
    std::vector<JetMap> targets;   // word_jet must match each target at its base
    std::vector<FlatPoint> flats;
    std::vector<Vec> fixpoints;
    std::vector<Vec> region;
    double eps = 0.0;              // region bound, unchecked when region is empty

    double symplectic_tol = 1e-9;
    double jet_tol = 1e-6;
    double flat_tol = 1e-8;
    double fixpoint_tol = 1e-9;
};

struct VerifyReport {
    double symplectic_residual = 0.0;  // max ‖GᵀJG − J‖ / max(1, ‖G‖²)
    double defect_max = 0.0;           // pullback defect of the jets at the samples
    std::vector<double> jet_errors;
    std::vector<double> flat_errors;
    std::vector<double> fixpoint_errors;
    double region_sup = 0.0;
    bool symplectic_ok = true;
    bool jets_ok = true;
    bool flats_ok = true;
    bool fixpoints_ok = true;
    bool region_ok = true;

    bool passed() const noexcept { return symplectic_ok && jets_ok && flats_ok && fixpoints_ok && region_ok; }
};

VerifyReport word_verify(const Word& w, const VerifyRequest& req);

}  // namespace sympjet
