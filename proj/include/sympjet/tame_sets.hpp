#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sympjet/shear.hpp"

namespace sympjet {

/// Finite set of pairwise distinct points of ℂ^{2n}.
struct DiscreteSet {
    std::vector<Vec> points;

    /// Throws PreconditionError on repeated points or mixed dimensions.
    void validate(double tol = tolerance()) const;
};

/// Polynomial f on ℂⁿ with ∇f(points[k]) = targets[k]; the degree grows
/// until the least-squares residual vanishes (or max_degree is reached).
PolyScalar gradient_interpolant(const std::vector<Vec>& points, const std::vector<Vec>& targets,
                                int max_degree = 24);

/// Two gradient shears sending the k-th point (z_k, w_k) of E to k·e₁
/// (k = 1, 2, …). Requires the w-coordinates to be pairwise distinct.
Word lagrangian_tame_word(const DiscreteSet& e);

struct FiberSeparation {
    std::vector<std::vector<std::size_t>> fibers;  // point indices per distinct w, in order of appearance
    std::vector<Vec> offsets;                      // b_k ∈ ℂⁿ per fiber
    std::vector<double> radii;                     // R_1 < R_2 < … (one more than fibers)
    Word word;                                     // (z, w) ↦ (z + ∇f(w), w), ∇f(w_k) = b_k
};

/// Offsets b_k with R_{k+1} > |z_{k,j} + b_k| > R_k for every point of fiber k.
FiberSeparation fiber_separation(const DiscreteSet& e);

/// E₁ = {|z| ≥ |w|}, E₂ = {|z| < |w|} for points (z, w) ∈ ℂⁿ × ℂⁿ.
std::pair<DiscreteSet, DiscreteSet> set_split(const DiscreteSet& e);

/// Φ = (Φ₁, Φ₂) acting on the symplectic plane (z_j, z_{n+j}) of ℂ^{2n}.
struct PlaneEmbedding {
    int n = 1;
    int j = 0;  // 0-based plane index
    PolyScalar phi1;
    PolyScalar phi2;

    Vec apply(const Vec& z) const;
    Mat jacobian(const Vec& z) const;
    JetMap jet(const Vec& p, int m) const;
};

/// Checks det DΦ ≡ 1 as a polynomial identity, then verifies the embedding
/// is symplectic on jets at a few seeded sample points.
PlaneEmbedding plane_embed(const PolyScalar& phi1, const PolyScalar& phi2, int j, int n, std::uint64_t seed = 0);

struct BoundCheck {
    double lhs = 0.0;  // |A⁻¹u|
    double rhs = 0.0;  // ‖PA‖^k
    bool holds = false;
};

/// |A⁻¹u| ≤ ‖PA‖^k for det A = 1, P an orthogonal projection of rank k,
/// u ∈ ker P a unit vector.
BoundCheck projection_bound_check(const Mat& a, const Mat& p, const Vec& u, double tol = tolerance());

struct BoundAudit {
    int trials = 0;
    int passed = 0;
    double worst_ratio = 0.0;  // max lhs/rhs
};

/// Seeded random det-normalized A (size 2..max_dim), random projections and
/// kernel vectors.
BoundAudit projection_bound_audit(int trials, std::uint64_t seed, int max_dim = 4);

struct ShellConstants {
    double a1 = 0.0;
    std::vector<double> a;      // a_1, a_2, … (as many as requested)
    std::vector<double> delta;  // δ_1, δ_2, …
    double limit = 0.0;         // a₁ + π²/6
    double partial = 0.0;       // a_{terms+1}
    long long terms = 0;
    double tail_bound = 0.0;    // Σ_{k>terms} 1/k² < 1/terms
};

/// a_{k+1} = a_k + 1/k², δ_j = (2/(j+2))²((a_{j+2} − a_{j+1})/3)³.
ShellConstants shell_constants(double a1, int count = 8, long long terms = 1000000);

/// (k/r)^k ((a₂ − a₁)/(k+1))^{k+1}.
double rr_delta(double a1, double a2, double r, int k);

struct Shell {
    int j = 0;
    double delta = 0.0;
    std::vector<Vec> sphere;  // E_j′ ⊂ ∂(j·B₂) ⊂ ℂ²
    std::vector<Vec> box;     // E_j″ ⊂ ℂ^{2n−2}
    int cells_per_axis = 0;
    double spacing = 0.0;
};

struct ShellSet {
    int n = 2;
    double a1 = 1.5;
    int resolution = 8;
    double box_radius = 0.0;
    std::vector<Shell> shells;
    std::string sphere_net = "angular net on the sphere (stand-in for the Rosay-Rudin set)";
};

ShellSet unavoidable_set(int n, int j_max, double a1, int sphere_resolution, double box_radius);

struct ShellCertificate {
    int j = 0;
    int samples = 0;
    double max_distance = 0.0;  // over samples, to the nearest E_j″ point
    bool covered = false;
    int sphere_count = 0;       // points of π′(E_j) = E_j′
    double sphere_radius_error = 0.0;
};

/// Seeded uniform samples of the box; each must lie within δ_j of E_j″.
std::vector<ShellCertificate> covering_certificate(const ShellSet& s, int samples, std::uint64_t seed);

}  // namespace sympjet
