#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "sympjet/jet.hpp"

namespace sympjet {

/// Standard structure matrix J = [[0, I], [−I, 0]] of size 2n.
Mat symplectic_form(int n);

/// λ_v(z) = zᵀ J v.
cplx lambda(const Vec& v, const Vec& z);

/// ‖MᵀJM − J‖_max.
double symplectic_residual(const Mat& m);

/// A 2n×2n matrix with MᵀJM = J (checked on construction).
class SympMatrix {
public:
    explicit SympMatrix(Mat m, double tol = tolerance());
    const Mat& matrix() const noexcept { return m_; }
    int n() const noexcept { return static_cast<int>(m_.rows() / 2); }

private:
    Mat m_;
};

/// Polynomial coefficients g_ij (i < j, 0-based) of a 2-form Σ g_ij dz_i ∧ dz_j.
struct TwoFormPoly {
    int dim = 0;
    std::map<std::pair<int, int>, PolyScalar> coeffs;

    double max_abs_coeff() const;
    /// Lowest degree carrying a coefficient above `tol`, -1 if none.
    int min_degree(double tol) const;
};

/// F*ω − ω for ω = Σ dz_i ∧ dz_{n+i}, in F's local coordinates, truncated at
/// degree order − 1. All pairs 1 ≤ i < j ≤ 2n are reported.
TwoFormPoly pullback_defect(const JetMap& f);

/// Largest k ≤ order − 1 such that every defect coefficient of degree < k is
/// below tol (scaled by the jet's coefficient magnitude).
int symplectic_order(const JetMap& f, double tol = tolerance());

/// True when every defect coefficient of degree < k vanishes (within tol).
/// For a k-jet this is the "symplectic of order k" hypothesis.
bool is_symplectic_to_order(const JetMap& f, int k, double tol = tolerance());

/// d(ι_P ω) for a polynomial vector field P on ℂ^{2n}.
TwoFormPoly contraction_differential(const PolyMap& p);

/// J · ∇H.
PolyMap hamiltonian_field(const PolyScalar& h);

/// Unique (r+1)-homogeneous H with H(0) = 0 and J·∇H = P for an
/// r-homogeneous symplectic field P, via H = −zᵀJP(z)/(r+1).
/// Throws PreconditionError carrying the residual form when d(ι_Pω) ≠ 0.
PolyScalar hamiltonian_potential(const PolyMap& p, double tol = tolerance());

/// Number of monomials of degree d in m variables.
long long monomial_count(int nvars, int d);

struct BasisOptions {
    double max_condition = 1e10;
    int max_rounds = 32;
};

/// N = binom(2n−1+d, d) unit vectors b_j whose powers (b_jᵀJz)^d form a basis of
/// the degree-d forms on ℂ^{2n}. Deterministic in `seed`; vectors rejected
/// by `admissible` (when given) are perturbed, as are near-singular sets.
std::vector<Vec> linear_form_power_basis(int n, int d, std::uint64_t seed,
                                         const std::function<bool(const Vec&)>& admissible = {},
                                         const BasisOptions& opts = {});

/// Coefficients of (bᵀJz)^d in the degree-d monomial basis of ℂ^{2n}.
PolyScalar linear_form_power(const Vec& b, int d);

struct HamiltonianDecomposition {
    int degree = 0;             // k, the homogeneity of the field
    std::vector<Vec> directions;
    std::vector<cplx> coefficients;

    /// Σ c_j (b_jᵀJz)^k b_j.
    PolyMap resum() const;
};

/// Expansion of a k-homogeneous symplectic field as Σ c_j (b_jᵀJz)^k b_j.
/// The directions come from linear_form_power_basis at degree k+1; of a few
/// seeded bases the one with the least Σ|c_j||b_j|^{k+1} is kept.
HamiltonianDecomposition hamiltonian_decompose(const PolyMap& p, int k, std::uint64_t seed,
                                               const std::function<bool(const Vec&)>& admissible = {},
                                               double tol = tolerance());

}  // namespace sympjet
