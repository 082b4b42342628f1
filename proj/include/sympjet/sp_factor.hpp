#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "sympjet/shear.hpp"
#include "sympjet/symplectic.hpp"

namespace sympjet {

enum class Side { upper, lower };

/// E^u(αẼ_ij) = [[I, αẼ_ij], [0, I]] or E^l(αẼ_ij) = [[I, 0], [αẼ_ij, I]].
/// Indices are 0-based here and 1-based in JSON.
struct ElemFactor {
    Side side = Side::upper;
    int i = 0;
    int j = 0;
    cplx alpha = 0.0;
};

/// x ↦ x + α(xᵀJv)v.
struct Transvection {
    Vec v;
    cplx alpha = 0.0;
};

using Factor = std::variant<ElemFactor, Transvection>;

/// Ordered product factors[0]·factors[1]⋯ (the last factor acts first).
struct FactorWord {
    int n = 0;
    std::vector<Factor> factors;
};

/// Ẽ_ij = E_ij + E_ji + E_ii + E_jj for i ≠ j, E_ii for i = j.
Mat sym_basis(int n, int i, int j);
SympMatrix elem_matrix(int n, const ElemFactor& f);
Mat transvection_matrix(const Transvection& t);
Mat factor_matrix(int n, const Factor& f);
Mat product(const FactorWord& w);

/// Coordinates of a symmetric A in the Ẽ_ij basis, one factor per nonzero
/// coordinate; the product of the factors is E^side(A).
std::vector<ElemFactor> split_symmetric_block(Side side, const Mat& a, double tol = tolerance());

struct FactorOptions {
    /// Upper bound on the number of emitted transvections; 0 means 8n.
    int max_factors = 0;
    /// Directions v rejected by this predicate are avoided (when possible)
    /// by routing through random witnesses.
    std::function<bool(const Vec&)> admissible;
    int witness_candidates = 16;
};

/// Transvection word whose product is M. Pairs (e_i, e_{n+i}) are fixed one
/// at a time; "map u to w" emits v = w − u, α = 1/ω(u, w), or two
/// transvections through a seeded witness when ω(u, w) is (nearly) zero.
FactorWord factor_sp(const SympMatrix& m, std::uint64_t seed, const FactorOptions& opts = {});

/// Shear whose linear part is the factor's matrix.
Shear shear_of_factor(int n, const Factor& f);

/// Direction ẽ_ij = −(e_i + e_j) (−e_i for i = j) or f̃_ij = e_{n+i} + e_{n+j}.
Vec elem_direction(int n, const ElemFactor& f);

}  // namespace sympjet
