#pragma once

#include <optional>
#include <vector>

#include "sympjet/unipoly.hpp"

namespace sympjet {

/// Prescribed Taylor coefficients jet[0..m] of f at `point`.
struct OsculationConstraint {
    cplx point;
    std::vector<cplx> jet;
};

/// f vanishes to order `order` at `point`.
struct Flat {
    cplx point;
    int order = 1;
};

/// Finite sample of a compact set K ⊂ ℂ with a separating half-plane
/// Re(ū·ζ) ≥ δ > 0 on K and radius R = max|ζ|.
struct CompactRegion {
    std::vector<cplx> samples;
    cplx u = 1.0;
    double delta = 0.0;
    double radius = 0.0;

    /// Separator from the samples (maximal margin over directions);
    /// throws PreconditionError when 0 lies in the sampled hull.
    static CompactRegion from_samples(std::vector<cplx> samples);
    /// Explicit (u, δ, R) description without samples.
    static CompactRegion from_separator(cplx u, double delta, double radius);
};

/// Best (u, δ) with Re(ū s) ≥ δ for all samples; δ ≤ 0 when none exists.
std::pair<cplx, double> separating_direction(const std::vector<cplx>& samples);

/// Least-degree polynomial matching every prescribed expansion
/// (confluent Newton divided differences), verified by re-expansion.
UniPoly hermite_osculate(const std::vector<OsculationConstraint>& constraints);

/// q(ζ) = (1 − cūζ)^d with c = δ/R², q(0) = 1, sup_K |q| < eps.
UniPoly attenuation_factor(const CompactRegion& k, double eps, int max_degree = 4096);

struct MagicOptions {
    int max_degree = 4096;
    /// When ≥ r: f − βζ^r = O(ζ^{exact_order+1}) despite the attenuation.
    int exact_order = -1;
};

/// f(ζ) = β ζ^r Π((ζ−a_i)/(−a_i))^{N_i} Π((ζ−c_j)/(−c_j)) q(ζ), where q is
/// the attenuation making sup_K |f| < eps. Zeros coinciding with a flat are
/// already roots and are dropped.
UniPoly magic_function(int r, cplx beta, const std::vector<Flat>& flats, const std::vector<cplx>& zeros,
                       const std::optional<CompactRegion>& region, double eps, const MagicOptions& opts = {});

/// Attenuated factor pair for a polynomial `rest` already fixed in product
/// form: returns rest · (1 − cū(ζ − center))^d with sup_K |·| < eps.
UniPoly attenuate(const UniPoly& rest, const CompactRegion& k, cplx center, double eps, int max_degree = 4096);

/// rest · (1 − cū(ζ − center))^d · H with H a polynomial tail chosen so the
/// Taylor coefficients at `center` are exactly `jet` (orders 0..m), and the
/// sup over the region samples below eps. `rest` must be in product form and
/// the jet must vanish below the multiplicity of `center` as a root of rest.
UniPoly attenuate_with_jet(const UniPoly& rest, const std::optional<CompactRegion>& k, cplx center, double eps,
                           const std::vector<cplx>& jet, int max_degree = 4096);

}  // namespace sympjet
