#pragma once

#include <utility>
#include <vector>

#include "sympjet/config.hpp"

namespace sympjet {

/// Univariate complex polynomial held in weighted Newton form
///
///   f(ζ) = d₀ + w₀(ζ−x₀)·(d₁ + w₁(ζ−x₁)·(d₂ + … + w_{D−1}(ζ−x_{D−1})·d_D)).
///
/// Ordinary coefficient lists are the special case x = 0, w = 1. Products of
/// linear factors (the shape every constrained factory produces) are the
/// case d = (0,…,0,scale); evaluating them at a node returns an exact zero,
/// which is what keeps prescribed fixed points fixed bit-for-bit.
class UniPoly {
public:
    UniPoly() = default;

    /// Ascending monomial coefficients.
    static UniPoly from_coefficients(std::vector<cplx> coeffs);
    /// scale · Π w_i(ζ − x_i).
    static UniPoly product(cplx scale, std::vector<cplx> nodes, std::vector<cplx> weights);
    static UniPoly newton(std::vector<cplx> nodes, std::vector<cplx> weights, std::vector<cplx> coeffs);

    const std::vector<cplx>& nodes() const noexcept { return nodes_; }
    const std::vector<cplx>& weights() const noexcept { return weights_; }
    const std::vector<cplx>& newton_coeffs() const noexcept { return coeffs_; }

    bool is_zero() const;
    bool is_monomial_form() const;
    /// Formal degree (number of nodes once normalized); -1 for zero.
    int degree() const;

    cplx eval(cplx z) const;
    /// (f(z), f'(z)).
    std::pair<cplx, cplx> eval_with_derivative(cplx z) const;

    /// Taylor coefficients of f(s + t) in t, orders 0..m.
    std::vector<cplx> taylor(cplx s, int m) const;
    /// Ascending monomial coefficients (expansion around 0).
    std::vector<cplx> coefficients() const;

    UniPoly negated() const;
    UniPoly scaled(cplx s) const;

    /// Drops trailing zero top coefficients so the leading stored coefficient
    /// is nonzero (or the polynomial is empty).
    UniPoly& normalize();

private:
    std::vector<cplx> nodes_;
    std::vector<cplx> weights_;
    std::vector<cplx> coeffs_;  // size nodes_.size() + 1, or empty for zero
};

}  // namespace sympjet
