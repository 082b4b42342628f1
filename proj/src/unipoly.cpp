#include "sympjet/unipoly.hpp"

namespace sympjet {

UniPoly UniPoly::from_coefficients(std::vector<cplx> coeffs) {
    UniPoly p;
    if (coeffs.empty()) return p;
    p.nodes_.assign(coeffs.size() - 1, cplx(0.0));
    p.weights_.assign(coeffs.size() - 1, cplx(1.0));
    p.coeffs_ = std::move(coeffs);
    p.normalize();
    return p;
}

UniPoly UniPoly::product(cplx scale, std::vector<cplx> nodes, std::vector<cplx> weights) {
    if (nodes.size() != weights.size()) throw PreconditionError("UniPoly::product: nodes/weights size mismatch");
    UniPoly p;
    if (scale == cplx(0.0)) return p;
    p.coeffs_.assign(nodes.size() + 1, cplx(0.0));
    p.coeffs_.back() = scale;
    p.nodes_ = std::move(nodes);
    p.weights_ = std::move(weights);
    return p;
}

UniPoly UniPoly::newton(std::vector<cplx> nodes, std::vector<cplx> weights, std::vector<cplx> coeffs) {
    if (nodes.size() != weights.size() || coeffs.size() != nodes.size() + 1)
        throw PreconditionError("UniPoly::newton: expected |coeffs| = |nodes| + 1 = |weights| + 1");
    UniPoly p;
    p.nodes_ = std::move(nodes);
    p.weights_ = std::move(weights);
    p.coeffs_ = std::move(coeffs);
    p.normalize();
    return p;
}

bool UniPoly::is_zero() const {
    for (auto c : coeffs_) {
        if (c != cplx(0.0)) return false;
    }
    return true;
}

bool UniPoly::is_monomial_form() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] != cplx(0.0) || weights_[i] != cplx(1.0)) return false;
    }
    return true;
}

int UniPoly::degree() const {
    if (is_zero()) return -1;
    return static_cast<int>(nodes_.size());
}

cplx UniPoly::eval(cplx z) const {
    if (coeffs_.empty()) return 0.0;
    // Terms past the first node equal to z vanish; skipping them avoids inf * 0.
    std::size_t top = nodes_.size();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i] == z && weights_[i] != cplx(0.0)) { top = i; break; }
    cplx acc = coeffs_[top];
    for (std::size_t i = top; i-- > 0;) acc = acc * (weights_[i] * (z - nodes_[i])) + coeffs_[i];
    return acc;
}

std::pair<cplx, cplx> UniPoly::eval_with_derivative(cplx z) const {
    if (coeffs_.empty()) return {0.0, 0.0};
    cplx p = coeffs_.back();
    cplx dp = 0.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        const cplx lin = weights_[i] * (z - nodes_[i]);
        dp = dp * lin + p * weights_[i];
        p = p * lin + coeffs_[i];
    }
    return {p, dp};
}

std::vector<cplx> UniPoly::taylor(cplx s, int m) const {
    std::vector<cplx> acc(static_cast<std::size_t>(m + 1), cplx(0.0));
    if (coeffs_.empty() || m < 0) return acc;
    acc[0] = coeffs_.back();
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        const cplx w = weights_[i];
        const cplx shift = s - nodes_[i];
        // acc <- w (shift + t) acc + d_i, truncated at order m
        for (int k = m; k >= 1; --k) acc[static_cast<std::size_t>(k)] = w * (shift * acc[static_cast<std::size_t>(k)] + acc[static_cast<std::size_t>(k - 1)]);
        acc[0] = w * shift * acc[0] + coeffs_[i];
    }
    return acc;
}

std::vector<cplx> UniPoly::coefficients() const {
    if (is_zero()) return {};
    auto c = taylor(0.0, degree());
    while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
    return c;
}

UniPoly UniPoly::negated() const { return scaled(-1.0); }

UniPoly UniPoly::scaled(cplx s) const {
    UniPoly p = *this;
    for (auto& c : p.coeffs_) c *= s;
    return p.normalize();
}

UniPoly& UniPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == cplx(0.0)) {
        coeffs_.pop_back();
        if (!nodes_.empty()) {
            nodes_.pop_back();
            weights_.pop_back();
        }
    }
    if (coeffs_.empty()) {
        nodes_.clear();
        weights_.clear();
    }
    return *this;
}

}  // namespace sympjet
