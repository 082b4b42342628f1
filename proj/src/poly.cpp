#include "sympjet/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sympjet {

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

MultiIndex::MultiIndex(int nvars) {
    if (nvars < 0 || nvars > max_vars)
        throw PreconditionError("MultiIndex: unsupported variable count " + std::to_string(nvars));
    nvars_ = static_cast<std::uint8_t>(nvars);
}

MultiIndex::MultiIndex(std::initializer_list<int> exps)
    : MultiIndex(std::span<const int>(exps.begin(), exps.size())) {}

MultiIndex::MultiIndex(std::span<const int> exps) : MultiIndex(static_cast<int>(exps.size())) {
    for (std::size_t i = 0; i < exps.size(); ++i) set(static_cast<int>(i), exps[i]);
}

MultiIndex MultiIndex::unit(int nvars, int var) {
    MultiIndex m(nvars);
    m.set(var, 1);
    return m;
}

void MultiIndex::set(int i, int value) {
    if (i < 0 || i >= nvars_) throw PreconditionError("MultiIndex: variable index out of range");
    if (value < 0 || value > 255) throw PreconditionError("MultiIndex: exponent out of range");
    degree_ = static_cast<std::uint16_t>(degree_ - e_[static_cast<std::size_t>(i)] + value);
    e_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value);
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
    if (o.nvars_ != nvars_) throw PreconditionError("MultiIndex: dimension mismatch");
    MultiIndex r(nvars_);
    for (int i = 0; i < nvars_; ++i) r.set(i, (*this)[i] + o[i]);
    return r;
}

std::vector<int> MultiIndex::exponents() const {
    std::vector<int> out(static_cast<std::size_t>(nvars_));
    for (int i = 0; i < nvars_; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
    return out;
}

bool operator<(const MultiIndex& a, const MultiIndex& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    if (a.nvars_ != b.nvars_) return a.nvars_ < b.nvars_;
    // Larger leading exponent sorts first within a degree.
    for (int i = 0; i < a.nvars_; ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

std::vector<MultiIndex> monomials_of_degree(int nvars, int d) {
    std::vector<MultiIndex> out;
    if (d < 0) return out;
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == nvars - 1) {
            e[static_cast<std::size_t>(var)] = left;
            out.emplace_back(std::span<const int>(e));
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[static_cast<std::size_t>(var)] = k;
            rec(var + 1, left - k);
        }
    };
    if (nvars == 0) {
        if (d == 0) out.emplace_back(0);
        return out;
    }
    rec(0, d);
    return out;
}

// ---------------------------------------------------------------------------
// PolyScalar
// ---------------------------------------------------------------------------

PolyScalar PolyScalar::constant(int nvars, cplx c) {
    PolyScalar p(nvars);
    p.add_term(MultiIndex(nvars), c);
    return p;
}

PolyScalar PolyScalar::variable(int nvars, int var, cplx coeff) {
    PolyScalar p(nvars);
    p.add_term(MultiIndex::unit(nvars, var), coeff);
    return p;
}

PolyScalar PolyScalar::linear_form(std::span<const cplx> coeffs, cplx c0) {
    const int n = static_cast<int>(coeffs.size());
    PolyScalar p(n);
    if (c0 != cplx(0.0)) p.add_term(MultiIndex(n), c0);
    for (int i = 0; i < n; ++i) {
        if (coeffs[static_cast<std::size_t>(i)] != cplx(0.0))
            p.add_term(MultiIndex::unit(n, i), coeffs[static_cast<std::size_t>(i)]);
    }
    return p;
}

PolyScalar PolyScalar::monomial(const MultiIndex& m, cplx c) {
    PolyScalar p(m.size());
    p.add_term(m, c);
    return p;
}

cplx PolyScalar::coeff(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx(0.0) : it->second;
}

cplx PolyScalar::constant_term() const { return coeff(MultiIndex(nvars_)); }

void PolyScalar::add_term(const MultiIndex& m, cplx c) {
    if (m.size() != nvars_) throw PreconditionError("PolyScalar: monomial dimension mismatch");
    if (c == cplx(0.0)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == cplx(0.0)) terms_.erase(it);
    }
}

void PolyScalar::set_term(const MultiIndex& m, cplx c) {
    if (m.size() != nvars_) throw PreconditionError("PolyScalar: monomial dimension mismatch");
    if (c == cplx(0.0))
        terms_.erase(m);
    else
        terms_[m] = c;
}

int PolyScalar::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

int PolyScalar::min_degree(double tol) const {
    for (const auto& [m, c] : terms_) {
        if (std::abs(c) > tol) return m.degree();
    }
    return -1;
}

double PolyScalar::max_abs_coeff() const {
    double best = 0.0;
    for (const auto& [m, c] : terms_) best = std::max(best, std::abs(c));
    return best;
}

PolyScalar PolyScalar::truncated(int max_degree) const {
    PolyScalar out(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m.degree() > max_degree) break;
        out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
}

PolyScalar PolyScalar::homogeneous(int d) const {
    PolyScalar out(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m.degree() == d) out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
}

PolyScalar PolyScalar::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw PreconditionError("derivative: variable out of range");
    PolyScalar out(nvars_);
    for (const auto& [m, c] : terms_) {
        const int e = m[var];
        if (e == 0) continue;
        MultiIndex r = m;
        r.set(var, e - 1);
        out.add_term(r, c * static_cast<double>(e));
    }
    return out;
}

PolyScalar& PolyScalar::normalize(double tol) {
    std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
    return *this;
}

cplx PolyScalar::eval(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != nvars_)
        throw PreconditionError("eval: point has dimension " + std::to_string(z.size()) + ", expected " +
                                std::to_string(nvars_));
    if (terms_.empty()) return 0.0;
    int maxdeg = degree();
    // Power table z_i^e for e <= maxdeg.
    std::vector<cplx> pw(static_cast<std::size_t>(nvars_ * (maxdeg + 1)));
    for (int i = 0; i < nvars_; ++i) {
        cplx acc = 1.0;
        for (int e = 0; e <= maxdeg; ++e) {
            pw[static_cast<std::size_t>(i * (maxdeg + 1) + e)] = acc;
            acc *= z[static_cast<std::size_t>(i)];
        }
    }
    cplx sum = 0.0;
    for (const auto& [m, c] : terms_) {
        cplx t = c;
        for (int i = 0; i < nvars_; ++i) {
            if (m[i]) t *= pw[static_cast<std::size_t>(i * (maxdeg + 1) + m[i])];
        }
        sum += t;
    }
    return sum;
}

cplx PolyScalar::eval(const Vec& z) const {
    return eval(std::span<const cplx>(z.data(), static_cast<std::size_t>(z.size())));
}

PolyScalar& PolyScalar::operator+=(const PolyScalar& o) {
    if (o.nvars_ != nvars_ && !o.terms_.empty()) {
        if (terms_.empty() && nvars_ == 0)
            nvars_ = o.nvars_;
        else
            throw PreconditionError("PolyScalar: dimension mismatch in addition");
    }
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

PolyScalar& PolyScalar::operator-=(const PolyScalar& o) {
    if (o.nvars_ != nvars_ && !o.terms_.empty()) {
        if (terms_.empty() && nvars_ == 0)
            nvars_ = o.nvars_;
        else
            throw PreconditionError("PolyScalar: dimension mismatch in subtraction");
    }
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

PolyScalar& PolyScalar::operator*=(cplx s) {
    if (s == cplx(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

PolyScalar PolyScalar::mul(const PolyScalar& o, int max_degree) const {
    if (o.nvars_ != nvars_) throw PreconditionError("PolyScalar: dimension mismatch in product");
    PolyScalar out(nvars_);
    for (const auto& [ma, ca] : terms_) {
        if (max_degree >= 0 && ma.degree() > max_degree) break;
        for (const auto& [mb, cb] : o.terms_) {
            if (max_degree >= 0 && ma.degree() + mb.degree() > max_degree) break;
            out.add_term(ma + mb, ca * cb);
        }
    }
    return out;
}

double PolyScalar::distance(const PolyScalar& o) const {
    double best = 0.0;
    for (const auto& [m, c] : terms_) best = std::max(best, std::abs(c - o.coeff(m)));
    for (const auto& [m, c] : o.terms_) {
        if (!terms_.count(m)) best = std::max(best, std::abs(c));
    }
    return best;
}

double distance(const PolyMap& a, const PolyMap& b) {
    if (a.size() != b.size()) throw PreconditionError("PolyMap: component count mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, a[i].distance(b[i]));
    return best;
}

double max_abs_coeff(const PolyMap& m) {
    double best = 0.0;
    for (const auto& p : m) best = std::max(best, p.max_abs_coeff());
    return best;
}

PolyScalar substitute(const PolyScalar& outer, std::span<const PolyScalar> args, int max_degree) {
    if (static_cast<int>(args.size()) != outer.nvars())
        throw PreconditionError("substitute: argument count does not match outer variable count");
    if (args.empty()) return PolyScalar::constant(0, outer.constant_term());
    const int nv = args.front().nvars();
    for (const auto& a : args) {
        if (a.nvars() != nv) throw PreconditionError("substitute: arguments differ in variable count");
    }

    // Monomial products are memoized: prod(α) = prod(α − e_i) · args[i], i the
    // last variable with a nonzero exponent.
    std::map<MultiIndex, PolyScalar> memo;
    std::function<const PolyScalar&(const MultiIndex&)> product = [&](const MultiIndex& m) -> const PolyScalar& {
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
        PolyScalar value(nv);
        if (m.degree() == 0) {
            value = PolyScalar::constant(nv, 1.0);
        } else {
            int last = m.size() - 1;
            while (m[last] == 0) --last;
            MultiIndex prev = m;
            prev.set(last, m[last] - 1);
            value = product(prev).mul(args[static_cast<std::size_t>(last)], max_degree);
        }
        return memo.emplace(m, std::move(value)).first->second;
    };

    PolyScalar out(nv);
    for (const auto& [m, c] : outer.terms()) out += product(m) * c;
    return out;
}

}  // namespace sympjet
