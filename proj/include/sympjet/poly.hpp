#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include "sympjet/config.hpp"

namespace sympjet {

/// Exponent vector of a monomial in `size()` variables.
///
/// Ordered gradedly: by total degree first, then lexicographically with the
/// first variable most significant (z1^2 < z1 z2 < z2^2 in degree 2).
class MultiIndex {
public:
    static constexpr int max_vars = 12;

    MultiIndex() = default;
    explicit MultiIndex(int nvars);
    MultiIndex(std::initializer_list<int> exps);
    explicit MultiIndex(std::span<const int> exps);

    static MultiIndex unit(int nvars, int var);

    int size() const noexcept { return nvars_; }
    int operator[](int i) const noexcept { return e_[static_cast<std::size_t>(i)]; }
    void set(int i, int value);
    int degree() const noexcept { return degree_; }

    MultiIndex operator+(const MultiIndex& o) const;
    std::vector<int> exponents() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept {
        return a.nvars_ == b.nvars_ && a.e_ == b.e_;
    }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) noexcept;

private:
    std::array<std::uint8_t, max_vars> e_{};
    std::uint8_t nvars_ = 0;
    std::uint16_t degree_ = 0;
};

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// MultiIndex order.
std::vector<MultiIndex> monomials_of_degree(int nvars, int d);

/// Sparse multivariate polynomial with complex coefficients.
class PolyScalar {
public:
    using Terms = std::map<MultiIndex, cplx>;

    PolyScalar() = default;
    explicit PolyScalar(int nvars) : nvars_(nvars) {}

    static PolyScalar constant(int nvars, cplx c);
    static PolyScalar variable(int nvars, int var, cplx coeff = 1.0);
    static PolyScalar linear_form(std::span<const cplx> coeffs, cplx c0 = 0.0);
    static PolyScalar monomial(const MultiIndex& m, cplx c);

    int nvars() const noexcept { return nvars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    cplx coeff(const MultiIndex& m) const;
    cplx constant_term() const;
    void add_term(const MultiIndex& m, cplx c);
    void set_term(const MultiIndex& m, cplx c);

    /// Highest total degree with a stored term, -1 for the zero polynomial.
    int degree() const;
    /// Lowest total degree whose terms exceed `tol` in magnitude, -1 if none.
    int min_degree(double tol = 0.0) const;
    double max_abs_coeff() const;

    PolyScalar truncated(int max_degree) const;
    PolyScalar homogeneous(int d) const;
    PolyScalar derivative(int var) const;

    /// Drops terms with |c| <= tol.
    PolyScalar& normalize(double tol = tolerance());

    cplx eval(std::span<const cplx> z) const;
    cplx eval(const Vec& z) const;

    PolyScalar& operator+=(const PolyScalar& o);
    PolyScalar& operator-=(const PolyScalar& o);
    PolyScalar& operator*=(cplx s);
    friend PolyScalar operator+(PolyScalar a, const PolyScalar& b) { return a += b; }
    friend PolyScalar operator-(PolyScalar a, const PolyScalar& b) { return a -= b; }
    friend PolyScalar operator*(PolyScalar a, cplx s) { return a *= s; }
    friend PolyScalar operator*(cplx s, PolyScalar a) { return a *= s; }
    PolyScalar operator-() const { return *this * cplx(-1.0); }

    /// Product; when `max_degree >= 0` terms above it are never formed.
    PolyScalar mul(const PolyScalar& o, int max_degree = -1) const;
    friend PolyScalar operator*(const PolyScalar& a, const PolyScalar& b) { return a.mul(b); }

    /// Max coefficient difference over the union of supports.
    double distance(const PolyScalar& o) const;

private:
    int nvars_ = 0;
    Terms terms_;
};

/// A polynomial self-map (or vector field); one PolyScalar per component.
using PolyMap = std::vector<PolyScalar>;

double distance(const PolyMap& a, const PolyMap& b);
double max_abs_coeff(const PolyMap& m);

/// outer(args[0], …, args[k-1]) truncated at `max_degree` (the args may
/// carry constant terms). Every argument must share one variable count.
PolyScalar substitute(const PolyScalar& outer, std::span<const PolyScalar> args, int max_degree);

}  // namespace sympjet
