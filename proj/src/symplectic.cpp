#include "sympjet/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sympjet/json_io.hpp"

namespace sympjet {

Mat symplectic_form(int n) {
    Mat j = Mat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Mat::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return j;
}

cplx lambda(const Vec& v, const Vec& z) {
    const Eigen::Index n = v.size() / 2;
    cplx s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += z(i) * v(n + i) - z(n + i) * v(i);
    return s;
}

double symplectic_residual(const Mat& m) {
    const Mat j = symplectic_form(static_cast<int>(m.rows() / 2));
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

SympMatrix::SympMatrix(Mat m, double tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0)
        throw PreconditionError("SympMatrix: expected a nonempty 2n x 2n matrix");
    const double res = symplectic_residual(m_);
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if (res > tol * scale * scale)
        throw PreconditionError("matrix is not symplectic", {{"residual", res}});
}

double TwoFormPoly::max_abs_coeff() const {
    double best = 0.0;
    for (const auto& [ij, g] : coeffs) best = std::max(best, g.max_abs_coeff());
    return best;
}

int TwoFormPoly::min_degree(double tol) const {
    int best = -1;
    for (const auto& [ij, g] : coeffs) {
        const int d = g.min_degree(tol);
        if (d >= 0 && (best < 0 || d < best)) best = d;
    }
    return best;
}

TwoFormPoly pullback_defect(const JetMap& f) {
    if (f.order() < 1) throw PreconditionError("pullback_defect: order must be at least 1");
    const int d = f.dim();
    if (d % 2 != 0) throw PreconditionError("pullback_defect: odd ambient dimension");
    const int n = d / 2;
    const int m = f.order() - 1;

    std::vector<std::vector<PolyScalar>> grad(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) grad[static_cast<std::size_t>(i)].push_back(f[i].derivative(k).truncated(m));
    }
    auto dF = [&](int comp, int var) -> const PolyScalar& {
        return grad[static_cast<std::size_t>(comp)][static_cast<std::size_t>(var)];
    };

    TwoFormPoly out;
    out.dim = d;
    for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
            PolyScalar g(d);
            for (int i = 0; i < n; ++i) {
                g += dF(i, k).mul(dF(n + i, l), m);
                g -= dF(i, l).mul(dF(n + i, k), m);
            }
            if (k < n && l == k + n) g.add_term(MultiIndex(d), -1.0);
            out.coeffs.emplace(std::make_pair(k, l), std::move(g));
        }
    }
    return out;
}

namespace {

double defect_threshold(const JetMap& f, double tol) {
    const double s = std::max(1.0, max_abs_coeff(f.components()));
    return tol * s * s;
}

}  // namespace

int symplectic_order(const JetMap& f, double tol) {
    const TwoFormPoly defect = pullback_defect(f);
    const int cap = f.order() - 1;
    const int lowest = defect.min_degree(defect_threshold(f, tol));
    if (lowest < 0) return cap;
    return std::min(lowest, cap);
}

bool is_symplectic_to_order(const JetMap& f, int k, double tol) {
    if (k <= 0) return true;
    if (k > f.order())
        throw PreconditionError("is_symplectic_to_order: order " + std::to_string(k) + " not determined by a " +
                                std::to_string(f.order()) + "-jet");
    const TwoFormPoly defect = pullback_defect(f);
    const int lowest = defect.min_degree(defect_threshold(f, tol));
    return lowest < 0 || lowest >= k;
}

TwoFormPoly contraction_differential(const PolyMap& p) {
    const int d = static_cast<int>(p.size());
    if (d % 2 != 0) throw PreconditionError("vector field must live on an even-dimensional space");
    const int n = d / 2;
    // ι_P ω = Σ_i (P_i dz_{n+i} − P_{n+i} dz_i).
    PolyMap alpha(static_cast<std::size_t>(d));
    for (int i = 0; i < n; ++i) {
        alpha[static_cast<std::size_t>(i)] = -p[static_cast<std::size_t>(n + i)];
        alpha[static_cast<std::size_t>(n + i)] = p[static_cast<std::size_t>(i)];
    }
    TwoFormPoly out;
    out.dim = d;
    for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
            PolyScalar g(d);
            if (alpha[static_cast<std::size_t>(l)].nvars() == d) g += alpha[static_cast<std::size_t>(l)].derivative(k);
            if (alpha[static_cast<std::size_t>(k)].nvars() == d) g -= alpha[static_cast<std::size_t>(k)].derivative(l);
            out.coeffs.emplace(std::make_pair(k, l), std::move(g));
        }
    }
    return out;
}

PolyMap hamiltonian_field(const PolyScalar& h) {
    const int d = h.nvars();
    const int n = d / 2;
    PolyMap out(static_cast<std::size_t>(d));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = h.derivative(n + i);
        out[static_cast<std::size_t>(n + i)] = -h.derivative(i);
    }
    return out;
}

namespace {

int field_degree(const PolyMap& p) {
    int deg = -1;
    for (const auto& c : p) {
        for (const auto& [m, coef] : c.terms()) {
            if (deg < 0)
                deg = m.degree();
            else if (m.degree() != deg)
                throw PreconditionError("vector field is not homogeneous",
                                        {{"degrees", nlohmann::json::array({deg, m.degree()})}});
        }
    }
    return deg;
}

void check_field_shape(const PolyMap& p) {
    const int d = static_cast<int>(p.size());
    if (d == 0 || d % 2 != 0) throw PreconditionError("vector field must live on an even-dimensional space");
    for (const auto& c : p) {
        if (c.nvars() != d && !(c.nvars() == 0 && c.empty()))
            throw PreconditionError("vector field component has the wrong variable count");
    }
}

PolyMap with_dim(PolyMap p) {
    const int d = static_cast<int>(p.size());
    for (auto& c : p) {
        if (c.nvars() == 0) c = PolyScalar(d);
    }
    return p;
}

}  // namespace

PolyScalar hamiltonian_potential(const PolyMap& p_in, double tol) {
    check_field_shape(p_in);
    const PolyMap p = with_dim(p_in);
    const int d = static_cast<int>(p.size());
    const int n = d / 2;
    const int r = field_degree(p);
    if (r < 0) return PolyScalar(d);

    const double scale = std::max(1.0, max_abs_coeff(p));
    const TwoFormPoly residual = contraction_differential(p);
    if (residual.max_abs_coeff() > tol * scale)
        throw PreconditionError("vector field is not symplectic: d(i_P omega) != 0",
                                {{"residual_form", to_json(residual)}});

    // H = −zᵀJP/(r+1); (JP)_i = P_{n+i}, (JP)_{n+i} = −P_i.
    PolyScalar h(d);
    for (int i = 0; i < n; ++i) {
        h += PolyScalar::variable(d, i).mul(p[static_cast<std::size_t>(n + i)]);
        h -= PolyScalar::variable(d, n + i).mul(p[static_cast<std::size_t>(i)]);
    }
    h *= cplx(-1.0 / (r + 1));

    const double err = distance(hamiltonian_field(h), p);
    if (err > tol * scale)
        throw NumericError("hamiltonian_potential: J grad H does not reproduce the field", {{"residual", err}});
    return h;
}

long long monomial_count(int nvars, int d) {
    // binom(nvars − 1 + d, d)
    long long r = 1;
    for (int i = 1; i <= d; ++i) r = r * (nvars - 1 + i) / i;
    return r;
}

PolyScalar linear_form_power(const Vec& b, int d) {
    const int dim = static_cast<int>(b.size());
    const int n = dim / 2;
    // bᵀJz = Σ u_k z_k with u_i = −b_{n+i}, u_{n+i} = b_i.
    std::vector<cplx> u(static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = -b(n + i);
        u[static_cast<std::size_t>(n + i)] = b(i);
    }
    std::vector<double> fact(static_cast<std::size_t>(d + 1), 1.0);
    for (int i = 1; i <= d; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;

    PolyScalar out(dim);
    for (const auto& m : monomials_of_degree(dim, d)) {
        cplx c = fact[static_cast<std::size_t>(d)];
        for (int k = 0; k < dim; ++k) {
            c /= fact[static_cast<std::size_t>(m[k])];
            c *= std::pow(u[static_cast<std::size_t>(k)], m[k]);
        }
        out.add_term(m, c);
    }
    return out;
}

namespace {

Mat power_matrix(const std::vector<Vec>& basis, const std::vector<MultiIndex>& monos, int d) {
    Mat a(static_cast<Eigen::Index>(monos.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const PolyScalar p = linear_form_power(basis[j], d);
        for (std::size_t i = 0; i < monos.size(); ++i)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.coeff(monos[i]);
    }
    return a;
}

}  // namespace

std::vector<Vec> linear_form_power_basis(int n, int d, std::uint64_t seed,
                                         const std::function<bool(const Vec&)>& admissible,
                                         const BasisOptions& opts) {
    if (d < 1) throw PreconditionError("linear_form_power_basis: degree must be at least 1");
    if (n < 1) throw PreconditionError("linear_form_power_basis: n must be at least 1");
    const int dim = 2 * n;
    const auto count = static_cast<std::size_t>(monomial_count(dim, d));
    const auto monos = monomials_of_degree(dim, d);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto noise = [&](double s) { return cplx(s * gauss(rng), s * gauss(rng)); };
    auto perturb = [&](Vec& b, double s) {
        for (int i = 0; i < dim; ++i) b(i) += noise(s);
        b /= b.norm();
    };

    std::vector<Vec> basis(count, Vec(dim));
    for (auto& b : basis) {
        for (int i = 0; i < dim; ++i) b(i) = noise(1.0);
        b /= b.norm();
    }

    for (int round = 0; round < opts.max_rounds; ++round) {
        bool all_ok = true;
        if (admissible) {
            for (auto& b : basis) {
                if (!admissible(b)) {
                    all_ok = false;
                    perturb(b, 0.25);
                }
            }
        }
        if (!all_ok) continue;
        Eigen::PartialPivLU<Mat> lu(power_matrix(basis, monos, d));
        const double rc = lu.rcond();
        if (rc > 0.0 && 1.0 / rc <= opts.max_condition) return basis;
        for (auto& b : basis) perturb(b, 0.1);
    }
    throw NumericError("linear_form_power_basis: no well-conditioned admissible basis found",
                       {{"n", n}, {"degree", d}, {"rounds", opts.max_rounds}});
}

PolyMap HamiltonianDecomposition::resum() const {
    if (directions.empty()) return {};
    const int dim = static_cast<int>(directions.front().size());
    PolyMap out(static_cast<std::size_t>(dim), PolyScalar(dim));
    for (std::size_t j = 0; j < directions.size(); ++j) {
        const PolyScalar pw = linear_form_power(directions[j], degree) * coefficients[j];
        for (int i = 0; i < dim; ++i) {
            if (directions[j](i) != cplx(0.0)) out[static_cast<std::size_t>(i)] += pw * directions[j](i);
        }
    }
    return out;
}

constexpr std::uint64_t kBasisCandidates = 6;

HamiltonianDecomposition hamiltonian_decompose(const PolyMap& p_in, int k, std::uint64_t seed,
                                               const std::function<bool(const Vec&)>& admissible, double tol) {
    check_field_shape(p_in);
    const PolyMap p = with_dim(p_in);
    const int dim = static_cast<int>(p.size());
    const int n = dim / 2;
    if (k < 1) throw PreconditionError("hamiltonian_decompose: degree must be at least 1");
    const int r = field_degree(p);
    if (r >= 0 && r != k)
        throw PreconditionError("hamiltonian_decompose: field has degree " + std::to_string(r) + ", expected " +
                                std::to_string(k));

    const PolyScalar h = hamiltonian_potential(p, tol);
    const auto monos = monomials_of_degree(dim, k + 1);
    Vec rhs(static_cast<Eigen::Index>(monos.size()));
    for (std::size_t i = 0; i < monos.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = h.coeff(monos[i]);

    // Among a few seeded bases keep the one with the least coefficient mass;
    // large cancelling coefficients would otherwise leak into the higher
    // orders of the realizing shears.
    HamiltonianDecomposition out;
    out.degree = k;
    double best_mass = INFINITY;
    for (std::uint64_t cand = 0; cand < kBasisCandidates; ++cand) {
        std::vector<Vec> dirs = linear_form_power_basis(n, k + 1, seed + 0x9e3779b97f4a7c15ULL * cand, admissible);
        const Vec ct = power_matrix(dirs, monos, k + 1).partialPivLu().solve(rhs);
        // ∇(bᵀJz)^{k+1} = (k+1)(bᵀJz)^k Jᵀb and J Jᵀ = I, so J∇ of each basis
        // power is +(k+1)(bᵀJz)^k b.
        std::vector<cplx> coeffs(dirs.size());
        double mass = 0.0;
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            coeffs[j] = static_cast<double>(k + 1) * ct(static_cast<Eigen::Index>(j));
            mass += std::abs(coeffs[j]) * std::pow(dirs[j].norm(), k + 1);
        }
        if (mass < best_mass) {
            best_mass = mass;
            out.directions = std::move(dirs);
            out.coefficients = std::move(coeffs);
        }
    }

    const double scale = std::max(1.0, max_abs_coeff(p));
    const double err = distance(out.resum(), p);
    if (err > 1e-7 * scale)
        throw NumericError("hamiltonian_decompose: resummation does not reproduce the field", {{"residual", err}});
    return out;
}

}  // namespace sympjet
