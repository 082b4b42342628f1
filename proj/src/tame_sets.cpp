#include "sympjet/tame_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sympjet/symplectic.hpp"

namespace sympjet {

void DiscreteSet::validate(double tol) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != points.front().size() || points[i].size() % 2 != 0)
            throw PreconditionError("discrete set: inconsistent or odd dimension", {{"index", i}});
        for (std::size_t j = 0; j < i; ++j) {
            if ((points[i] - points[j]).norm() <= tol * (1.0 + points[i].norm()))
                throw PreconditionError("discrete set: repeated point", {{"index", i}, {"repeats", j}});
        }
    }
}

PolyScalar gradient_interpolant(const std::vector<Vec>& points, const std::vector<Vec>& targets, int max_degree) {
    if (points.size() != targets.size()) throw PreconditionError("gradient_interpolant: size mismatch");
    if (points.empty()) return {};
    const int n = static_cast<int>(points.front().size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].size() != n || targets[k].size() != n)
            throw PreconditionError("gradient_interpolant: dimension mismatch", {{"index", k}});
        for (std::size_t l = 0; l < k; ++l) {
            if ((points[k] - points[l]).norm() <= tolerance() * (1.0 + points[k].norm()))
                throw PreconditionError("gradient_interpolant: repeated point", {{"index", k}});
        }
    }
    double tscale = 1.0;
    Vec rhs(static_cast<Eigen::Index>(n * points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) {
        rhs.segment(static_cast<Eigen::Index>(k) * n, n) = targets[k];
        tscale = std::max(tscale, targets[k].cwiseAbs().maxCoeff());
    }
    if (rhs.cwiseAbs().maxCoeff() == 0.0) return PolyScalar(n);

    double last = INFINITY;
    for (int deg = 1; deg <= max_degree; ++deg) {
        std::vector<MultiIndex> monos;
        for (int d = 1; d <= deg; ++d) {
            for (const auto& m : monomials_of_degree(n, d)) monos.push_back(m);
        }
        // Row (k, i): ∂_i of each monomial at w_k; columns scaled to unit max.
        Mat a(rhs.size(), static_cast<Eigen::Index>(monos.size()));
        for (std::size_t c = 0; c < monos.size(); ++c) {
            const PolyScalar mono = PolyScalar::monomial(monos[c], 1.0);
            for (int i = 0; i < n; ++i) {
                const PolyScalar di = mono.derivative(i);
                for (std::size_t k = 0; k < points.size(); ++k)
                    a(static_cast<Eigen::Index>(k) * n + i, static_cast<Eigen::Index>(c)) = di.eval(points[k]);
            }
        }
        Eigen::VectorXd colscale(a.cols());
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            const double m = a.col(c).cwiseAbs().maxCoeff();
            colscale(c) = m > 0.0 ? m : 1.0;
            a.col(c) /= colscale(c);
        }
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
        const Vec y = cod.solve(rhs);
        last = (a * y - rhs).cwiseAbs().maxCoeff();
        if (last <= 1e-11 * tscale) {
            PolyScalar f(n);
            for (std::size_t c = 0; c < monos.size(); ++c) f.add_term(monos[c], y(static_cast<Eigen::Index>(c)) / colscale(static_cast<Eigen::Index>(c)));
            f.normalize(1e-14 * tscale);
            double worst = 0.0;
            for (std::size_t k = 0; k < points.size(); ++k) {
                for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(f.derivative(i).eval(points[k]) - targets[k](i)));
            }
            if (worst <= 1e-9 * tscale) return f;
            last = worst;
        }
    }
    throw NumericError("gradient_interpolant: degree cap reached", {{"max_degree", max_degree}, {"residual", last}});
}

namespace {

std::pair<Vec, Vec> halves(const Vec& p) {
    const auto n = p.size() / 2;
    return {p.head(n), p.tail(n)};
}

}  // namespace

Word lagrangian_tame_word(const DiscreteSet& e) {
    e.validate();
    if (e.points.empty()) return {};
    const int n = static_cast<int>(e.points.front().size() / 2);
    std::vector<Vec> ws;
    std::vector<Vec> first_targets;
    std::vector<Vec> lattice;
    std::vector<Vec> second_targets;
    for (std::size_t k = 0; k < e.points.size(); ++k) {
        const auto [z, w] = halves(e.points[k]);
        for (std::size_t l = 0; l < ws.size(); ++l) {
            if ((ws[l] - w).norm() <= tolerance() * (1.0 + w.norm()))
                throw PreconditionError("lagrangian_tame_word: projection to the w-block is not injective; use fiber_separation",
                                        {{"index", k}, {"collides_with", l}});
        }
        ws.push_back(w);
        const Vec ke1 = static_cast<double>(k + 1) * Vec::Unit(n, 0);
        first_targets.push_back(-z + ke1);
        lattice.push_back(ke1);
        second_targets.push_back(-w);
    }
    GradShear psi1{GradSide::first, gradient_interpolant(ws, first_targets)};
    GradShear psi2{GradSide::second, gradient_interpolant(lattice, second_targets)};
    return Word{{psi2, psi1}};
}

FiberSeparation fiber_separation(const DiscreteSet& e) {
    e.validate();
    FiberSeparation out;
    if (e.points.empty()) return out;
    const int n = static_cast<int>(e.points.front().size() / 2);
    std::vector<Vec> ws;
    for (std::size_t k = 0; k < e.points.size(); ++k) {
        const Vec w = halves(e.points[k]).second;
        std::size_t f = 0;
        while (f < ws.size() && (ws[f] - w).norm() > tolerance() * (1.0 + w.norm())) ++f;
        if (f == ws.size()) {
            ws.push_back(w);
            out.fibers.emplace_back();
        }
        out.fibers[f].push_back(k);
    }

    double r = 0.0;
    out.radii.push_back(r);
    for (const auto& fib : out.fibers) {
        double zmin = INFINITY;
        double zmax = 0.0;
        for (auto idx : fib) {
            const double m = halves(e.points[idx]).first.norm();
            zmin = std::min(zmin, m);
            zmax = std::max(zmax, m);
        }
        Vec b = Vec::Zero(n);
        if (!(zmin > r)) b(0) = r + 1.0 + zmax;
        double outer = 0.0;
        for (auto idx : fib) outer = std::max(outer, (halves(e.points[idx]).first + b).norm());
        r = outer + 1.0;
        out.offsets.push_back(b);
        out.radii.push_back(r);
    }
    out.word.factors.push_back(GradShear{GradSide::first, gradient_interpolant(ws, out.offsets)});
    return out;
}

std::pair<DiscreteSet, DiscreteSet> set_split(const DiscreteSet& e) {
    std::pair<DiscreteSet, DiscreteSet> out;
    for (const auto& p : e.points) {
        const auto [z, w] = halves(p);
        (z.norm() >= w.norm() ? out.first : out.second).points.push_back(p);
    }
    return out;
}

Vec PlaneEmbedding::apply(const Vec& z) const {
    if (z.size() != 2 * n) throw PreconditionError("plane embedding: dimension mismatch");
    const cplx args[2] = {z(j), z(n + j)};
    Vec out = z;
    out(j) = phi1.eval(args);
    out(n + j) = phi2.eval(args);
    return out;
}

Mat PlaneEmbedding::jacobian(const Vec& z) const {
    const cplx args[2] = {z(j), z(n + j)};
    Mat out = Mat::Identity(2 * n, 2 * n);
    out(j, j) = phi1.derivative(0).eval(args);
    out(j, n + j) = phi1.derivative(1).eval(args);
    out(n + j, j) = phi2.derivative(0).eval(args);
    out(n + j, n + j) = phi2.derivative(1).eval(args);
    return out;
}

JetMap PlaneEmbedding::jet(const Vec& p, int m) const {
    const int d = 2 * n;
    const JetMap id = JetMap::identity(p, m);
    PolyMap comps = id.components();
    const PolyScalar args[2] = {id[j], id[n + j]};
    comps[static_cast<std::size_t>(j)] = substitute(phi1, args, m);
    comps[static_cast<std::size_t>(n + j)] = substitute(phi2, args, m);
    (void)d;
    return JetMap(p, m, std::move(comps));
}

PlaneEmbedding plane_embed(const PolyScalar& phi1, const PolyScalar& phi2, int j, int n, std::uint64_t seed) {
    if (n < 1 || j < 0 || j >= n) throw PreconditionError("plane_embed: plane index out of range");
    auto lift = [](const PolyScalar& p) { return p.nvars() == 0 && p.empty() ? PolyScalar(2) : p; };
    PlaneEmbedding e{n, j, lift(phi1), lift(phi2)};
    if (e.phi1.nvars() != 2 || e.phi2.nvars() != 2) throw PreconditionError("plane_embed: components must be polynomials in 2 variables");
    PolyScalar det = e.phi1.derivative(0).mul(e.phi2.derivative(1)) - e.phi1.derivative(1).mul(e.phi2.derivative(0));
    det.add_term(MultiIndex(2), -1.0);
    const double scale = std::max({1.0, e.phi1.max_abs_coeff(), e.phi2.max_abs_coeff()});
    if (det.max_abs_coeff() > tolerance() * scale * scale)
        throw PreconditionError("plane_embed: Jacobian determinant is not identically 1", {{"defect", det.max_abs_coeff()}});

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 4; ++s) {
        Vec p(2 * n);
        for (int i = 0; i < 2 * n; ++i) p(i) = cplx(gauss(rng), gauss(rng));
        const JetMap jet = e.jet(p, 3);
        const double jscale = std::max(1.0, max_abs_coeff(jet.components()));
        if (pullback_defect(jet).max_abs_coeff() > 1e-9 * jscale * jscale)
            throw NumericError("plane_embed: embedding failed the symplectic jet check");
    }
    return e;
}

BoundCheck projection_bound_check(const Mat& a, const Mat& p, const Vec& u, double tol) {
    const auto n = a.rows();
    if (a.cols() != n || p.rows() != n || p.cols() != n || u.size() != n)
        throw PreconditionError("projection_bound_check: dimension mismatch");
    const double det_err = std::abs(a.determinant() - 1.0);
    if (det_err > tol * 1e3) throw PreconditionError("projection_bound_check: det A != 1", {{"det_error", det_err}});
    if ((p * p - p).cwiseAbs().maxCoeff() > tol * 1e3 || (p - p.adjoint()).cwiseAbs().maxCoeff() > tol * 1e3)
        throw PreconditionError("projection_bound_check: P is not an orthogonal projection");
    const int k = static_cast<int>(std::lround(p.trace().real()));
    if (k < 1 || k >= n) throw PreconditionError("projection_bound_check: rank must lie in 1..n-1", {{"rank", k}});
    if (std::abs(u.norm() - 1.0) > tol * 1e3 || (p * u).norm() > tol * 1e3)
        throw PreconditionError("projection_bound_check: u must be a unit vector in ker P");

    BoundCheck out;
    out.lhs = a.partialPivLu().solve(u).norm();
    Eigen::JacobiSVD<Mat> svd(p * a);
    out.rhs = std::pow(svd.singularValues()(0), k);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-12;
    return out;
}

BoundAudit projection_bound_audit(int trials, std::uint64_t seed, int max_dim) {
    BoundAudit out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto randmat = [&](int r, int c) {
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
        return m;
    };
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, max_dim - 1)));
        const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        Mat a = randmat(n, n);
        a /= std::pow(a.determinant(), 1.0 / n);
        const Mat q = Eigen::HouseholderQR<Mat>(randmat(n, n)).householderQ();
        const Mat basis = q.leftCols(k);
        const Mat p = basis * basis.adjoint();
        Vec u = q.rightCols(n - k) * randmat(n - k, 1);
        u /= u.norm();
        const BoundCheck c = projection_bound_check(a, p, u, 1e-9);
        ++out.trials;
        if (c.holds) ++out.passed;
        out.worst_ratio = std::max(out.worst_ratio, c.lhs / c.rhs);
    }
    return out;
}

ShellConstants shell_constants(double a1, int count, long long terms) {
    if (!(a1 > 1.0)) throw PreconditionError("shell_constants: a1 must exceed 1", {{"a1", a1}});
    if (count < 1 || terms < 1) throw PreconditionError("shell_constants: counts must be positive");
    ShellConstants out;
    out.a1 = a1;
    out.terms = terms;
    out.a.push_back(a1);
    for (int k = 1; k < count + 2; ++k) out.a.push_back(out.a.back() + 1.0 / (static_cast<double>(k) * k));
    for (int j = 1; j <= count; ++j) {
        const double gap = out.a[static_cast<std::size_t>(j + 1)] - out.a[static_cast<std::size_t>(j)];
        out.delta.push_back(rr_delta(0.0, gap, j + 2, 2));
    }
    out.a.resize(static_cast<std::size_t>(count));
    long double sum = 0.0L;
    for (long long k = terms; k >= 1; --k) sum += 1.0L / (static_cast<long double>(k) * k);
    out.partial = static_cast<double>(static_cast<long double>(a1) + sum);
    out.limit = a1 + std::numbers::pi * std::numbers::pi / 6.0;
    out.tail_bound = 1.0 / static_cast<double>(terms);
    return out;
}

double rr_delta(double a1, double a2, double r, int k) {
    if (!(r > 0.0) || k < 1) throw PreconditionError("rr_delta: need r > 0 and k >= 1");
    return std::pow(k / r, k) * std::pow((a2 - a1) / (k + 1), k + 1);
}

ShellSet unavoidable_set(int n, int j_max, double a1, int res, double box_radius) {
    if (n < 2) throw PreconditionError("unavoidable_set: n must be at least 2");
    if (j_max < 1 || res < 2) throw PreconditionError("unavoidable_set: need j_max >= 1 and resolution >= 2");
    if (!(box_radius >= 0.0)) throw PreconditionError("unavoidable_set: negative box radius");
    const ShellConstants sc = shell_constants(a1, j_max, 1);
    ShellSet out;
    out.n = n;
    out.a1 = a1;
    out.resolution = res;
    out.box_radius = box_radius;
    const int dims = 4 * n - 4;  // real dimension of ℂ^{2n−2}
    const double two_pi = 2.0 * std::numbers::pi;

    for (int j = 1; j <= j_max; ++j) {
        Shell sh;
        sh.j = j;
        sh.delta = sc.delta[static_cast<std::size_t>(j - 1)];
        // (j cosθ e^{iφ₁}, j sinθ e^{iφ₂}); the poles θ ∈ {0, π/2} need one angle only.
        for (int t = 0; t <= res; ++t) {
            const double th = 0.5 * std::numbers::pi * t / res;
            const int n1 = t == res ? 1 : res;
            const int n2 = t == 0 ? 1 : res;
            for (int a = 0; a < n1; ++a) {
                for (int b = 0; b < n2; ++b) {
                    Vec z(2);
                    z(0) = j * std::cos(th) * std::polar(1.0, two_pi * a / res);
                    z(1) = j * std::sin(th) * std::polar(1.0, two_pi * b / res);
                    sh.sphere.push_back(z);
                }
            }
        }
        // Cell centres of a cubic grid on [−R, R]^dims with cell diagonal < 2δ_j.
        const double hmax = 2.0 * sh.delta / std::sqrt(static_cast<double>(dims));
        const int cells = box_radius == 0.0 ? 1 : static_cast<int>(std::floor(2.0 * box_radius / hmax)) + 1;
        const double h = box_radius == 0.0 ? 0.0 : 2.0 * box_radius / cells;
        sh.cells_per_axis = cells;
        sh.spacing = h;
        long long total = 1;
        for (int i = 0; i < dims; ++i) total *= cells;
        if (total > 20000000LL)
            throw PreconditionError("unavoidable_set: box net too large for the requested radius",
                                    {{"j", j}, {"points", total}});
        std::vector<int> idx(static_cast<std::size_t>(dims), 0);
        for (long long c = 0; c < total; ++c) {
            Vec z(2 * n - 2);
            for (int i = 0; i < 2 * n - 2; ++i) {
                const double re = -box_radius + (idx[static_cast<std::size_t>(2 * i)] + 0.5) * h;
                const double im = -box_radius + (idx[static_cast<std::size_t>(2 * i + 1)] + 0.5) * h;
                z(i) = cplx(box_radius == 0.0 ? 0.0 : re, box_radius == 0.0 ? 0.0 : im);
            }
            sh.box.push_back(z);
            for (int i = 0; i < dims && ++idx[static_cast<std::size_t>(i)] == cells; ++i) idx[static_cast<std::size_t>(i)] = 0;
        }
        out.shells.push_back(std::move(sh));
    }
    return out;
}

std::vector<ShellCertificate> covering_certificate(const ShellSet& s, int samples, std::uint64_t seed) {
    std::vector<ShellCertificate> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-s.box_radius, s.box_radius);
    const int dims = 4 * s.n - 4;
    for (const auto& sh : s.shells) {
        ShellCertificate c;
        c.j = sh.j;
        c.samples = samples;
        c.sphere_count = static_cast<int>(sh.sphere.size());
        for (const auto& z : sh.sphere) c.sphere_radius_error = std::max(c.sphere_radius_error, std::abs(z.norm() - sh.j));

        std::vector<double> flat;
        flat.reserve(sh.box.size() * static_cast<std::size_t>(dims));
        for (const auto& z : sh.box) {
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                flat.push_back(z(i).real());
                flat.push_back(z(i).imag());
            }
        }
        const double d2 = sh.delta * sh.delta;
        std::vector<double> x(static_cast<std::size_t>(dims));
        bool all = !sh.box.empty();
        for (int t = 0; t < samples; ++t) {
            for (auto& v : x) v = unif(rng);
            double best = INFINITY;
            for (std::size_t p = 0; p < sh.box.size() && best >= d2; ++p) {
                double acc = 0.0;
                const double* q = flat.data() + p * static_cast<std::size_t>(dims);
                for (int i = 0; i < dims; ++i) acc += (x[static_cast<std::size_t>(i)] - q[i]) * (x[static_cast<std::size_t>(i)] - q[i]);
                best = std::min(best, acc);
            }
            c.max_distance = std::max(c.max_distance, std::sqrt(best));
            all = all && best < d2;
        }
        c.covered = all;
        out.push_back(c);
    }
    return out;
}

}  // namespace sympjet
