#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "sympjet/tame_sets.hpp"

using namespace sympjet;
using namespace sympjet::testing;

namespace {

Vec vec(std::initializer_list<cplx> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const cplx x : xs) v(i++) = x;
    return v;
}

Vec grad(const PolyScalar& f, const Vec& w) {
    Vec g(f.nvars());
    for (int i = 0; i < f.nvars(); ++i) g(i) = f.derivative(i).eval(w);
    return g;
}

Mat projection_onto(const Vec& u) { return u * u.adjoint() / u.squaredNorm(); }

}  // namespace

TEST_SUITE("tame_sets") {

TEST_CASE("gradient interpolant through one point is linear") {
    const Vec v = vec({cplx(1.0, 2.0), -3.0});
    const PolyScalar f = gradient_interpolant({Vec::Zero(2)}, {v});
    Rng rng(71);
    const Vec w = random_vec(rng, 2);
    CHECK((grad(f, w) - v).norm() < 1e-12);
}

TEST_CASE("gradient 0 at 0 and 2 at 1 gives w^2") {
    const PolyScalar f = gradient_interpolant({vec({0.0}), vec({1.0})}, {vec({0.0}), vec({2.0})});
    for (const cplx w : {cplx(0.5), cplx(-1.0, 2.0)}) CHECK(std::abs(grad(f, vec({w}))(0) - 2.0 * w) < 1e-10);
}

TEST_CASE("zero targets give a zero gradient") {
    const PolyScalar f = gradient_interpolant({vec({0.0, 1.0}), vec({2.0, 0.0})}, {Vec::Zero(2), Vec::Zero(2)});
    CHECK(grad(f, vec({0.3, 0.7})).norm() < 1e-12);
}

TEST_CASE("gradient interpolation on random points") {
    Rng rng(72);
    std::vector<Vec> pts, tgt;
    for (int i = 0; i < 6; ++i) {
        pts.push_back(random_vec(rng, 2));
        tgt.push_back(random_vec(rng, 2));
    }
    const PolyScalar f = gradient_interpolant(pts, tgt);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK((grad(f, pts[i]) - tgt[i]).norm() < 1e-8);
}

TEST_CASE("Lagrangian tame word on a diagonal set") {
    DiscreteSet e;
    for (int k = 1; k <= 4; ++k) e.points.push_back(vec({static_cast<double>(k), 0.0, 0.0, static_cast<double>(k)}));
    const Word w = lagrangian_tame_word(e);
    for (int k = 1; k <= 4; ++k) {
        const Vec target = vec({static_cast<double>(k), 0.0, 0.0, 0.0});
        CHECK((word_apply(w, e.points[static_cast<std::size_t>(k - 1)]) - target).norm() < 1e-8);
    }
}

TEST_CASE("Lagrangian tame word on a desk set") {
    DiscreteSet e;
    for (int k = 1; k <= 5; ++k) {
        const double x = k;
        e.points.push_back(vec({x * x, cplx(0.0, x), x, -0.5 * x}));
    }
    const Word w = lagrangian_tame_word(e);
    for (int k = 1; k <= 5; ++k) {
        Vec target = Vec::Zero(4);
        target(0) = static_cast<double>(k);
        CHECK((word_apply(w, e.points[static_cast<std::size_t>(k - 1)]) - target).norm() < 1e-8);
    }
}

TEST_CASE("repeated fiber coordinates are rejected") {
    DiscreteSet e;
    e.points = {vec({1.0, 2.0}), vec({3.0, 2.0})};
    CHECK_THROWS_AS(lagrangian_tame_word(e), PreconditionError);
}

TEST_CASE("fiber separation places fibers in nested annuli") {
    auto check = [](const DiscreteSet& e, std::size_t fibers) {
        const FiberSeparation s = fiber_separation(e);
        REQUIRE(s.fibers.size() == fibers);
        REQUIRE(s.radii.size() == fibers + 1);
        for (std::size_t k = 0; k + 1 < s.radii.size(); ++k) CHECK(s.radii[k] < s.radii[k + 1]);
        const int n = static_cast<int>(e.points.front().size() / 2);
        for (std::size_t k = 0; k < fibers; ++k)
            for (const std::size_t i : s.fibers[k]) {
                const Vec moved = word_apply(s.word, e.points[i]);
                const double r = moved.head(n).norm();
                CHECK(r > s.radii[k]);
                CHECK(r < s.radii[k + 1]);
            }
    };
    DiscreteSet singletons;
    singletons.points = {vec({1.0, 0.0}), vec({2.0, 1.0}), vec({3.0, 2.0})};
    check(singletons, 3);

    DiscreteSet shared;
    shared.points = {vec({1.0, 5.0}), vec({4.0, 5.0})};
    check(shared, 1);

    DiscreteSet mixed;
    mixed.points = {vec({1.0, 0.0}), vec({-2.0, 0.0}), vec({0.5, 1.0}),
                    vec({3.0, 2.0}), vec({-1.0, 2.0}), vec({cplx(0.0, 2.0), 2.0})};
    check(mixed, 3);
}

TEST_CASE("set split by |z| against |w|") {
    DiscreteSet onz;
    onz.points = {vec({1.0, 0.0}), vec({2.0, 0.0})};
    CHECK(set_split(onz).second.points.empty());

    DiscreteSet tie;
    tie.points = {vec({1.0, 1.0})};
    CHECK(set_split(tie).first.points.size() == 1);

    DiscreteSet mixed;
    mixed.points = {vec({3.0, 1.0}), vec({1.0, 3.0}), vec({2.0, 2.0}), vec({0.0, 1.0}), vec({cplx(0.0, 5.0), 4.0}),
                    vec({-1.0, -2.0})};
    const auto [e1, e2] = set_split(mixed);
    CHECK(e1.points.size() == 3);
    CHECK(e2.points.size() == 3);
}

TEST_CASE("plane embedding acts on one symplectic plane") {
    const int n = 2;
    const PolyScalar x = PolyScalar::variable(2, 0), y = PolyScalar::variable(2, 1);
    const PlaneEmbedding id = plane_embed(x, y, 0, n);
    Rng rng(73);
    const Vec z = random_vec(rng, 4);
    CHECK((id.apply(z) - z).norm() == 0.0);

    const PlaneEmbedding phi = plane_embed(x + y * y, y, 0, n);
    const Vec out = phi.apply(z);
    CHECK(std::abs(out(0) - (z(0) + z(2) * z(2))) < 1e-14);
    CHECK(out(1) == z(1));
    CHECK(out(2) == z(2));
    CHECK(out(3) == z(3));
    const Mat g = phi.jacobian(z);
    const Mat j = symplectic_form(n);
    CHECK((g.transpose() * j * g - j).norm() < 1e-13);

    const PlaneEmbedding rot = plane_embed(2.0 * x + y, x + y, 1, n);
    const Mat gr = rot.jacobian(z);
    CHECK((gr.transpose() * j * gr - j).norm() < 1e-13);
}

TEST_CASE("a plane map without unit Jacobian is rejected") {
    const PolyScalar x = PolyScalar::variable(2, 0), y = PolyScalar::variable(2, 1);
    CHECK_THROWS_AS(plane_embed(2.0 * x, y, 0, 1), PreconditionError);
}

TEST_CASE("projection bound at the identity") {
    const Vec u = vec({0.0, 1.0});
    const BoundCheck b = projection_bound_check(Mat::Identity(2, 2), projection_onto(vec({1.0, 0.0})), u);
    CHECK(b.lhs == doctest::Approx(1.0));
    CHECK(b.rhs == doctest::Approx(1.0));
    CHECK(b.holds);
}

TEST_CASE("projection bound is an equality in dimension 2") {
    Rng rng(74);
    for (int t = 0; t < 20; ++t) {
        Mat a(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = random_cplx(rng);
        a /= std::sqrt(a.determinant());
        const Vec p = random_vec(rng, 2);
        const Vec u = vec({-std::conj(p(1)), std::conj(p(0))}) / p.norm();
        const BoundCheck b = projection_bound_check(a, projection_onto(p), u);
        CHECK(b.lhs == doctest::Approx(b.rhs).epsilon(1e-10));
    }
}

TEST_CASE("projection bound fails for diag(1, 1/10, 10)") {
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 0.1;
    a(2, 2) = 10.0;
    const BoundCheck b = projection_bound_check(a, projection_onto(vec({1.0, 0.0, 0.0})), vec({0.0, 1.0, 0.0}));
    CHECK(b.lhs == doctest::Approx(10.0));
    CHECK(b.rhs == doctest::Approx(1.0));
    CHECK_FALSE(b.holds);
}

TEST_CASE("shell sequence and widths at a1 = 1.5") {
    const ShellConstants c = shell_constants(1.5, 4, 1000);
    CHECK(c.a[0] == 1.5);
    CHECK(c.a[1] == doctest::Approx(2.5));
    CHECK(c.a[2] == doctest::Approx(2.75));
    CHECK(c.a[3] == doctest::Approx(2.75 + 1.0 / 9.0));
    // (2/3)^2 ((a3 - a2)/3)^3 = (4/9)(1/12)^3
    CHECK(c.delta[0] == doctest::Approx(1.0 / 3888.0).epsilon(1e-12));
    for (std::size_t j = 0; j < c.delta.size(); ++j) {
        const double jj = static_cast<double>(j + 1);
        const double closed = std::pow(2.0 / (jj + 2.0), 2) * std::pow(1.0 / (3.0 * (jj + 1.0) * (jj + 1.0)), 3);
        CHECK(c.delta[j] == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("a-sequence limit") {
    const ShellConstants c = shell_constants(1.5, 2, 1000000);
    CHECK(std::abs(c.partial - c.limit) <= c.tail_bound);
    CHECK(std::abs(c.limit - (1.5 + M_PI * M_PI / 6.0)) < 1e-15);
}

TEST_CASE("rr_delta with no gap is zero") { CHECK(rr_delta(2.0, 2.0, 1.0, 3) == 0.0); }

TEST_CASE("single shell is covered") {
    const ShellSet s = unavoidable_set(2, 1, 1.5, 8, 1.5e-5);
    REQUIRE(s.shells.size() == 1);
    const auto certs = covering_certificate(s, 10000, 5);
    REQUIRE(certs.size() == 1);
    CHECK(certs[0].covered);
    CHECK(certs[0].max_distance <= s.shells[0].delta);
    CHECK(certs[0].sphere_count > 0);
    CHECK(certs[0].sphere_radius_error < 1e-12);
}

TEST_CASE("degenerate box is the origin") {
    const ShellSet s = unavoidable_set(2, 2, 1.5, 6, 0.0);
    for (const auto& sh : s.shells) {
        REQUIRE(sh.box.size() == 1);
        CHECK(sh.box[0].norm() == 0.0);
    }
}

TEST_CASE("sphere points lie on their radius and are finite in number") {
    const ShellSet s = unavoidable_set(2, 3, 1.5, 8, 1.5e-5);
    for (const auto& sh : s.shells) {
        CHECK_FALSE(sh.sphere.empty());
        for (const auto& x : sh.sphere) CHECK(x.norm() == doctest::Approx(static_cast<double>(sh.j)));
    }
}

}  // TEST_SUITE
