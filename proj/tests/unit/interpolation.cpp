#include <doctest.h>

#include "../support.hpp"
#include "sympjet/interpolation.hpp"

using namespace sympjet;
using namespace sympjet::testing;

namespace {

Vec e(int dim, int i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    return v;
}

PolyScalar var(int nvars, int i) { return PolyScalar::variable(nvars, i); }

// Jet of z ↦ z + t at p.
JetMap translation(const Vec& p, const Vec& t, int order) {
    return JetMap::linear(p, Mat::Identity(p.size(), p.size()), order, p + t);
}

}  // namespace

TEST_SUITE("interpolation") {

TEST_CASE("lambda images of the lattice under e~12 are 2 alpha") {
    const int n = 2;
    const Vec v = -(e(2 * n, 0) + e(2 * n, 1));
    std::vector<Vec> pts;
    for (int a = 1; a <= 5; ++a) pts.push_back(static_cast<double>(a) * delta_vector(2 * n));
    const LambdaImageReport rep = lambda_image_check(pts, v);
    CHECK(rep.injective);
    for (int a = 1; a <= 5; ++a) CHECK(std::abs(rep.images[static_cast<std::size_t>(a - 1)] - cplx(2.0 * a)) < 1e-14);

    const Vec f = e(2 * n, n) + e(2 * n, n + 1);
    const LambdaImageReport rf = lambda_image_check(pts, f);
    for (int a = 1; a <= 5; ++a) CHECK(std::abs(rf.images[static_cast<std::size_t>(a - 1)] - cplx(2.0 * a)) < 1e-14);

    const LambdaImageReport rd = lambda_image_check(pts, -e(2 * n, 0));
    for (int a = 1; a <= 5; ++a) CHECK(std::abs(rd.images[static_cast<std::size_t>(a - 1)] - cplx(a)) < 1e-14);
}

TEST_CASE("lambda of the lattice along Delta vanishes") {
    std::vector<Vec> pts;
    for (int a = 1; a <= 3; ++a) pts.push_back(static_cast<double>(a) * delta_vector(4));
    const LambdaImageReport rep = lambda_image_check(pts, delta_vector(4));
    CHECK_FALSE(rep.injective);
    for (const cplx z : rep.images) CHECK(std::abs(z) < 1e-14);
    CHECK(lambda_image_check({delta_vector(4)}, delta_vector(4)).injective);
}

TEST_CASE("stage budget splits eps evenly") {
    const StageBudget b = stage_budget(1e-3, 4, 3);
    CHECK(b.stages == 5);
    CHECK(b.per_stage_eps == doctest::Approx(2e-4));
}

TEST_CASE("tame normalizer with identity targets fixes the points") {
    const int d = 4;
    const std::vector<Vec> targets = {delta_vector(d), 2.0 * delta_vector(d), 3.0 * delta_vector(d)};
    const Word w = tame_normalizer(targets, {1, 1, 1});
    for (int j = 1; j <= 3; ++j) {
        const Vec x = static_cast<double>(j) * delta_vector(d);
        CHECK((word_apply(w, x) - x).norm() < 1e-9);
    }
}

TEST_CASE("tame normalizer sends Delta to 5 Delta") {
    const Word w = tame_normalizer({5.0 * delta_vector(2)}, {0});
    CHECK((word_apply(w, delta_vector(2)) - 5.0 * delta_vector(2)).norm() < 1e-9);
}

TEST_CASE("tame normalizer agrees with translations to order 2") {
    const int d = 4;
    const std::vector<Vec> targets = {-1.5 * delta_vector(d), 4.0 * delta_vector(d)};
    const Word w = tame_normalizer(targets, {2, 2});
    for (int j = 1; j <= 2; ++j) {
        const Vec x = static_cast<double>(j) * delta_vector(d);
        const JetMap jet = word_jet(w, x, 2);
        CHECK(jet.distance(translation(x, targets[static_cast<std::size_t>(j - 1)] - x, 2)) < 1e-8);
    }
}

TEST_CASE("point mover from e1 to Delta is one shear") {
    const MoverResult m = point_mover(e(4, 0), delta_vector(4), {}, 1e-3, 1);
    CHECK(m.word.size() == 1);
    CHECK_FALSE(m.two_stage);
    CHECK((word_apply(m.word, e(4, 0)) - delta_vector(4)).norm() < 1e-12);
}

TEST_CASE("point mover from 0 to Delta needs two stages") {
    const MoverResult m = point_mover(Vec::Zero(4), delta_vector(4), {}, 1e-3, 2);
    CHECK(m.two_stage);
    CHECK((word_apply(m.word, Vec::Zero(4)) - delta_vector(4)).norm() < 1e-9);
}

TEST_CASE("point mover fixes a constraint point exactly and translates to order k") {
    Rng rng(61);
    const Vec p = random_vec(rng, 4, 0.5), q = random_vec(rng, 4, 0.5);
    StageConstraints c;
    c.fixpoints.push_back(3.0 * delta_vector(4));
    c.flats.push_back({-2.0 * delta_vector(4), 2});
    const MoverResult m = point_mover(p, q, c, 1e-3, 3, 2);
    CHECK((word_apply(m.word, c.fixpoints[0]) - c.fixpoints[0]).norm() == 0.0);
    CHECK(word_jet(m.word, c.flats[0].point, 1).distance(JetMap::identity(c.flats[0].point, 1)) < 1e-8);
    CHECK(word_jet(m.word, p, 2).distance(translation(p, q - p, 2)) < 1e-8);
}

TEST_CASE("linear stage of the identity is empty") {
    CHECK(linear_stage(SympMatrix(Mat::Identity(2, 2)), {}, 1e-3, 1).word.empty());
}

TEST_CASE("linear stage of [[1, 1], [0, 1]] is one linear shear") {
    Mat q(2, 2);
    q << 1.0, 1.0, 0.0, 1.0;
    const StageResult s = linear_stage(SympMatrix(q), {}, 1e-3, 2);
    CHECK(s.word.size() == 1);
    CHECK((linear_part(word_jet(s.word, Vec::Zero(2), 1)) - q).norm() < 1e-12);
}

TEST_CASE("linear stage fixes lattice points") {
    Rng rng(62);
    const FactorWord src = [&] {
        FactorWord w;
        w.n = 2;
        for (int i = 0; i < 4; ++i) w.factors.emplace_back(random_elem(rng, 2, 0.5));
        return w;
    }();
    const Mat q = product(src);
    StageConstraints c;
    for (int i = 1; i <= 3; ++i) c.fixpoints.push_back(static_cast<double>(i) * delta_vector(4));
    const StageResult s = linear_stage(SympMatrix(q), c, 1e-3, 3);
    CHECK((linear_part(word_jet(s.word, Vec::Zero(4), 1)) - q).norm() < 1e-8);
    for (const auto& x : c.fixpoints) CHECK((word_apply(s.word, x) - x).norm() == 0.0);
}

TEST_CASE("higher stage of the identity is empty") {
    CHECK(higher_stage(JetMap::identity(Vec::Zero(2), 2), 2, {}, 1e-3, 1).word.empty());
}

TEST_CASE("higher stage reproduces (z1^2, -2 z1 z2)") {
    const Vec zero = Vec::Zero(2);
    const PolyScalar z1 = var(2, 0), z2 = var(2, 1);
    const JetMap residual(zero, 2, {z1 + z1 * z1, z2 - 2.0 * z1 * z2});
    const StageResult s = higher_stage(residual, 2, {}, 1e-3, 4);
    CHECK(s.word.size() == 4);
    const JetMap back = jet_compose(residual, jet_invert(word_jet(s.word, zero, 2)));
    CHECK(max_abs_coeff(homogeneous_part(back, 2)) < 1e-8);
}

TEST_CASE("higher stage is flat at a constraint point") {
    const Vec zero = Vec::Zero(2);
    const PolyScalar z1 = var(2, 0), z2 = var(2, 1);
    const JetMap residual(zero, 2, {z1 + z1 * z1, z2 - 2.0 * z1 * z2});
    StageConstraints c;
    c.flats.push_back({(Vec(2) << cplx(1.5, 0.5), cplx(-0.5, 1.0)).finished(), 3});
    const StageResult s = higher_stage(residual, 2, c, 1e-3, 5);
    CHECK(word_jet(s.word, c.flats[0].point, 2).distance(JetMap::identity(c.flats[0].point, 2)) < 1e-8);
}

TEST_CASE("identity job gives the empty word") {
    InterpolationJob job;
    job.jet = JetMap::identity(delta_vector(2), 3);
    CHECK(finite_jet_interpolate(job).word.empty());
}

TEST_CASE("oracle jobs are interpolated") {
    for (int n = 1; n <= 2; ++n) {
        const InterpolationJob job = oracle_job(n, 3, 700 + static_cast<std::uint64_t>(n));
        const InterpolationResult res = finite_jet_interpolate(job);
        const VerifyReport rep = word_verify(res.word, verification_request(job));
        CHECK(rep.passed());
        CHECK(res.stage_sizes.size() == 3);
    }
}

TEST_CASE("linear target with a lattice fixpoint") {
    Mat q(2, 2);
    q << 1.0, 1.0, 0.0, 1.0;
    const Vec zero = Vec::Zero(2);
    InterpolationJob job;
    job.jet = JetMap::linear(zero, q, 1, zero);
    job.fixpoints.push_back(2.0 * delta_vector(2));
    const InterpolationResult res = finite_jet_interpolate(job);
    CHECK((linear_part(word_jet(res.word, zero, 1)) - q).norm() < 1e-8);
    CHECK((word_apply(res.word, job.fixpoints[0]) - job.fixpoints[0]).norm() < 1e-9);
}

TEST_CASE("a single multi-point job matches its jet") {
    Rng rng(63);
    MultiPointOptions opts;
    opts.horizon = 4;
    opts.seed = 9;
    const std::vector<MultiPointJob> jobs = {{1, anchored_jet(rng, 1, 1, 2)}};
    const MultiPointResult res = multi_point_stage(jobs, opts);
    CHECK(res.stages.size() == 1);
    for (const auto& c : multi_point_check(jobs, res, opts)) CHECK(c.ok);
}

TEST_CASE("two stacked jets at Delta and 2 Delta") {
    MultiPointOptions opts;
    opts.horizon = 6;
    opts.seed = 10;
    Rng rng(64);
    std::vector<MultiPointJob> jobs;
    for (int a = 1; a <= 2; ++a) jobs.push_back({a, anchored_jet(rng, 2, a, 2)});
    const MultiPointResult res = multi_point_stage(jobs, opts);
    const auto checks = multi_point_check(jobs, res, opts);
    REQUIRE(checks.size() == 2);
    for (const auto& c : checks) CHECK(c.ok);
    for (int i = 3; i <= opts.horizon; ++i) {
        const Vec x = static_cast<double>(i) * delta_vector(4);
        CHECK((word_apply(res.word, x) - x).norm() < 1e-9);
    }
}

TEST_CASE("identity multi-point jobs fix the lattice") {
    MultiPointOptions opts;
    opts.horizon = 5;
    std::vector<MultiPointJob> jobs;
    for (int a = 1; a <= 2; ++a) jobs.push_back({a, JetMap::identity(static_cast<double>(a) * delta_vector(2), 2)});
    const MultiPointResult res = multi_point_stage(jobs, opts);
    CHECK(res.word.empty());
    for (const auto& c : multi_point_check(jobs, res, opts)) CHECK(c.ok);
}

}  // TEST_SUITE
