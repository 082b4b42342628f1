#include <doctest.h>

#include "../support.hpp"
#include "sympjet/symplectic.hpp"

using namespace sympjet;
using namespace sympjet::testing;

namespace {

PolyScalar var(int nvars, int i) { return PolyScalar::variable(nvars, i); }

long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_SUITE("symplectic_core") {

TEST_CASE("pullback defect of the identity vanishes") {
    CHECK(pullback_defect(JetMap::identity(Vec::Zero(4), 3)).max_abs_coeff() == 0.0);
}

TEST_CASE("pullback defect of shear jets vanishes") {
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 3;
        const Word w = random_shear_word(rng, n, 1, 4, 0.5);
        const JetMap jet = word_jet(w, random_vec(rng, 2 * n), 4);
        const double scale = std::max(1.0, max_abs_coeff(jet.components()));
        CHECK(pullback_defect(jet).max_abs_coeff() / (scale * scale) < 1e-14);
    }
}

TEST_CASE("pullback defect of (z1^2, z2) is 2 z1 - 1") {
    const Vec zero = Vec::Zero(2);
    const JetMap f(zero, 3, {var(2, 0) * var(2, 0), var(2, 1)});
    const TwoFormPoly d = pullback_defect(f);
    REQUIRE(d.coeffs.size() == 1);
    const auto& [key, g] = *d.coeffs.begin();
    CHECK(key == std::pair<int, int>{0, 1});
    const PolyScalar expected = 2.0 * var(2, 0) - PolyScalar::constant(2, 1.0);
    CHECK(g.distance(expected) < 1e-15);
}

TEST_CASE("symplectic order") {
    const Vec zero = Vec::Zero(2);
    const PolyScalar z1 = var(2, 0), z2 = var(2, 1);
    CHECK(symplectic_order(JetMap::identity(zero, 4)) == 3);
    CHECK(symplectic_order(JetMap(zero, 4, {z1 + z1 * z1 * z1, z2})) == 2);
    CHECK(symplectic_order(JetMap(zero, 4, {z1 * z1, z2})) == 0);
}

TEST_CASE("Hamiltonian potential of (z1^2, -2 z1 z2) is z1^2 z2") {
    const PolyScalar z1 = var(2, 0), z2 = var(2, 1);
    const PolyMap p = {z1 * z1, -2.0 * z1 * z2};
    const PolyScalar h = hamiltonian_potential(p);
    CHECK(h.distance(z1 * z1 * z2) < 1e-14);
    CHECK(distance(hamiltonian_field(h), p) < 1e-14);
}

TEST_CASE("zero field has zero potential") {
    const PolyMap p = {PolyScalar(2), PolyScalar(2)};
    CHECK(hamiltonian_potential(p).max_abs_coeff() == 0.0);
}

TEST_CASE("divergent field has no potential") {
    const PolyScalar z1 = var(2, 0);
    const PolyMap p = {z1 * z1, PolyScalar(2)};
    CHECK_THROWS_AS(hamiltonian_potential(p), PreconditionError);
}

TEST_CASE("linear form power basis sizes") {
    CHECK(linear_form_power_basis(1, 1, 1).size() == 2);
    CHECK(linear_form_power_basis(1, 2, 1).size() == 3);
    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= 4; ++k) {
            CHECK(linear_form_power_basis(n, k + 1, 7).size() == static_cast<std::size_t>(binom(2 * n + k, 2 * n - 1)));
            CHECK(monomial_count(2 * n, k + 1) == binom(2 * n + k, 2 * n - 1));
        }
}

TEST_CASE("decomposition of (z1^2, -2 z1 z2) has 4 terms and resums") {
    const PolyScalar z1 = var(2, 0), z2 = var(2, 1);
    const PolyMap p = {z1 * z1, -2.0 * z1 * z2};
    const HamiltonianDecomposition dec = hamiltonian_decompose(p, 2, 5);
    CHECK(dec.directions.size() == 4);
    CHECK(distance(dec.resum(), p) < 1e-8);
}

TEST_CASE("decomposition of the zero field has zero coefficients") {
    const PolyMap p = {PolyScalar(2), PolyScalar(2)};
    const HamiltonianDecomposition dec = hamiltonian_decompose(p, 2, 5);
    for (const cplx c : dec.coefficients) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("round trip through a random potential") {
    Rng rng(22);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 3;
        const int k = 1 + t % 4;
        const PolyScalar h = random_poly(rng, 2 * n, k + 1, k + 1, 1.0);
        const PolyMap p = hamiltonian_field(h);
        CHECK(hamiltonian_potential(p).distance(h) < 1e-8);
        CHECK(distance(hamiltonian_decompose(p, k, 100 + t).resum(), p) < 1e-8);
    }
}

TEST_CASE("lambda is alternating") {
    Rng rng(23);
    const Vec v = random_vec(rng, 4), w = random_vec(rng, 4);
    CHECK(std::abs(lambda(v, v)) < 1e-14);
    CHECK(std::abs(lambda(v, w) + lambda(w, v)) < 1e-13);
}

}  // TEST_SUITE
