#include <doctest.h>

#include <cmath>

#include "einselect/channels.hpp"
#include "einselect/error.hpp"
#include "helpers.hpp"

using namespace einselect;

TEST_SUITE("channels") {

TEST_CASE("continuum channels: unitary operators and kernel weights") {
    BathModel b;
    b.cutoff = 0.5;
    b.coupling = 0.3;
    b.temperature = 0.2;
    b.n_k = 96;
    const auto ops = build_operators({1.0, 1.0, 12});
    const auto ch = build_channels(b, ops);
    CHECK(ch.size() == 96);
    CHECK(ch.directional_count() == 192);
    CHECK(max_unitarity_error(ch) < 1e-12);
    for (std::size_t j = 0; j < ch.size(); ++j) {
        CHECK(ch.c_prime(j, 0.0) == 0.0);
        CHECK(ch.c(j, 0.0) == ch.amp_H[j]);
        CHECK(ch.c(j, 1.3) == doctest::Approx(ch.amp_H[j] * std::cos(ch.omega[j] * 1.3)));
    }
    // S = exp(i k x)
    const Matrix expected = matrix_exp_unitary(ops.x, ch.k[5]);
    CHECK(test::max_abs(ch.S[5] - expected) < 1e-12);
}

// Expanding exp(ikx) to second order: both directions together weight k^2 by
// 2 amp_H, which must sum to e^2 F_H(0) (and likewise for the retarded part).
TEST_CASE("dipole moments of the channel weights equal the kernels") {
    BathModel b;
    b.cutoff = 0.8;
    b.coupling = 0.4;
    b.temperature = 1.5;
    b.spatial_dim = 3;
    const auto ops = build_operators({1.0, 1.0, 6});
    const auto ch = build_channels(b, ops);
    const auto nodes = build_k_nodes(b);
    for (double t : {0.0, 0.7, 2.1}) {
        double h = 0.0, r = 0.0;
        for (std::size_t j = 0; j < ch.size(); ++j) {
            h += 2.0 * ch.c(j, t) * ch.k[j] * ch.k[j];
            r += 2.0 * ch.c_prime(j, t) * ch.k[j] * ch.k[j];
        }
        CHECK(h == doctest::Approx(0.4 * dipole_symmetric(nodes, b, t)).epsilon(1e-12));
        CHECK(r == doctest::Approx(0.4 * dipole_retarded(nodes, b, t)).epsilon(1e-12));
    }
}

TEST_CASE("discrete channels need (k, -k) pairs") {
    const auto ops = build_operators({1.0, 1.0, 6});
    const std::vector<DiscreteMode> paired{{1.0, 0.5, 0.3, 3}, {1.0, 0.5, -0.3, 3}};
    const auto ch = build_discrete_channels(paired, 0.0, 2.0, ops);
    REQUIRE(ch.size() == 1);
    CHECK(ch.amp_H[0] == doctest::Approx(2.0 * 0.25));
    CHECK(ch.amp_R[0] == doctest::Approx(2.0 * 0.25));
    const std::vector<DiscreteMode> lone{{1.0, 0.5, 0.3, 3}};
    CHECK_THROWS_AS(build_discrete_channels(lone, 0.0, 1.0, ops), Error);
    const std::vector<DiscreteMode> mismatched{{1.0, 0.5, 0.3, 3}, {1.2, 0.5, -0.3, 3}};
    CHECK_THROWS_AS(build_discrete_channels(mismatched, 0.0, 1.0, ops), Error);
}

}
