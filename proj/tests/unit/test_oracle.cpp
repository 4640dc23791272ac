#include <doctest.h>

#include <cmath>

#include "einselect/error.hpp"
#include "einselect/oracle.hpp"
#include "einselect/quadrature.hpp"
#include "helpers.hpp"

using namespace einselect;
using test::max_abs;

namespace {

JointModel one_mode(double omega, double e, int ds = 4, int trunc = 3) {
    JointModel m;
    m.system = {1.0, 1.0, ds};
    m.modes = {{omega, 1.0, 0.0, trunc}};
    m.e = e;
    return m;
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("zero coupling reduces to unitary system evolution") {
    auto m = one_mode(1.3, 0.0, 6);
    m.modes.push_back({0.4, 1.0, 0.0, 2});
    const auto rho0 = DensityMatrix::pure(test::basis_superposition(6, 0, 2, 0.4));
    const auto grid = uniform_grid(3.0, 0.5);
    const auto r = evolve_exact(m, rho0, grid);
    const auto ops = build_operators(m.system);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Matrix expected = rho0.matrix();
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) expected(a, b) *= std::polar(1.0, -ops.bohr(a, b) * grid[i]);
        CHECK(trace_distance(r.reduced.rho[i], expected) < 1e-12);
    }
}

TEST_CASE("resonant exchange conserves energy and norm while the reduced state mixes") {
    const auto m = one_mode(1.0, 0.05);
    const auto grid = uniform_grid(30.0, 0.5);
    const auto r = evolve_exact(m, DensityMatrix::fock(1, 4), grid);
    CHECK(r.max_energy_drift < 1e-10);
    CHECK(r.max_norm_drift < 1e-10);
    CHECK(r.reduced.linear_entropy.front() < 1e-14);
    CHECK(r.reduced.linear_entropy.back() > 1e-3);
    double min_p1 = 1.0;
    for (const auto& rho : r.reduced.rho) min_p1 = std::min(min_p1, rho(1, 1).real());
    CHECK(min_p1 < 0.9);  // excitation flows into the mode
}

TEST_CASE("mode order does not matter") {
    JointModel a;
    a.system = {1.0, 1.0, 4};
    a.modes = {{0.5, 1.0, 0.0, 2}, {1.7, 0.6, 0.0, 3}};
    a.e = 0.2;
    JointModel b = a;
    std::swap(b.modes[0], b.modes[1]);
    const auto rho0 = coherent_state(0.4, 4, 1e-2);
    const auto grid = uniform_grid(4.0, 1.0);
    const auto ra = evolve_exact(a, rho0, grid), rb = evolve_exact(b, rho0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(max_abs(ra.reduced.rho[i] - rb.reduced.rho[i]) < 1e-12);
}

// Dressing of the joint vacuum: x (b + b^dagger) mixes |0,0> with |1,1> at
// amplitude ~ e g x_char / (W + w); the oscillating part can at most double it.
TEST_CASE("vacuum stays nearly pure under weak coupling") {
    JointModel m;
    m.system = {1.0, 1.0, 4};
    m.modes = {{0.5, 1.0, 0.0, 3}, {1.7, 1.0, 0.0, 3}};
    m.e = 0.05;
    const auto r = evolve_exact(m, DensityMatrix::fock(0, 4), uniform_grid(20.0, 0.25));
    double bound = 0.0;
    for (const auto& mode : m.modes) {
        const double amp = m.e * mode.coupling * m.system.x_char() / (1.0 + mode.omega);
        bound += 8.0 * amp * amp;
    }
    double loss = 0.0;
    for (double l : r.reduced.linear_entropy) loss = std::max(loss, l);
    CHECK(loss > 0.0);
    CHECK(loss < bound);
}

TEST_CASE("thermal ensembles") {
    auto m = one_mode(1.0, 0.05, 4, 4);
    ExactOptions o;
    o.temperature = 0.3;
    const auto r = evolve_exact(m, DensityMatrix::fock(0, 4), uniform_grid(2.0, 1.0), o);
    CHECK(r.members > 1);
    CHECK(r.gibbs_truncation < 1e-4);
    CHECK(r.reduced.max_trace_error() < 1e-12);
    o.temperature = 5.0;
    try {
        evolve_exact(m, DensityMatrix::fock(0, 4), uniform_grid(2.0, 1.0), o);
        FAIL("expected a Gibbs truncation error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::truncation);
    }
}

TEST_CASE("joint model validation") {
    JointModel big;
    big.system = {1.0, 1.0, 16};
    big.modes = {{0.5, 1, 0, 4}, {1.7, 1, 0, 4}, {2.9, 1, 0, 4}};
    CHECK(big.joint_dim() == 2000);
    big.modes.push_back({3.5, 1, 0, 1});
    CHECK(big.joint_dim() == 4000);
    big.modes.push_back({4.5, 1, 0, 1});
    try {
        big.validate();
        FAIL("expected a cap violation");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::config);
    }
    const auto h = joint_hamiltonian(one_mode(0.7, 0.3));
    CHECK(max_antihermitian(h) < 1e-15);
    CHECK(parse_coupling_form(to_string(CouplingForm::exponential)) == CouplingForm::exponential);
}

TEST_CASE("scaling check: zero coupling has zero error") {
    const auto m = one_mode(1.7, 1.0, 6, 2);
    ScalingOptions o;
    o.steps = 200;
    const auto rep = perturbative_scaling_check(m, coherent_state(0.3, 6, 1e-6), {0.0}, 2 * kPi, o);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].delta < 1e-12);
}

TEST_CASE("exponential coupling: master equation tracks the exact reduced state") {
    JointModel m;
    m.system = {1.0, 1.0, 6};
    m.form = CouplingForm::exponential;
    m.modes = {{1.4, 1.0, 0.4, 2}, {1.4, 1.0, -0.4, 2}};
    ScalingOptions o;
    o.steps = 400;
    const auto rep = perturbative_scaling_check(m, DensityMatrix::pure(test::basis_superposition(6, 0, 1)),
                                                {0.2, 0.1}, 2 * kPi, o);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[1].delta < rep.rows[0].delta);
    CHECK(rep.rows[1].ratio > 4.0);
    CHECK(rep.engine.find("channels") != std::string::npos);
}

}
