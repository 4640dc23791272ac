#include <doctest.h>

#include <cmath>

#include "einselect/bath.hpp"
#include "einselect/channels.hpp"
#include "einselect/coeffs.hpp"
#include "einselect/error.hpp"
#include "einselect/quadrature.hpp"
#include "einselect/solvers.hpp"
#include "einselect/states.hpp"
#include "helpers.hpp"

using namespace einselect;
using test::max_abs;

namespace {

CoefficientTable coefficients(const BathModel& b, const SystemParams& sys, double t_max, double dt) {
    return build_coefficients(build_kernel_table(b, uniform_grid(t_max, dt)), sys, b.coupling);
}

SolverOptions options(double t_max, double dt) {
    SolverOptions o;
    o.t_max = t_max;
    o.dt = dt;
    return o;
}

double unwrap_slope(const Trajectory& tr, int n, int m) {
    // least-squares slope of the unwrapped phase of rho_nm
    std::vector<double> ph;
    double prev = 0.0, offset = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        double a = std::arg(tr.rho[i](n, m));
        if (i > 0) {
            while (a + offset - prev > kPi) offset -= 2 * kPi;
            while (a + offset - prev < -kPi) offset += 2 * kPi;
        }
        prev = a + offset;
        ph.push_back(prev);
    }
    double st = 0, sp = 0, stt = 0, stp = 0;
    const double N = static_cast<double>(ph.size());
    for (std::size_t i = 0; i < ph.size(); ++i) {
        st += tr.t[i];
        sp += ph[i];
        stt += tr.t[i] * tr.t[i];
        stp += tr.t[i] * ph[i];
    }
    return (N * stp - st * sp) / (N * stt - st * st);
}

} // namespace

TEST_SUITE("solvers") {

TEST_CASE("closed system: harmonic recurrence and zero entropy") {
    const SystemParams sys{1.0, 1.0, 16};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 0.01;
    b.coupling = 0.0;
    const double dt = 2 * kPi / 1000;
    const auto c = coefficients(b, sys, 2 * kPi, dt / 2);
    const auto rho0 = coherent_state(cplx(1.0, 0.5), 16);
    const auto tr = evolve_qbm(rho0, c, ops, options(2 * kPi, dt));
    CHECK(max_abs(tr.final_state() - rho0.matrix()) < 1e-8);
    for (double s : tr.entropy) CHECK(s == 0.0);

    const auto ch = build_channels(b, ops);
    const auto tc = evolve_channels(rho0, ch, ops, options(2 * kPi, dt));
    REQUIRE(tc.size() == tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) CHECK(max_abs(tc.rho[i] - tr.rho[i]) < 1e-13);
}

TEST_CASE("adiabatic bath: energy eigenstates keep their populations") {
    const SystemParams sys{};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 0.01;
    const double t_max = 20 * kPi, dt = 2 * kPi / 200;
    const auto c = coefficients(b, sys, t_max, dt / 2);
    for (int n : {0, 2}) {
        const auto tr = evolve_qbm(DensityMatrix::fock(n, 16), c, ops, options(t_max, dt));
        double dev = 0.0;
        for (const auto& r : tr.rho) dev = std::max(dev, std::abs(r(n, n).real() - 1.0));
        CHECK(dev < 1e-4);
    }
}

TEST_CASE("QBM right-hand side structure") {
    const auto ops = build_operators({1.0, 1.0, 10});
    std::mt19937 rng(3);
    const Matrix rho = test::random_state(10, rng).matrix();
    CoefficientTable::Sample s{0.3, 0.05, 0.7, -0.2};
    const Matrix r = qbm_rhs(rho, s, ops);
    CHECK(std::abs(r.trace()) < 1e-13);
    CHECK(max_antihermitian(r) < 1e-13);

    CoefficientTable::Sample d_only{0.0, 0.0, 0.7, 0.0};
    const Matrix expected = -cplx(0.0, 1.0) * commutator(ops.H, rho) - 0.7 * commutator(ops.x, commutator(ops.x, rho));
    CHECK(max_abs(qbm_rhs(rho, d_only, ops) - expected) < 1e-13);

    CoefficientTable::Sample f_only{0.0, 0.0, 0.0, 0.4};
    const Matrix fx = 0.4 * commutator(ops.x, commutator(ops.p, rho));
    const Matrix h = -cplx(0.0, 1.0) * commutator(ops.H, rho);
    CHECK(max_abs(qbm_rhs(rho, f_only, ops, AnomalousSign::plus) - (h + fx)) < 1e-13);
    CHECK(max_abs(qbm_rhs(rho, f_only, ops, AnomalousSign::minus) - (h - fx)) < 1e-13);
}

TEST_CASE("adjoint initial state gives the adjoint trajectory") {
    const SystemParams sys{1.0, 1.0, 12};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 2.0;
    b.coupling = 0.05;
    b.temperature = 0.5;
    const double dt = 2 * kPi / 200;
    const auto c = coefficients(b, sys, 2 * kPi, dt / 2);
    Matrix m = 0.5 * Matrix::Identity(12, 12) / 12.0;
    Vector v = test::basis_superposition(12, 0, 2, 0.7);
    m += 0.5 * v * v.adjoint();
    m(1, 3) = cplx(0.01, 0.02);
    m(3, 1) = std::conj(m(1, 3));
    const DensityMatrix rho0(m);
    auto o = options(2 * kPi, dt);
    o.truncation_tol = 1.0;  // the mixture occupies every level on purpose
    const auto a = evolve_qbm(rho0, c, ops, o);
    const auto bb = evolve_qbm(rho0.adjoint(), c, ops, o);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_abs(a.rho[i].adjoint() - bb.rho[i]) < 1e-12);
}

TEST_CASE("dissipative evolution: trace, Hermiticity, positivity, entropy onset") {
    const SystemParams sys{1.0, 1.0, 14};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 1.0;
    // the time-local channel equation is not completely positive; at e^2 = 0.05
    // it dips to a converged -2e-9, at 0.02 it stays above -1e-9
    b.coupling = 0.02;
    b.temperature = 0.3;
    b.n_k = 96;
    const double dt = 2 * kPi / 200;
    const auto rho0 = DensityMatrix::pure(test::basis_superposition(14, 0, 1));
    const auto c = coefficients(b, sys, 2 * kPi, dt / 2);
    const auto ch = build_channels(b, ops);
    for (const auto& tr : {evolve_qbm(rho0, c, ops, options(2 * kPi, dt)),
                           evolve_channels(rho0, ch, ops, options(2 * kPi, dt))}) {
        CHECK(tr.max_trace_error() < 1e-8 * 2 * kPi);
        CHECK(tr.max_hermiticity_error() < 1e-12);
        CHECK(tr.min_min_eigenvalue() > -1e-9);
        CHECK(tr.linear_entropy[1] >= 0.0);
        CHECK(tr.entropy[1] >= 0.0);
        CHECK(tr.linear_entropy.back() > 0.0);
    }
}

TEST_CASE("off-diagonal phase rotates at the Bohr frequency") {
    const SystemParams sys{1.0, 1.0, 16};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 0.01;
    b.coupling = 1.0;
    const auto ch = build_channels(b, ops);
    const auto tr = evolve_channels(DensityMatrix::pure(test::basis_superposition(16, 0, 3)), ch, ops,
                                    options(4 * kPi, 2 * kPi / 200));
    CHECK(unwrap_slope(tr, 0, 3) == doctest::Approx(-ops.bohr(0, 3)).epsilon(0.01));
    double pop = 0.0;
    for (const auto& r : tr.rho) pop = std::max({pop, std::abs(r(0, 0).real() - 0.5), std::abs(r(3, 3).real() - 0.5)});
    CHECK(pop < 1e-3);
}

TEST_CASE("RK4 step halving gives fourth order") {
    const SystemParams sys{1.0, 1.0, 12};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 2.0;
    b.coupling = 0.2;
    b.temperature = 1.0;
    b.n_k = 64;
    const double t_max = 2 * kPi, dt = 2 * kPi / 50;
    const auto c = coefficients(b, sys, t_max, dt / 8);
    const auto ch = build_channels(b, ops);
    const auto rho0 = coherent_state(0.8, 12, 1e-6);
    auto run = [&](bool channels) {
        return [&, channels](double h) {
            SolverOptions o = options(t_max, h);
            o.min_steps_per_period = 40;
            o.compute_spectra = false;
            o.truncation_tol = 1.0;
            return channels ? evolve_channels(rho0, ch, ops, o).final_state() : evolve_qbm(rho0, c, ops, o).final_state();
        };
    };
    const double rq = step_halving_ratio(run(false), dt);
    const double rc = step_halving_ratio(run(true), dt);
    CHECK(rq >= 10.0);
    CHECK(rq <= 24.0);
    CHECK(rc >= 10.0);
    CHECK(rc <= 24.0);
}

TEST_CASE("aborts and input checks") {
    const SystemParams sys{1.0, 1.0, 6};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 1.0;
    b.coupling = 50.0;
    const auto ch = build_channels(b, ops);
    try {
        evolve_channels(DensityMatrix::fock(3, 6), ch, ops, options(2 * kPi, 2 * kPi / 200));
        FAIL("expected a truncation abort");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::truncation);
    }
    try {
        evolve_channels(DensityMatrix::fock(0, 6), ch, ops, options(2 * kPi, 2 * kPi / 50));
        FAIL("expected a step-size rejection");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::config);
    }
    const auto c = coefficients(b, sys, kPi, kPi / 400);
    CHECK_THROWS_AS(evolve_qbm(DensityMatrix::fock(0, 6), c, ops, options(2 * kPi, 2 * kPi / 200)), Error);
    CHECK(parse_anomalous_sign(to_string(AnomalousSign::minus)) == AnomalousSign::minus);
}

TEST_CASE("record stride keeps the final step") {
    const SystemParams sys{1.0, 1.0, 8};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 0.01;
    b.coupling = 0.0;
    const auto c = coefficients(b, sys, 2 * kPi, kPi / 200);
    SolverOptions o = options(2 * kPi, 2 * kPi / 200);
    o.record_stride = 7;
    const auto tr = evolve_qbm(DensityMatrix::fock(1, 8), c, ops, o);
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == doctest::Approx(2 * kPi));
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.t[i] > tr.t[i - 1]);
    CHECK(tr.size() == 200 / 7 + 2);
}

}
