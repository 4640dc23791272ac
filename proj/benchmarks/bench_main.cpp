#include <benchmark/benchmark.h>

#include <cmath>

#include "einselect/bath.hpp"
#include "einselect/channels.hpp"
#include "einselect/coeffs.hpp"
#include "einselect/oracle.hpp"
#include "einselect/quadrature.hpp"
#include "einselect/secular.hpp"
#include "einselect/sieve.hpp"
#include "einselect/solvers.hpp"
#include "einselect/states.hpp"

using namespace einselect;

namespace {

BathModel slow_bath(int n_k) {
    BathModel b;
    b.cutoff = 0.01;
    b.window = WindowKind::gaussian;
    b.coupling = 1e-3;
    b.n_k = n_k;
    return b;
}

void BM_KernelTable(benchmark::State& state) {
    const auto b = slow_bath(static_cast<int>(state.range(0)));
    const auto grid = uniform_grid(2 * kPi, 2 * kPi / 400);
    for (auto _ : state) benchmark::DoNotOptimize(build_kernel_table(b, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_KernelTable)->Arg(64)->Arg(256)->Arg(1024);

// one Bohr period of the channel equation, 200 RK4 steps
void BM_ChannelsPeriod(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto ops = build_operators({8e-6, 1.0, d});
    auto b = slow_bath(64);
    b.coupling = 1e-5;
    const auto ch = build_channels(b, ops);
    Vector v = Vector::Zero(d);
    v(0) = v(1) = 1.0 / std::sqrt(2.0);
    const auto rho0 = DensityMatrix::pure(v);
    SolverOptions o;
    o.t_max = 2 * kPi;
    o.dt = 2 * kPi / 200;
    o.compute_spectra = false;
    for (auto _ : state) benchmark::DoNotOptimize(evolve_channels(rho0, ch, ops, o));
}
BENCHMARK(BM_ChannelsPeriod)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_QbmRhs(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto ops = build_operators({1.0, 1.0, d});
    const Matrix rho = coherent_state(1.0, d).matrix();
    const CoefficientTable::Sample s{1.0, 0.01, 0.02, -0.005};
    for (auto _ : state) benchmark::DoNotOptimize(qbm_rhs(rho, s, ops));
}
BENCHMARK(BM_QbmRhs)->Arg(16)->Arg(32)->Arg(64);

void BM_QbmPeriod(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const SystemParams sys{1.0, 1.0, d};
    const auto ops = build_operators(sys);
    BathModel b;
    b.cutoff = 1.0;
    b.coupling = 0.02;
    const double dt = 2 * kPi / 200;
    const auto c = build_coefficients(build_kernel_table(b, uniform_grid(2 * kPi, dt / 2)), sys, b.coupling);
    const auto rho0 = coherent_state(1.0, d);
    SolverOptions o;
    o.t_max = 2 * kPi;
    o.dt = dt;
    o.compute_spectra = false;
    for (auto _ : state) benchmark::DoNotOptimize(evolve_qbm(rho0, c, ops, o));
}
BENCHMARK(BM_QbmPeriod)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SecularRates(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto ops = build_operators({8e-6, 1.0, d});
    const auto ch = build_channels(slow_bath(64), ops);
    for (auto _ : state) benchmark::DoNotOptimize(secular_rates(ch, ops));
}
BENCHMARK(BM_SecularRates)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

// exact joint evolution of the default three-mode oracle
void BM_OracleExact(benchmark::State& state) {
    JointModel m;
    m.system = {1.0, 1.0, static_cast<int>(state.range(0))};
    m.modes = {{0.5, 1.0, 0.0, 4}, {1.7, 1.0, 0.0, 4}, {2.9, 1.0, 0.0, 4}};
    m.e = 0.1;
    const auto rho0 = coherent_state(0.7, m.system.fock_dim, 1e-6);
    const std::vector<double> grid{0.0, kPi, 2 * kPi};
    for (auto _ : state) benchmark::DoNotOptimize(evolve_exact(m, rho0, grid));
    state.counters["joint_dim"] = m.joint_dim();
}
BENCHMARK(BM_OracleExact)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SieveSuperpositions(benchmark::State& state) {
    const int d = 24;
    const auto ops = build_operators({8e-6, 1.0, d});
    const auto rates = secular_rates(build_channels(slow_bath(64), ops), ops);
    SolverOptions o;
    o.t_max = 10 * kPi;
    o.dt = 2 * kPi / 200;
    const auto engine = make_secular_engine(rates, ops, o);
    StateFamily f;
    f.dim = d;
    f.kind = FamilyKind::two_state_superpositions;
    f.pairs = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
    f.phases = {0.0, kPi / 2};
    const auto cands = generate_family(f).states;
    for (auto _ : state) benchmark::DoNotOptimize(run_sieve(cands, engine, {2 * kPi, 6 * kPi, 10 * kPi}));
}
BENCHMARK(BM_SieveSuperpositions)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
