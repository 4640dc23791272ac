// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Criterion 7 audits the conservation diagnostics of every solver run made by
// criteria 1-5, plus an RK4 step-halving check per integrated equation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "einselect/bath.hpp"
#include "einselect/channels.hpp"
#include "einselect/coeffs.hpp"
#include "einselect/error.hpp"
#include "einselect/oracle.hpp"
#include "einselect/quadrature.hpp"
#include "einselect/secular.hpp"
#include "einselect/sieve.hpp"
#include "einselect/solvers.hpp"
#include "einselect/states.hpp"

using namespace einselect;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

// --- conservation log (criterion 7) -----------------------------------------

struct RunAudit {
    std::string name;
    double t_max = 0.0;
    double trace_error = 0.0;
    double hermiticity = 0.0;
    double min_eigenvalue = 0.0;
};
std::vector<RunAudit> g_runs;

struct HalvingAudit {
    std::string name;
    double ratio = 0.0;
};
std::vector<HalvingAudit> g_halving;

Trajectory audit(const std::string& name, Trajectory tr) {
    g_runs.push_back({name, tr.t.back(), tr.max_trace_error(), tr.max_hermiticity_error(), tr.min_min_eigenvalue()});
    return tr;
}

void halving(const std::string& name, const std::function<Matrix(double)>& final_state, double dt) {
    g_halving.push_back({name, step_halving_ratio(final_state, dt)});
}

// --- shared setups -----------------------------------------------------------

Vector superposition(int dim, int n, int m) {
    Vector v = Vector::Zero(dim);
    v(n) = v(m) = 1.0 / std::sqrt(2.0);
    return v;
}

// Light particle (x_char = 250) in a slow bath: k x_char ~ 1 inside the window.
BathModel adiabatic_bath(double e2) {
    BathModel b;
    b.cutoff = 0.01;
    b.window = WindowKind::gaussian;
    b.coupling = e2;
    b.n_k = 64;
    return b;
}
constexpr double kLightMass = 8e-6;

SolverOptions opts(double t_max, double dt) {
    SolverOptions o;
    o.t_max = t_max;
    o.dt = dt;
    return o;
}

// --- criteria ----------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    const double T = 2 * kPi;
    {
        const auto ops = build_operators({kLightMass, 1.0, 16});
        const auto ch = build_channels(adiabatic_bath(1e-5), ops);
        const auto rates = secular_rates(ch, ops);
        std::mt19937 rng(2024);
        std::normal_distribution<double> n(0.0, 1.0);
        Matrix g(16, 16);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) g(i, j) = cplx(n(rng), n(rng));
        Matrix r = g * g.adjoint();
        r /= r.trace().real();
        r = (0.5 * (r + r.adjoint())).eval();
        const DensityMatrix rho0(r);
        SolverOptions so = opts(10 * T, T / 200);
        so.truncation_tol = 1.0;  // a generic state fills every level; nothing moves in this engine anyway
        const auto tr = audit("c1 secular", evolve_secular(rho0, rates, ops, so));
        double dev = 0.0;
        for (const auto& s : tr.rho)
            for (int k = 0; k < 16; ++k) dev = std::max(dev, std::abs(s(k, k) - rho0(k, k)));
        o.detail << "secular max|drho_nn| = " << dev << "; ";
        o.require(dev == 0.0, "secular diagonals not exactly frozen");
    }
    {
        const int d = 20;
        const auto ops = build_operators({kLightMass, 1.0, d});
        const auto ch = build_channels(adiabatic_bath(1e-5), ops);
        // mixed state supported on the lowest eight levels
        std::mt19937 rng(7);
        std::normal_distribution<double> n(0.0, 1.0);
        Matrix g = Matrix::Zero(d, 8);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) g(i, j) = cplx(n(rng), n(rng));
        Matrix r = g * g.adjoint();
        r /= r.trace().real();
        r = (0.5 * (r + r.adjoint())).eval();
        const DensityMatrix rho0(r);
        const auto tr = audit("c1 channels", evolve_channels(rho0, ch, ops, opts(10 * T, T / 200)));
        double dev = 0.0;
        for (const auto& s : tr.rho)
            for (int k = 0; k < d; ++k) dev = std::max(dev, std::abs(s(k, k) - rho0(k, k)));
        o.detail << "channels max|drho_nn| over 10 periods = " << dev;
        o.require(dev < 1e-3, "channel diagonals drift >= 1e-3");
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    const double T = 2 * kPi;
    const int d = 16;
    const auto ops = build_operators({kLightMass, 1.0, d});
    const auto ch = build_channels(adiabatic_bath(1e-5), ops);
    const auto rates = secular_rates(ch, ops);
    const auto rho0 = DensityMatrix::pure(superposition(d, 0, 3));
    const double horizon = 4 * T, dt = T / 200;
    const auto tr = audit("c2 channels", evolve_channels(rho0, ch, ops, opts(horizon, dt)));

    // least squares of log|rho_03| on t^2 over t <= t_end; returns {slope, R^2}
    auto fit = [&](double t_end) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, n = 0;
        for (std::size_t i = 0; i < tr.size() && tr.t[i] <= t_end * (1 + 1e-12); ++i) {
            const double x = tr.t[i] * tr.t[i], y = std::log(std::abs(tr.rho[i](0, 3)));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
            n += 1;
        }
        const double cov = n * sxy - sx * sy;
        return std::pair{cov / (n * sxx - sx * sx), cov * cov / ((n * sxx - sx * sx) * (n * syy - sy * sy))};
    };
    const auto [slope, r2] = fit(horizon);
    const double r2_first = fit(T).second;
    const double predicted = rates.gamma_sq(0, 3) / 2;
    const double rel = std::abs(-slope - predicted) / predicted;
    o.detail << "R^2 = " << r2 << ", fitted exponent = " << -slope << ", gamma^2_03/2 = " << predicted
             << ", relative mismatch = " << rel << " (fit over 4 Bohr periods; first period alone R^2 = " << r2_first
             << ")";
    o.require(r2 > 0.99, "R^2 <= 0.99");
    o.require(rel < 0.05, "exponent mismatch >= 5%");

    // step halving on the same equation, over one period
    halving("channels (adiabatic, c1/c2)", [&](double h) {
        SolverOptions so = opts(T, h);
        so.min_steps_per_period = 25;
        so.compute_spectra = false;
        return evolve_channels(rho0, ch, ops, so).final_state();
    }, T / 25);
    return o;
}

std::vector<Candidate> family(const StateFamily& f) { return generate_family(f).states; }

Outcome criterion3a() {
    Outcome o;
    const double T = 2 * kPi;
    const int d = 24;
    const auto ops = build_operators({kLightMass, 1.0, d});
    const auto ch = build_channels(adiabatic_bath(1e-3), ops);
    const auto rates = secular_rates(ch, ops);
    const auto engine = make_secular_engine(rates, ops, opts(5 * T, T / 200));
    std::vector<Candidate> cands;
    StateFamily f;
    f.dim = d;
    f.kind = FamilyKind::number_states;
    f.n_max = 3;
    for (auto& c : family(f)) cands.push_back(c);
    f.kind = FamilyKind::coherent_grid;
    f.alphas = StateFamily::grid({-1.0, -0.5, 0.0, 0.5, 1.0}, {-1.0, -0.5, 0.0, 0.5, 1.0});
    for (auto& c : family(f))
        if (std::abs(c.params.alpha) > 0.0) cands.push_back(c);  // alpha = 0 is |0>
    f.kind = FamilyKind::two_state_superpositions;
    f.pairs = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
    f.phases = {0.0, kPi / 2, kPi};
    for (auto& c : family(f)) cands.push_back(c);

    const auto res = run_sieve(cands, engine, {T, 2 * T, 3 * T, 4 * T, 5 * T});
    double worst_number = 0.0, best_other = INFINITY;
    std::string best_other_label;
    int n_numbers = 0;
    for (const auto& r : res.records) {
        if (r.params.kind == FamilyKind::number_states) {
            worst_number = std::max(worst_number, r.score);
            ++n_numbers;
        } else if (r.params.kind == FamilyKind::two_state_superpositions || std::abs(r.params.alpha) >= 0.5 - 1e-12) {
            if (r.score < best_other) {
                best_other = r.score;
                best_other_label = r.label;
            }
        }
    }
    bool numbers_on_top = true;
    for (int i = 0; i < n_numbers; ++i) numbers_on_top = numbers_on_top && res.records[i].params.kind == FamilyKind::number_states;
    for (const auto& c : cands) audit("c3a secular " + c.params.label(), engine.evolve(c.rho));
    const double floor = 10.0 * std::max(worst_number, 1e-6);
    o.detail << "adiabatic: " << res.records.size() << " candidates, worst number-state score " << worst_number
             << ", best superposition/|alpha|>=0.5 score " << best_other << " (" << best_other_label << ")";
    o.require(numbers_on_top, "number states do not hold the top ranks");
    o.require(worst_number < 1e-6, "number-state score >= 1e-6");
    o.require(best_other >= floor, "some superposition or coherent state scores below 10x the number states");
    return o;
}

Outcome criterion3b() {
    Outcome o;
    const double T = 2 * kPi;
    const int d = 28;
    const double dt = T / 400, t_max = 2 * T;
    BathModel b;
    b.cutoff = 50.0;
    b.temperature = 100.0;
    b.window = WindowKind::exponential;
    b.coupling = 1e-4;
    b.n_k = 4096;
    const SystemParams sys{1.0, 1.0, d};
    const auto ops = build_operators(sys);
    const auto kernels = build_kernel_table(b, uniform_grid(t_max, dt / 8));
    const auto coeffs = build_coefficients(kernels, sys, b.coupling);
    const auto engine = make_qbm_engine(coeffs, ops, opts(t_max, dt));

    const int n_max = 3;
    std::vector<Candidate> cands;
    StateFamily f;
    f.dim = d;
    f.kind = FamilyKind::number_states;
    f.n_max = n_max;
    for (auto& c : family(f))
        if (c.params.n >= 1) cands.push_back(c);
    f.kind = FamilyKind::coherent_grid;
    for (int n = 1; n <= n_max; ++n) f.alphas.emplace_back(std::sqrt(static_cast<double>(n)), 0.0);
    for (auto& c : family(f)) cands.push_back(c);

    std::vector<double> checkpoints;
    for (int i = 1; i <= 8; ++i) checkpoints.push_back(i * T / 4);
    const auto res = run_sieve(cands, engine, checkpoints);
    for (const auto& r : res.records) {
        if (r.excluded) o.require(false, r.label + " excluded: " + r.reason);
    }
    // some coherent state beats every n >= 1 number state at every checkpoint
    bool found = false;
    std::string winner;
    for (const auto& c : res.records) {
        if (c.params.kind != FamilyKind::coherent_grid || c.excluded) continue;
        bool beats_all = true;
        for (std::size_t k = 0; k < checkpoints.size(); ++k)
            for (const auto& n : res.records)
                if (n.params.kind == FamilyKind::number_states && !(c.checkpoint_entropy[k] < n.checkpoint_entropy[k]))
                    beats_all = false;
        if (beats_all) {
            found = true;
            winner = c.label;
            break;
        }
    }
    o.detail << "fast hot bath: top = " << res.records.front().label << "; coherent beating every n>=1 number state at all "
             << checkpoints.size() << " checkpoints: " << (found ? winner : "none");
    o.require(found, "no coherent state outranks every number state at every checkpoint");

    // conservation of every candidate run
    for (const auto& c : cands) audit("c3b qbm " + c.params.label(), engine.evolve(c.rho));
    const DensityMatrix probe = coherent_state(1.0, d);
    halving("qbm (fast hot bath, c3b)", [&](double h) {
        SolverOptions so = opts(T / 2, h);
        so.compute_spectra = false;
        so.min_steps_per_period = 50;
        return evolve_qbm(probe, coeffs, ops, so).final_state();
    }, T / 100);
    return o;
}

Outcome criterion4() {
    Outcome o;
    JointModel m;
    // d_s = 16 (joint dim 2000): at d_s = 8 the truncated x, p make the master
    // run dip to -9e-7 in its smallest eigenvalue; the ratios barely move
    m.system = {1.0, 1.0, 16};
    m.modes = {{0.5, 1.0, 0.0, 4}, {1.7, 1.0, 0.0, 4}, {2.9, 1.0, 0.0, 4}};
    m.form = CouplingForm::linear;
    const double e0 = 0.1, t_star = 2 * kPi;
    const auto rho0 = coherent_state(0.7, 16);
    ScalingOptions so;
    so.steps = 400;
    const auto rep = perturbative_scaling_check(m, rho0, {e0, e0 / 2, e0 / 4}, t_star, so);
    o.detail << "joint dim " << m.joint_dim() << "; delta = ";
    for (const auto& r : rep.rows) o.detail << r.delta << " ";
    o.detail << "; ratios = " << rep.rows[1].ratio << ", " << rep.rows[2].ratio;
    o.detail << " (opposite anomalous sign: " << rep.rows[1].ratio_alternate << ", " << rep.rows[2].ratio_alternate << ")";
    for (int i = 1; i <= 2; ++i) o.require(rep.rows[i].ratio >= 8 && rep.rows[i].ratio <= 32, "ratio outside [8, 32]");
    o.require(rep.monotone, "delta not monotone in e");
    for (std::size_t i = 0; i < rep.master_runs.size(); ++i)
        audit("c4 qbm e=" + std::to_string(rep.rows[i].e), rep.master_runs[i]);

    // step halving on the strongest-coupling master equation
    const auto grid = uniform_grid(t_star, t_star / 800 / 2);
    const auto kern = build_discrete_kernel_table(m.modes, 0.0, grid);
    const auto coeffs = build_coefficients(kern, m.system, e0 * e0);
    const auto ops = build_operators(m.system);
    halving("qbm (oracle modes, c4)", [&](double h) {
        SolverOptions s = opts(t_star, h);
        s.compute_spectra = false;
        s.truncation_tol = INFINITY;
        s.min_steps_per_period = 50;
        return evolve_qbm(rho0, coeffs, ops, s).final_state();
    }, t_star / 200);
    return o;
}

struct DipoleRun {
    double distance = 0.0;
    double shifted = 0.0;  ///< QBM with the x^2 frequency shift added (diagnostic)
};

DipoleRun dipole_distance(double k_max, const std::string& tag, bool audit_halving) {
    const double T = 2 * kPi, dt = T / 400;
    const int d = 16;
    const SystemParams sys{1.0, 1.0, d};
    const auto ops = build_operators(sys);
    BathModel b;
    b.k_max = k_max;
    b.cutoff = k_max / 8;
    b.coupling = 4.0;
    // zero temperature: at T = 1 the thermal anomalous term drives the
    // smallest eigenvalue of both engines below -1e-7
    b.temperature = 0.0;
    b.window = WindowKind::exponential;
    b.n_k = 64;
    const auto ch = build_channels(b, ops);
    const auto kernels = build_kernel_table(b, uniform_grid(T, dt / 2));
    const auto coeffs = build_coefficients(kernels, sys, b.coupling);
    const auto rho0 = coherent_state(1.0, d);
    const auto tc = audit("c5 channels " + tag, evolve_channels(rho0, ch, ops, opts(T, dt)));
    const auto tq = audit("c5 qbm " + tag, evolve_qbm(rho0, coeffs, ops, opts(T, dt)));

    // The x^2 term of exp(ikx) also shifts the frequency by +2 e^2 int_0^t F_R / m;
    // with it the two engines agree to second order in k_max x_char.
    auto shifted = coeffs;
    const auto shift = cumulative_simpson(kernels.F_R, kernels.spacing());
    for (std::size_t i = 0; i < shifted.size(); ++i)
        shifted.omega_ren_sq[i] += 2.0 * b.coupling * shift[i] / sys.mass;
    const auto ts = audit("c5 qbm shifted " + tag, evolve_qbm(rho0, shifted, ops, opts(T, dt)));

    if (audit_halving) {
        halving("channels (dipole limit, c5)", [&](double h) {
            SolverOptions so = opts(T, h);
            so.min_steps_per_period = 25;
            so.compute_spectra = false;
            return evolve_channels(rho0, ch, ops, so).final_state();
        }, T / 25);
        const auto fine = build_coefficients(build_kernel_table(b, uniform_grid(T, T / 200)), sys, b.coupling);
        halving("qbm (dipole limit, c5)", [&](double h) {
            SolverOptions so = opts(T, h);
            so.min_steps_per_period = 25;
            so.compute_spectra = false;
            return evolve_qbm(rho0, fine, ops, so).final_state();
        }, T / 25);
    }
    return {trace_distance(tc.final_state(), tq.final_state()), trace_distance(tc.final_state(), ts.final_state())};
}

Outcome criterion5() {
    Outcome o;
    const double x_char = std::sqrt(0.5);
    const double k1 = 0.1 / x_char;
    const auto a = dipole_distance(k1, "k_max", true);
    const auto b = dipole_distance(k1 / 2, "k_max/2", false);
    const double shrink = a.distance / b.distance;
    o.detail << "trace distance (k_max x_char = 0.1) = " << a.distance << ", halved k_max = " << b.distance
             << ", shrink factor = " << shrink << " (with the x^2 frequency shift: " << a.shifted << " -> "
             << b.shifted << ")";
    o.require(a.distance < 1e-3, "trace distance >= 1e-3");
    o.require(shrink >= 4.0, "halving k_max shrinks the distance by < 4x");
    return o;
}

Outcome criterion6() {
    Outcome o;
    const SystemParams sys{};
    BathModel b;
    b.cutoff = 0.01;
    b.window = WindowKind::exponential;
    const auto grid = uniform_grid(2 * kPi, 2 * kPi / 400);
    const auto kernels = build_kernel_table(b, grid);
    const auto num = build_coefficients(kernels, sys, 1.0);
    const auto cf = adiabatic_closed_form(kernels, sys, 1.0);
    auto rel = [](const std::vector<double>& x, const std::vector<double>& ref) {
        double dev = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            dev = std::max(dev, std::abs(x[i] - ref[i]));
            scale = std::max(scale, std::abs(ref[i]));
        }
        return dev / scale;
    };
    const double dD = rel(num.D, cf.D), df = rel(num.f, cf.f);
    auto doubled = b;
    doubled.n_k *= 2;
    const auto k2 = build_kernel_table(doubled, grid);
    const double conv = std::abs(k2.F_H[0] - kernels.F_H[0]) / kernels.F_H[0];
    o.detail << "max relative deviation D = " << dD << ", f = " << df << "; F_H(0) change on doubling n_k = " << conv
             << "; F_R(0) = " << kernels.F_R[0];
    o.require(dD < 0.02 && df < 0.02, "closed-form deviation >= 2%");
    o.require(conv < 1e-6, "quadrature not converged");
    o.require(kernels.F_R[0] == 0.0, "F_R(0) != 0");
    return o;
}

Outcome criterion7() {
    Outcome o;
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = INFINITY;
    std::string worst_eig_run;
    for (const auto& r : g_runs) {
        worst_trace = std::max(worst_trace, r.trace_error / std::max(r.t_max, 1.0));
        worst_herm = std::max(worst_herm, r.hermiticity);
        if (r.min_eigenvalue < worst_eig) {
            worst_eig = r.min_eigenvalue;
            worst_eig_run = r.name;
        }
        o.require(r.trace_error < 1e-8 * std::max(r.t_max, 1.0), r.name + ": trace drift");
        o.require(r.hermiticity < 1e-12, r.name + ": hermiticity");
        o.require(r.min_eigenvalue > -1e-9, r.name + ": negative eigenvalue " + std::to_string(r.min_eigenvalue));
    }
    o.detail << g_runs.size() << " runs: max trace drift per unit time " << worst_trace << ", hermiticity " << worst_herm
             << ", min eigenvalue " << worst_eig << " (" << worst_eig_run << "); step halving:";
    for (const auto& h : g_halving) {
        o.detail << " " << h.name << " = " << h.ratio << ";";
        o.require(h.ratio >= 10 && h.ratio <= 24, h.name + ": step-halving ratio outside [10, 24]");
    }
    return o;
}

} // namespace

int main() {
    struct Item {
        const char* name;
        Outcome (*run)();
    };
    const Item items[] = {
        {"1 frozen diagonals", criterion1},
        {"2 gaussian off-diagonal decay", criterion2},
        {"3a sieve, adiabatic bath", criterion3a},
        {"3b sieve, fast hot bath", criterion3b},
        {"4 perturbative scaling", criterion4},
        {"5 dipole-limit equivalence", criterion5},
        {"6 coefficient regression", criterion6},
        {"7 conservation suite", criterion7},
    };
    bool all = true;
    for (const auto& it : items) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", it.name, o.detail.str().c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
