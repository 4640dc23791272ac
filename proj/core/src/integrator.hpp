#pragma once

// Shared fixed-step driver. The state is carried in the interaction picture of
// the (diagonal) system Hamiltonian, rho~_nm = rho_nm exp(+i w_nm t), so the
// free rotation is exact and RK4 only integrates the coupling terms. Snapshots,
// abort checks and symmetrization act on the Schroedinger-picture state.

#include <cmath>
#include <sstream>
#include <string>

#include "einselect/error.hpp"
#include "einselect/solvers.hpp"

namespace einselect::detail {

/// out_nm = m_nm exp(-i w_nm t): interaction -> Schroedinger for t, the inverse for -t.
inline Matrix rotate(const Matrix& m, const RealVector& E, double t) {
    const Eigen::Index d = E.size();
    Matrix out(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r)
            out(r, c) = r == c ? m(r, c) : m(r, c) * std::polar(1.0, -(E(r) - E(c)) * t / kHbar);
    return out;
}

inline void check_inputs(const DensityMatrix& rho0, const OperatorSet& ops, const SolverOptions& opt) {
    require(rho0.dim() == ops.dim(), "initial state dimension does not match the operator set");
    require(opt.dt > 0.0 && opt.t_max >= 0.0, "solver needs dt > 0 and t_max >= 0");
    require(opt.record_stride >= 1, "record_stride must be at least 1");
    const double limit = ops.params.bohr_period() / opt.min_steps_per_period;
    if (opt.dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "solver.dt = " << opt.dt << " exceeds (2 pi / Omega) / " << opt.min_steps_per_period << " = "
           << limit;
        fail(ErrorCategory::config, os.str());
    }
}

/// RK4 step in the interaction picture for a Schroedinger-picture coupling
/// generator L(rho, stage) with stages 0 (t), 1 (t + h/2), 2 (t + h).
template <class Generator>
Matrix rk4_interaction(const Matrix& rho_i, double t, double h, const RealVector& E, Generator&& L) {
    auto f = [&](const Matrix& r, double s, int stage) { return rotate(L(rotate(r, E, s), stage), E, -s); };
    const Matrix k1 = f(rho_i, t, 0);
    const Matrix k2 = f(rho_i + 0.5 * h * k1, t + 0.5 * h, 1);
    const Matrix k3 = f(rho_i + 0.5 * h * k2, t + 0.5 * h, 1);
    const Matrix k4 = f(rho_i + h * k3, t + h, 2);
    return rho_i + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// `step(rho_i, t, h)` returns the unsymmetrized interaction-picture state at t + h.
template <class Step>
Trajectory integrate(const DensityMatrix& rho0, const OperatorSet& ops, const SolverOptions& opt,
                     const std::string& engine, Step&& step) {
    check_inputs(rho0, ops, opt);
    const int n = opt.steps();
    Trajectory traj;
    traj.engine = engine;
    Matrix rho_i = rho0.matrix();
    append_snapshot(traj, 0.0, rho_i, opt.compute_spectra);
    for (int s = 0; s < n; ++s) {
        const double t = s * opt.dt;
        Matrix next = step(rho_i, t, opt.dt);
        traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, max_antihermitian(next));
        rho_i = 0.5 * (next + next.adjoint());
        const double t_next = (s + 1) * opt.dt;

        // trace and populations are picture-independent
        const double terr = std::abs(rho_i.trace().real() - 1.0);
        if (!(terr <= opt.trace_tol)) {
            std::ostringstream os;
            os << engine << ": trace drift " << terr << " at t = " << t_next << " exceeds " << opt.trace_tol
               << "; reduce solver.dt";
            fail(ErrorCategory::truncation, os.str());
        }
        const double top = top_occupation(rho_i);
        if (top > opt.truncation_tol) {
            std::ostringstream os;
            os << engine << ": top-level occupation " << top << " at t = " << t_next << " exceeds "
               << opt.truncation_tol << "; increase system.fock_dim";
            fail(ErrorCategory::truncation, os.str());
        }
        if ((s + 1) % opt.record_stride == 0 || s + 1 == n)
            append_snapshot(traj, t_next, rotate(rho_i, ops.energies, t_next), opt.compute_spectra);
    }
    return traj;
}

} // namespace einselect::detail
