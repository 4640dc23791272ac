#pragma once

// Fixed-step RK4 integration of the dipole (QBM) master equation and of the
// channel-form master equation with exp(ikx) couplings.

#include <functional>
#include <string>
#include <vector>

#include "einselect/channels.hpp"
#include "einselect/coeffs.hpp"
#include "einselect/hilbert.hpp"

namespace einselect {

/// Sign of the anomalous-diffusion term f(t)[x,[p,rho]].
///  plus:  +f, as obtained by expanding the kernel integrals with
///         x(-s) = x cos(Ws) - p sin(Ws)/(mW)  (default)
///  minus: -f, the opposite convention
enum class AnomalousSign { plus, minus };

AnomalousSign parse_anomalous_sign(const std::string& s);
std::string to_string(AnomalousSign s);

struct SolverOptions {
    double t_max = 2.0 * kPi;
    double dt = 2.0 * kPi / 200.0;
    /// Keep every `record_stride`-th step (the final step is always kept).
    int record_stride = 1;
    /// Abort thresholds: |Tr rho - 1| and population of the top two levels.
    double trace_tol = 1e-6;
    double truncation_tol = 1e-6;
    /// Eigenvalues per snapshot (von Neumann entropy, minimum eigenvalue).
    bool compute_spectra = true;
    AnomalousSign anomalous_sign = AnomalousSign::plus;
    /// Reject dt above (2 pi / W) / min_steps_per_period.
    int min_steps_per_period = 200;

    int steps() const;
};

struct Trajectory {
    std::string engine;
    std::vector<double> t;
    std::vector<Matrix> rho;
    std::vector<double> trace_error;
    std::vector<double> top_occupation;
    std::vector<double> entropy;         ///< von Neumann, nats (NaN without spectra)
    std::vector<double> linear_entropy;  ///< 1 - Tr rho^2
    std::vector<double> min_eigenvalue;  ///< NaN without spectra
    /// Largest anti-Hermitian entry produced by a step before symmetrization.
    double max_hermiticity_drift = 0.0;

    std::size_t size() const { return t.size(); }
    const Matrix& final_state() const { return rho.back(); }
    /// Snapshot as a DensityMatrix, tolerating integrator trace drift.
    DensityMatrix state(std::size_t i) const;
    /// Index of the snapshot closest to `time`.
    std::size_t index_near(double time) const;

    double max_trace_error() const;
    double max_hermiticity_error() const;
    double min_min_eigenvalue() const;
};

/// Appends a snapshot with its diagnostics.
void append_snapshot(Trajectory& traj, double time, const Matrix& rho, bool compute_spectra);

Trajectory evolve_qbm(const DensityMatrix& rho0, const CoefficientTable& coeffs, const OperatorSet& ops,
                      const SolverOptions& options);

Trajectory evolve_channels(const DensityMatrix& rho0, const ChannelSet& channels, const OperatorSet& ops,
                           const SolverOptions& options);

/// Right-hand side of the QBM equation, exposed for tests and benchmarks.
Matrix qbm_rhs(const Matrix& rho, const CoefficientTable::Sample& c, const OperatorSet& ops,
               AnomalousSign sign = AnomalousSign::plus);

/// Empirical convergence order check: ||r(dt) - r(dt/2)|| / ||r(dt/2) - r(dt/4)||
/// in trace norm, where r(h) is the final state of a run with step h.
/// Fourth-order integrators give about 16.
double step_halving_ratio(const std::function<Matrix(double)>& final_state, double dt);

} // namespace einselect
