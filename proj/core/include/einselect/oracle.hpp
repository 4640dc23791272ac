#pragma once

// Brute-force reference: the system plus a few truncated bath oscillators,
// evolved exactly and traced over the bath. Validates perturbative accuracy of
// the master equations, not continuum convergence.

#include <string>
#include <vector>

#include "einselect/bath.hpp"
#include "einselect/hilbert.hpp"
#include "einselect/solvers.hpp"

namespace einselect {

enum class CouplingForm {
    linear,       ///< e g_j x (b_j + b_j^dagger)
    exponential,  ///< e g_j (exp(i k_j x) b_j + h.c.); modes in (k, -k) pairs
};

CouplingForm parse_coupling_form(const std::string& s);
std::string to_string(CouplingForm f);

struct JointModel {
    static constexpr int kMaxJointDim = 4096;

    SystemParams system{1.0, 1.0, 8};
    std::vector<DiscreteMode> modes;
    CouplingForm form = CouplingForm::linear;
    /// Overall coupling e multiplying every g_j.
    double e = 1.0;

    int bath_dim() const;
    int joint_dim() const;
    void validate() const;
};

/// System is the leading tensor factor: index = s * bath_dim + b.
Matrix joint_hamiltonian(const JointModel& model);

struct ExactOptions {
    double temperature = 0.0;
    /// Largest Gibbs weight allowed beyond the per-mode truncations.
    double gibbs_tol = 1e-4;
    /// Ensemble members lighter than this are dropped (and the rest renormalized).
    double member_floor = 1e-12;
};

struct ExactResult {
    Trajectory reduced;
    /// Largest |<H>(t) - <H>(0)| and |<psi|psi>(t) - 1| over members and times.
    double max_energy_drift = 0.0;
    double max_norm_drift = 0.0;
    /// Gibbs weight outside the truncated bath space.
    double gibbs_truncation = 0.0;
    int members = 0;
};

/// Bath starts in the vacuum (T = 0) or in a Gibbs ensemble of Fock states.
/// Mixed system states are unravelled into their eigenvectors.
ExactResult evolve_exact(const JointModel& model, const DensityMatrix& rho0_system,
                         const std::vector<double>& t_grid, const ExactOptions& options = {});

struct ScalingOptions {
    double temperature = 0.0;
    /// Master-equation steps over [0, t_star].
    int steps = 400;
    AnomalousSign sign = AnomalousSign::plus;
    /// Also evaluate the opposite anomalous-diffusion sign (linear coupling only).
    bool report_alternate_sign = true;
};

struct ScalingRow {
    double e = 0.0;
    double delta = 0.0;
    double ratio = 0.0;            ///< delta(previous e) / delta(e); NaN on the first row
    double delta_alternate = 0.0;  ///< NaN when not evaluated
    double ratio_alternate = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double t_star = 0.0;
    std::string engine;
    bool monotone = true;
    /// Master-equation trajectories, one per coupling (for conservation checks).
    std::vector<Trajectory> master_runs;
};

/// delta(e) = trace distance between exact and master-equation reduced states at
/// t_star, with master kernels rebuilt from exactly the oracle's modes.
ScalingReport perturbative_scaling_check(const JointModel& model, const DensityMatrix& rho0,
                                         const std::vector<double>& couplings, double t_star,
                                         const ScalingOptions& options = {});

/// Master-equation final state for one coupling (QBM for linear, channels for exponential).
Trajectory oracle_master_run(const JointModel& model, const DensityMatrix& rho0, double e, double t_star,
                             const ScalingOptions& options, AnomalousSign sign);

void write_scaling_csv(const ScalingReport& report, const std::string& path);

} // namespace einselect
