#pragma once

// Secular (energy-basis) master equation with frozen kernels:
//   d rho_nm/dt = -i w_nm rho_nm - gamma2_nm t rho_nm
//                 - t sum_{l != n,m} (A_lnm rho_lm + B_lnm rho_{nl})
// with, summed over directional channels c with frozen weight cbar_c = c_c(0)
// and conjugated diagonal elements sbar_l = conj(S_c[l,l]):
//   gamma2_nm = sum_c cbar_c |S_c[n,n] - S_c[m,m]|^2
//   A_lnm     = sum_c cbar_c S_c[n,l] (sbar_l - sbar_m)
//   B_lnm     = -sum_c cbar_c (sbar_n - sbar_l) S_c[l,m]
// The retarded kernel vanishes at t = 0 and does not contribute.

#include <string>
#include <vector>

#include "einselect/channels.hpp"
#include "einselect/hilbert.hpp"
#include "einselect/solvers.hpp"

namespace einselect {

/// Which element the B tensor multiplies in the cross term.
enum class BIndex { nl, ln, ml };

BIndex parse_b_index(const std::string& s);
std::string to_string(BIndex b);

struct SecularRates {
    RealMatrix gamma_sq;
    /// Flattened [l][n][m] tensors.
    std::vector<cplx> cross_A;
    std::vector<cplx> cross_B;
    double averaging_period = 0.0;
    int dim = 0;

    cplx A(int l, int n, int m) const { return cross_A[(static_cast<std::size_t>(l) * dim + n) * dim + m]; }
    cplx B(int l, int n, int m) const { return cross_B[(static_cast<std::size_t>(l) * dim + n) * dim + m]; }
};

/// Smallest level spacing min_{n != m} |E_n - E_m|; throws a degeneracy error
/// naming the offending pairs when it is not above `tol`.
double check_nondegenerate(const OperatorSet& ops, double tol = 1e-9);

SecularRates secular_rates(const ChannelSet& channels, const OperatorSet& ops, double degeneracy_tol = 1e-9);

/// Rates from explicit diagonal channel data (one entry per directional channel);
/// used for hand-checkable cases.
RealMatrix gamma_sq_from_diagonals(const std::vector<Vector>& diagonals, const std::vector<double>& cbar);

/// Cross terms off: closed-form elementwise solution on the step grid.
/// Cross terms on: RK4 on the full equation.
Trajectory evolve_secular(const DensityMatrix& rho0, const SecularRates& rates, const OperatorSet& ops,
                          const SolverOptions& options, bool include_cross = false, BIndex b_index = BIndex::nl);

void write_rates_csv(const SecularRates& rates, const std::string& path);

} // namespace einselect
