#pragma once

// Time-dependent coefficients of the dipole (QBM) master equation:
//   Omega_ren^2(t) = -(2/m) e^2 int_0^t cos(W s) F_R(s) ds
//   gamma(t)       = -(1/2mW) e^2 int_0^t sin(W s) F_R(s) ds
//   D(t)           =        e^2 int_0^t cos(W s) F_H(s) ds
//   f(t)           = (1/mW) e^2 int_0^t sin(W s) F_H(s) ds

#include <cstdint>
#include <string>
#include <vector>

#include "einselect/bath.hpp"
#include "einselect/hilbert.hpp"

namespace einselect {

struct CoefficientTable {
    std::vector<double> t;
    std::vector<double> omega_ren_sq;
    std::vector<double> gamma;
    std::vector<double> D;
    std::vector<double> f;
    double e2 = 0.0;
    /// FNV-1a hash of the kernel source description and system parameters.
    std::uint64_t provenance = 0;

    struct Sample {
        double omega_ren_sq = 0.0;
        double gamma = 0.0;
        double D = 0.0;
        double f = 0.0;
    };

    /// Linear interpolation; exact on grid nodes. Throws outside [0, t_max].
    Sample at(double time) const;
    double t_max() const { return t.empty() ? 0.0 : t.back(); }
    std::size_t size() const { return t.size(); }
};

std::uint64_t fnv1a(const std::string& text);

/// Cumulative-Simpson evaluation on the kernel grid. The grid spacing must not
/// exceed (2 pi / W) / 64.
CoefficientTable build_coefficients(const KernelTable& kernels, const SystemParams& sys, double e2);

/// Largest |F_H(t) - F_H(0)| / |F_H(0)| over t in [0, min(horizon, t_max)].
double kernel_flatness(const KernelTable& kernels, double horizon);

/// Frozen-kernel limit: D = F_H(0) sin(Wt)/W, f = F_H(0)(1 - cos Wt)/(m W^2),
/// Omega_ren^2 = gamma = 0, all scaled by e2. Rejects kernels whose flatness
/// over one Bohr period exceeds `flatness_tol`.
CoefficientTable adiabatic_closed_form(const KernelTable& kernels, const SystemParams& sys,
                                       double e2 = 1.0, double flatness_tol = 0.01);

void write_coefficients_csv(const CoefficientTable& table, const std::string& path);

} // namespace einselect
