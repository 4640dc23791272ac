#pragma once

// Free scalar-field environment: dispersion, thermal occupation, form factor,
// and the retarded / symmetric kernels together with their dipole reductions.

#include <span>
#include <string>
#include <vector>

#include "einselect/quadrature.hpp"

namespace einselect {

enum class WindowKind { exponential, gaussian, sharp };

WindowKind parse_window_kind(const std::string& s);
std::string to_string(WindowKind k);

struct BathModel {
    int spatial_dim = 1;
    /// e^2. Not folded into kernel tables; applied by coefficient and channel builders.
    double coupling = 1.0;
    double temperature = 0.0;
    double field_mass = 0.0;
    WindowKind window = WindowKind::exponential;
    /// Window scale Lambda = 1/R.
    double cutoff = 1.0;
    /// Quadrature truncation; 0 selects the default 8 * cutoff.
    double k_max = 0.0;
    int n_k = 128;

    void validate() const;
    double effective_k_max() const { return k_max > 0.0 ? k_max : 8.0 * cutoff; }
};

double dispersion(double k, const BathModel& model);
double occupation(double k, const BathModel& model);
/// Form factor W(k), normalized to W(0) = 1.
double window(double k, const BathModel& model);
/// |W(k)|^2, the weight that enters every kernel.
double window_weight(double k, const BathModel& model);

/// G_R(k, t) = |W|^2 sin(w_k t) / 2 w_k
double retarded_kernel(double k, double t, const BathModel& model);
/// G_H(k, t) = |W|^2 cos(w_k t) (1 + 2 N_k) / 2 w_k
double symmetric_kernel(double k, double t, const BathModel& model);

/// Radial quadrature over (0, k_upper] with the angular surface factor and the
/// 1 / (N (2 pi)^{N/2}) normalization folded into `measure`, so that
/// F(t) = sum_j measure_j k_j^2 G(k_j, t).
struct KNodes {
    std::vector<double> k;
    std::vector<double> measure;
    std::size_t size() const { return k.size(); }
};

KNodes build_k_nodes(const BathModel& model, int n_k);
KNodes build_k_nodes(const BathModel& model);

/// Dipole kernels F_R(t), F_H(t) summed over a node set. Valid for negative t.
double dipole_retarded(const KNodes& nodes, const BathModel& model, double t);
double dipole_symmetric(const KNodes& nodes, const BathModel& model, double t);

struct KernelTable {
    std::vector<double> t;
    std::vector<double> F_R;
    std::vector<double> F_H;
    KNodes nodes;
    /// Per-node samples [j][i]; filled only when requested (memory is n_k * n_t).
    std::vector<std::vector<double>> G_R;
    std::vector<std::vector<double>> G_H;
    /// Relative change of F_H(0) when n_k doubles.
    double convergence_delta = 0.0;
    std::string source;

    double spacing() const;
    double t_max() const { return t.empty() ? 0.0 : t.back(); }
};

struct KernelOptions {
    bool store_node_samples = false;
    double convergence_tol = 1e-6;
};

/// Tabulates F_R, F_H on `t_grid` (ascending, starting at 0). Rejects the
/// table with a quadrature error if doubling n_k moves F_H(0) by more than
/// `convergence_tol` relative.
KernelTable build_kernel_table(const BathModel& model, std::span<const double> t_grid,
                               const KernelOptions& options = {});

/// A single discrete bath oscillator, as used by the brute-force oracle.
struct DiscreteMode {
    double omega = 1.0;
    double coupling = 1.0;  ///< g_j
    double k = 0.0;         ///< wavenumber for exponential coupling
    int truncation = 4;     ///< highest Fock level kept
};

double thermal_occupation(double omega, double temperature);

/// Kernels of a finite set of linearly coupled oscillators:
/// F_H(t) = sum g^2 (1 + 2 N) cos(w t), F_R(t) = sum g^2 sin(w t).
KernelTable build_discrete_kernel_table(std::span<const DiscreteMode> modes, double temperature,
                                        std::span<const double> t_grid);

void write_kernel_csv(const KernelTable& table, const std::string& path);

} // namespace einselect
