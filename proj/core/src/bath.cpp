#include "einselect/bath.hpp"

#include <cmath>
#include <sstream>

#include "einselect/csv.hpp"
#include "einselect/error.hpp"
#include "einselect/hilbert.hpp"

namespace einselect {

WindowKind parse_window_kind(const std::string& s) {
    if (s == "exponential") return WindowKind::exponential;
    if (s == "gaussian") return WindowKind::gaussian;
    if (s == "sharp") return WindowKind::sharp;
    fail(ErrorCategory::config, "unknown window kind '" + s + "' (expected exponential|gaussian|sharp)");
}

std::string to_string(WindowKind k) {
    switch (k) {
        case WindowKind::exponential: return "exponential";
        case WindowKind::gaussian: return "gaussian";
        case WindowKind::sharp: return "sharp";
    }
    return "?";
}

void BathModel::validate() const {
    require(spatial_dim >= 1 && spatial_dim <= 3, "bath.spatial_dim must be 1, 2 or 3");
    require(coupling >= 0.0, "bath.coupling (e^2) must be non-negative");
    require(temperature >= 0.0, "bath.temperature must be non-negative");
    require(field_mass >= 0.0, "bath.field_mass must be non-negative");
    require(cutoff > 0.0, "bath.cutoff must be positive");
    require(effective_k_max() >= 4.0 * cutoff, "bath.k_max must be at least 4 * bath.cutoff");
    require(n_k >= 64, "bath.n_k must be at least 64");
}

double dispersion(double k, const BathModel& model) {
    return std::sqrt(k * k + model.field_mass * model.field_mass);
}

double thermal_occupation(double omega, double temperature) {
    if (temperature == 0.0) return 0.0;
    if (omega <= 0.0)
        fail(ErrorCategory::invalid_argument, "infrared divergence: zero-frequency mode at T > 0");
    const double x = omega / temperature;
    if (x < 1e-8) return 1.0 / x - 0.5;
    return 1.0 / std::expm1(x);
}

double occupation(double k, const BathModel& model) {
    return thermal_occupation(dispersion(k, model), model.temperature);
}

double window(double k, const BathModel& model) {
    const double a = std::abs(k) / model.cutoff;
    switch (model.window) {
        case WindowKind::exponential: return std::exp(-a);
        case WindowKind::gaussian: return std::exp(-0.5 * a * a);
        case WindowKind::sharp: return a <= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double window_weight(double k, const BathModel& model) {
    const double w = window(k, model);
    return w * w;
}

double retarded_kernel(double k, double t, const BathModel& model) {
    const double w = dispersion(k, model);
    return window_weight(k, model) * std::sin(w * t) / (2.0 * w);
}

double symmetric_kernel(double k, double t, const BathModel& model) {
    const double w = dispersion(k, model);
    return window_weight(k, model) * std::cos(w * t) * (1.0 + 2.0 * occupation(k, model)) / (2.0 * w);
}

KNodes build_k_nodes(const BathModel& model, int n_k) {
    model.validate();
    double upper = model.effective_k_max();
    if (model.window == WindowKind::sharp) upper = std::min(upper, model.cutoff);
    const QuadratureRule rule = gauss_legendre(n_k, 0.0, upper);
    const int N = model.spatial_dim;
    const double norm = 1.0 / (N * std::pow(2.0 * kPi, 0.5 * N));
    KNodes nodes;
    nodes.k = rule.nodes;
    nodes.measure.resize(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double k = rule.nodes[j];
        double surface = 2.0;
        if (N == 2) surface = 2.0 * kPi * k;
        if (N == 3) surface = 4.0 * kPi * k * k;
        nodes.measure[j] = rule.weights[j] * surface * norm;
    }
    return nodes;
}

KNodes build_k_nodes(const BathModel& model) { return build_k_nodes(model, model.n_k); }

namespace {

struct NodeAmplitudes {
    std::vector<double> omega;
    std::vector<double> amp;      // measure k^2 |W|^2 / 2w
    std::vector<double> thermal;  // 1 + 2N
};

NodeAmplitudes amplitudes(const KNodes& nodes, const BathModel& model) {
    NodeAmplitudes a;
    const std::size_t n = nodes.size();
    a.omega.resize(n);
    a.amp.resize(n);
    a.thermal.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = nodes.k[j];
        const double w = dispersion(k, model);
        a.omega[j] = w;
        a.amp[j] = nodes.measure[j] * k * k * window_weight(k, model) / (2.0 * w);
        a.thermal[j] = 1.0 + 2.0 * occupation(k, model);
    }
    return a;
}

double sum_retarded(const NodeAmplitudes& a, double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.amp.size(); ++j) s += a.amp[j] * std::sin(a.omega[j] * t);
    return s;
}

double sum_symmetric(const NodeAmplitudes& a, double t) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.amp.size(); ++j)
        s += a.amp[j] * a.thermal[j] * std::cos(a.omega[j] * t);
    return s;
}

} // namespace

double dipole_retarded(const KNodes& nodes, const BathModel& model, double t) {
    return sum_retarded(amplitudes(nodes, model), t);
}

double dipole_symmetric(const KNodes& nodes, const BathModel& model, double t) {
    return sum_symmetric(amplitudes(nodes, model), t);
}

double KernelTable::spacing() const { return uniform_spacing(t); }

KernelTable build_kernel_table(const BathModel& model, std::span<const double> t_grid,
                               const KernelOptions& options) {
    model.validate();
    uniform_spacing(t_grid);

    KernelTable table;
    table.t.assign(t_grid.begin(), t_grid.end());
    table.nodes = build_k_nodes(model);

    // quadrature self-check on the symmetric kernel at t = 0
    const double fh0 = dipole_symmetric(table.nodes, model, 0.0);
    const double fh0_fine = dipole_symmetric(build_k_nodes(model, 2 * model.n_k), model, 0.0);
    const double scale = std::max(std::abs(fh0_fine), 1e-300);
    table.convergence_delta = std::abs(fh0 - fh0_fine) / scale;
    if (table.convergence_delta > options.convergence_tol) {
        std::ostringstream os;
        os << "kernel quadrature not converged: F_H(0) changes by " << table.convergence_delta
           << " (relative) when n_k doubles from " << model.n_k << "; increase bath.n_k";
        fail(ErrorCategory::quadrature, os.str());
    }

    const NodeAmplitudes amp = amplitudes(table.nodes, model);
    const std::size_t nt = table.t.size();
    table.F_R.resize(nt);
    table.F_H.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        table.F_R[i] = sum_retarded(amp, table.t[i]);
        table.F_H[i] = sum_symmetric(amp, table.t[i]);
    }
    table.F_R[0] = 0.0;  // sin(0) terms, kept exact

    if (options.store_node_samples) {
        const std::size_t nk = table.nodes.size();
        table.G_R.assign(nk, std::vector<double>(nt));
        table.G_H.assign(nk, std::vector<double>(nt));
        for (std::size_t j = 0; j < nk; ++j) {
            for (std::size_t i = 0; i < nt; ++i) {
                table.G_R[j][i] = retarded_kernel(table.nodes.k[j], table.t[i], model);
                table.G_H[j][i] = symmetric_kernel(table.nodes.k[j], table.t[i], model);
            }
        }
    }

    std::ostringstream src;
    src.precision(17);
    src << "continuum N=" << model.spatial_dim << " T=" << model.temperature
        << " m_phi=" << model.field_mass << " window=" << to_string(model.window)
        << " cutoff=" << model.cutoff << " k_max=" << model.effective_k_max() << " n_k=" << model.n_k;
    table.source = src.str();
    return table;
}

KernelTable build_discrete_kernel_table(std::span<const DiscreteMode> modes, double temperature,
                                        std::span<const double> t_grid) {
    require(!modes.empty(), "discrete kernel table needs at least one mode");
    uniform_spacing(t_grid);
    KernelTable table;
    table.t.assign(t_grid.begin(), t_grid.end());
    table.F_R.assign(table.t.size(), 0.0);
    table.F_H.assign(table.t.size(), 0.0);
    for (const auto& m : modes) {
        require(m.omega > 0.0, "discrete mode frequency must be positive");
        const double g2 = m.coupling * m.coupling;
        const double thermal = 1.0 + 2.0 * thermal_occupation(m.omega, temperature);
        for (std::size_t i = 0; i < table.t.size(); ++i) {
            table.F_R[i] += g2 * std::sin(m.omega * table.t[i]);
            table.F_H[i] += g2 * thermal * std::cos(m.omega * table.t[i]);
        }
    }
    table.F_R[0] = 0.0;
    table.source = "discrete modes=" + std::to_string(modes.size());
    return table;
}

void write_kernel_csv(const KernelTable& table, const std::string& path) {
    CsvWriter w(path, {"t", "F_R", "F_H"});
    for (std::size_t i = 0; i < table.t.size(); ++i) {
        w << table.t[i] << table.F_R[i] << table.F_H[i];
        w.end_row();
    }
}

} // namespace einselect
