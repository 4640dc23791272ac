#pragma once

// Minimal deterministic SVG line plots for the CSV artifacts.

#include <string>
#include <vector>

namespace einselect {

enum class PlotKind { entropy_curves, offdiag_decay, coefficient_traces };

PlotKind parse_plot_kind(const std::string& s);
std::string to_string(PlotKind k);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

/// Fixed 760x460 canvas; identical specs give identical bytes.
std::string render_svg(const PlotSpec& spec);

/// Builds the plot from a CSV artifact. Throws if the CSV columns do not match
/// the kind: entropy_curves needs `t` plus entropy columns (a trajectory's
/// `entropy` or one column per sieve candidate); offdiag_decay needs
/// re_rho_n_m / im_rho_n_m with n != m (plotted as log10|rho_nm| against t^2);
/// coefficient_traces needs t, omega_ren_sq, gamma, D, f.
PlotSpec plot_from_csv(const std::string& csv_path, PlotKind kind);

void emit_plot(const std::string& csv_path, PlotKind kind, const std::string& svg_path);

} // namespace einselect
