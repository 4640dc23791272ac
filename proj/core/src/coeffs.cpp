#include "einselect/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "einselect/csv.hpp"
#include "einselect/error.hpp"
#include "einselect/quadrature.hpp"

namespace einselect {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::uint64_t provenance_of(const KernelTable& kernels, const SystemParams& sys, double e2) {
    std::ostringstream os;
    os.precision(17);
    os << kernels.source << "|m=" << sys.mass << " W=" << sys.frequency << " e2=" << e2
       << " dt=" << kernels.spacing() << " n_t=" << kernels.t.size();
    return fnv1a(os.str());
}

} // namespace

CoefficientTable::Sample CoefficientTable::at(double time) const {
    require(!t.empty(), "empty coefficient table");
    const double h = t.size() > 1 ? t[1] - t[0] : 1.0;
    if (time < -1e-12 * h || time > t.back() + 1e-9 * h) {
        std::ostringstream os;
        os << "coefficient table covers [0, " << t.back() << "], requested t = " << time;
        fail(ErrorCategory::config, os.str());
    }
    if (t.size() == 1) return {omega_ren_sq[0], gamma[0], D[0], f[0]};
    const double u = std::clamp(time / h, 0.0, static_cast<double>(t.size() - 1));
    auto i = static_cast<std::size_t>(std::floor(u));
    double w = u - static_cast<double>(i);
    // snap to a node when within rounding of it, so aligned stage times are exact
    if (w < 1e-9) w = 0.0;
    if (w > 1.0 - 1e-9) {
        w = 0.0;
        ++i;
    }
    if (i >= t.size() - 1) return {omega_ren_sq.back(), gamma.back(), D.back(), f.back()};
    if (w == 0.0) return {omega_ren_sq[i], gamma[i], D[i], f[i]};
    auto lerp = [&](const std::vector<double>& v) { return (1.0 - w) * v[i] + w * v[i + 1]; };
    return {lerp(omega_ren_sq), lerp(gamma), lerp(D), lerp(f)};
}

CoefficientTable build_coefficients(const KernelTable& kernels, const SystemParams& sys, double e2) {
    sys.validate();
    require(e2 >= 0.0, "coupling e^2 must be non-negative");
    const double h = kernels.spacing();
    const double W = sys.frequency;
    const double m = sys.mass;
    if (h > sys.bohr_period() / 64.0 * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "kernel grid spacing " << h << " exceeds (2 pi / Omega) / 64 = " << sys.bohr_period() / 64.0;
        fail(ErrorCategory::config, os.str());
    }

    const std::size_t n = kernels.t.size();
    std::vector<double> cr(n), sr(n), ch(n), sh(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(W * kernels.t[i]);
        const double s = std::sin(W * kernels.t[i]);
        cr[i] = c * kernels.F_R[i];
        sr[i] = s * kernels.F_R[i];
        ch[i] = c * kernels.F_H[i];
        sh[i] = s * kernels.F_H[i];
    }
    const auto Icr = cumulative_simpson(cr, h);
    const auto Isr = cumulative_simpson(sr, h);
    const auto Ich = cumulative_simpson(ch, h);
    const auto Ish = cumulative_simpson(sh, h);

    CoefficientTable out;
    out.t = kernels.t;
    out.e2 = e2;
    out.omega_ren_sq.resize(n);
    out.gamma.resize(n);
    out.D.resize(n);
    out.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.omega_ren_sq[i] = -2.0 * kHbar / m * e2 * Icr[i];
        out.gamma[i] = -kHbar / (2.0 * m * W) * e2 * Isr[i];
        out.D[i] = e2 * Ich[i];
        out.f[i] = e2 / (m * W) * Ish[i];
    }
    out.provenance = provenance_of(kernels, sys, e2);
    return out;
}

double kernel_flatness(const KernelTable& kernels, double horizon) {
    require(!kernels.F_H.empty(), "empty kernel table");
    const double f0 = kernels.F_H[0];
    require(f0 != 0.0, "kernel flatness undefined for F_H(0) = 0");
    double worst = 0.0;
    for (std::size_t i = 0; i < kernels.t.size() && kernels.t[i] <= horizon * (1.0 + 1e-12); ++i)
        worst = std::max(worst, std::abs(kernels.F_H[i] - f0) / std::abs(f0));
    return worst;
}

CoefficientTable adiabatic_closed_form(const KernelTable& kernels, const SystemParams& sys, double e2,
                                       double flatness_tol) {
    sys.validate();
    const double flat = kernel_flatness(kernels, sys.bohr_period());
    if (flat > flatness_tol) {
        std::ostringstream os;
        os << "kernels are not adiabatic: F_H varies by " << flat << " (relative) over one Bohr period";
        fail(ErrorCategory::config, os.str());
    }
    const double W = sys.frequency;
    const double m = sys.mass;
    const double fh0 = kernels.F_H[0];
    CoefficientTable out;
    out.t = kernels.t;
    out.e2 = e2;
    const std::size_t n = out.t.size();
    out.omega_ren_sq.assign(n, 0.0);
    out.gamma.assign(n, 0.0);
    out.D.resize(n);
    out.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.D[i] = e2 * fh0 * std::sin(W * out.t[i]) / W;
        out.f[i] = e2 * fh0 * (1.0 - std::cos(W * out.t[i])) / (m * W * W);
    }
    out.provenance = provenance_of(kernels, sys, e2) ^ 0x9e3779b97f4a7c15ULL;
    return out;
}

void write_coefficients_csv(const CoefficientTable& table, const std::string& path) {
    CsvWriter w(path, {"t", "omega_ren_sq", "gamma", "D", "f"});
    for (std::size_t i = 0; i < table.t.size(); ++i) {
        w << table.t[i] << table.omega_ren_sq[i] << table.gamma[i] << table.D[i] << table.f[i];
        w.end_row();
    }
}

} // namespace einselect
