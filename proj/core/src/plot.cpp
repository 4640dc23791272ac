#include "einselect/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "einselect/csv.hpp"
#include "einselect/error.hpp"

namespace einselect {

PlotKind parse_plot_kind(const std::string& s) {
    if (s == "entropy_curves") return PlotKind::entropy_curves;
    if (s == "offdiag_decay") return PlotKind::offdiag_decay;
    if (s == "coefficient_traces") return PlotKind::coefficient_traces;
    fail(ErrorCategory::config, "unknown plot kind '" + s + "' (expected entropy_curves|offdiag_decay|coefficient_traces)");
}

std::string to_string(PlotKind k) {
    switch (k) {
        case PlotKind::entropy_curves: return "entropy_curves";
        case PlotKind::offdiag_decay: return "offdiag_decay";
        case PlotKind::coefficient_traces: return "coefficient_traces";
    }
    return "?";
}

namespace {

constexpr double kW = 760, kH = 460;
constexpr double kLeft = 80, kRight = 210, kTop = 40, kBottom = 60;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, bool log) {
    char buf[32];
    if (log) std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
    else std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-300 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

std::vector<double> nice_ticks(double lo, double hi, bool integer_only) {
    std::vector<double> t;
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    if (integer_only) step = std::max(1.0, std::round(step));
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
    return t;
}

} // namespace

std::string render_svg(const PlotSpec& spec) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    std::vector<Series> data = spec.series;
    for (auto& s : data) {
        if (spec.log_y) {
            Series f{s.name, {}, {}};
            for (std::size_t i = 0; i < s.y.size(); ++i)
                if (s.y[i] > 0.0 && std::isfinite(s.y[i])) {
                    f.x.push_back(s.x[i]);
                    f.y.push_back(std::log10(s.y[i]));
                }
            s = std::move(f);
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (xhi == xlo) xhi = xlo + 1.0;
    if (yhi == ylo) {
        const double pad = std::max(1.0, std::abs(ylo)) * 0.5;
        ylo -= pad;
        yhi += pad;
    } else {
        const double pad = 0.05 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
    }
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto X = [&](double v) { return kLeft + (v - xlo) / (xhi - xlo) * pw; };
    auto Y = [&](double v) { return kTop + (yhi - v) / (yhi - ylo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";
    o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
      << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : nice_ticks(xlo, xhi, false)) {
        o << "<line x1=\"" << num(X(t)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(X(t)) << "\" y2=\""
          << num(kTop + ph + 5) << "\" stroke=\"black\"/>";
        o << "<text x=\"" << num(X(t)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_label(t, false) << "</text>\n";
    }
    for (double t : nice_ticks(ylo, yhi, spec.log_y)) {
        o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(Y(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
          << num(Y(t)) << "\" stroke=\"black\"/>";
        o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(Y(t) + 4) << "\" text-anchor=\"end\">"
          << tick_label(t, spec.log_y) << "</text>\n";
    }
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kH - 15) << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
    o << "<text transform=\"translate(20," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << (spec.log_y ? " (log scale)" : "") << "</text>\n";

    for (std::size_t k = 0; k < data.size(); ++k) {
        const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < data[k].x.size(); ++i) {
            if (!std::isfinite(data[k].x[i]) || !std::isfinite(data[k].y[i])) continue;
            o << num(X(data[k].x[i])) << ',' << num(Y(data[k].y[i])) << ' ';
        }
        o << "\"/>\n";
        const double ly = kTop + 10 + 16.0 * static_cast<double>(k);
        if (ly > kH - kBottom) continue;
        o << "<line x1=\"" << num(kW - kRight + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kW - kRight + 32)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        o << "<text x=\"" << num(kW - kRight + 36) << "\" y=\"" << num(ly + 4) << "\" font-size=\"10\">"
          << escape(data[k].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

PlotSpec plot_from_csv(const std::string& csv_path, PlotKind kind) {
    const CsvTable t = read_csv(csv_path);
    auto mismatch = [&](const std::string& why) -> PlotSpec {
        fail(ErrorCategory::config, csv_path + " does not match plot kind " + to_string(kind) + ": " + why);
    };
    if (t.column("t") < 0) return mismatch("missing column 't'");
    const auto time = t.numeric_column("t");
    PlotSpec spec;
    switch (kind) {
        case PlotKind::entropy_curves: {
            spec.title = "Entropy production";
            spec.x_label = "t";
            spec.y_label = "entropy";
            if (t.column("entropy") >= 0) {
                spec.series.push_back({"von Neumann", time, t.numeric_column("entropy")});
                if (t.column("linear_entropy") >= 0)
                    spec.series.push_back({"linear", time, t.numeric_column("linear_entropy")});
                break;
            }
            for (const auto& h : t.header) {
                if (h == "t") continue;
                if (h.empty() || h.back() != ')') return mismatch("column '" + h + "' is not a candidate curve");
                spec.series.push_back({h, time, t.numeric_column(h)});
            }
            if (spec.series.empty()) return mismatch("no entropy columns");
            break;
        }
        case PlotKind::offdiag_decay: {
            spec.title = "Off-diagonal decay";
            spec.x_label = "t^2";
            spec.y_label = "|rho_nm|";
            spec.log_y = true;
            std::vector<double> t2(time.size());
            for (std::size_t i = 0; i < time.size(); ++i) t2[i] = time[i] * time[i];
            for (const auto& h : t.header) {
                int n = 0, m = 0;
                char tail = 0;
                if (std::sscanf(h.c_str(), "re_rho_%d_%d%c", &n, &m, &tail) != 2 || n == m) continue;
                const std::string im = "im_rho_" + std::to_string(n) + "_" + std::to_string(m);
                if (t.column(im) < 0) return mismatch("missing column '" + im + "'");
                const auto re_v = t.numeric_column(h);
                const auto im_v = t.numeric_column(im);
                std::vector<double> mag(re_v.size());
                for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(re_v[i], im_v[i]);
                spec.series.push_back({"|rho_" + std::to_string(n) + std::to_string(m) + "|", t2, mag});
            }
            if (spec.series.empty()) return mismatch("no off-diagonal re_rho_n_m columns");
            break;
        }
        case PlotKind::coefficient_traces: {
            spec.title = "Master-equation coefficients";
            spec.x_label = "t";
            spec.y_label = "coefficient";
            for (const char* c : {"omega_ren_sq", "gamma", "D", "f"}) {
                if (t.column(c) < 0) return mismatch(std::string("missing column '") + c + "'");
                spec.series.push_back({c, time, t.numeric_column(c)});
            }
            break;
        }
    }
    return spec;
}

void emit_plot(const std::string& csv_path, PlotKind kind, const std::string& svg_path) {
    const std::string svg = render_svg(plot_from_csv(csv_path, kind));
    std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::invalid_argument, "cannot open " + svg_path + " for writing");
    out << svg;
}

} // namespace einselect
