#include "einselect/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include <json.hpp>

#include "einselect/bath.hpp"
#include "einselect/channels.hpp"
#include "einselect/coeffs.hpp"
#include "einselect/csv.hpp"
#include "einselect/error.hpp"
#include "einselect/oracle.hpp"
#include "einselect/plot.hpp"
#include "einselect/quadrature.hpp"
#include "einselect/secular.hpp"
#include "einselect/sieve.hpp"

namespace einselect {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s{"kernels", "coeffs", "evolve", "rates", "sieve", "oracle"};
    return s;
}

std::string resolve_output_dir(const std::string& cli_out, const Scenario& scenario) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return scenario.output.dir;
}

namespace {

// Tracks every file a run creates so a failed run can be rolled back.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
        if (!fs::exists(dir_)) {
            fs::create_directories(dir_);
            created_dir_ = true;
        }
    }
    std::string path(const std::string& name) {
        const fs::path p = dir_ / name;
        files_.push_back(p);
        return p.string();
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& f : files_) out.push_back(f.filename().string());
        return out;
    }
    void rollback() noexcept {
        std::error_code ec;
        for (const auto& f : files_) fs::remove(f, ec);
        if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
    }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
    bool created_dir_ = false;
};

struct Context {
    const Scenario& s;
    Outputs& out;
    json diagnostics = json::object();

    void plot(const std::string& csv, PlotKind kind, const std::string& svg_name) {
        if (s.output.plots) emit_plot(csv, kind, out.path(svg_name));
    }
};

std::vector<double> kernel_grid(const Scenario& s) { return uniform_grid(s.kernel_t_max, s.kernel_dt); }

SolverOptions solver_options(const Scenario& s) {
    SolverOptions o = s.solver;
    o.compute_spectra = true;
    return o;
}

// Engine inputs live here so the Engine's references stay valid.
struct EngineBundle {
    OperatorSet ops;
    std::optional<KernelTable> kernels;
    std::optional<CoefficientTable> coeffs;
    std::optional<ChannelSet> channels;
    std::optional<SecularRates> rates;
    Engine engine;
};

std::unique_ptr<EngineBundle> make_engine(const Scenario& s, json& diag) {
    auto b = std::make_unique<EngineBundle>();
    b->ops = build_operators(s.system);
    const SolverOptions opt = solver_options(s);
    switch (s.engine) {
        case EngineKind::qbm: {
            b->kernels = build_kernel_table(s.bath, kernel_grid(s));
            b->coeffs = build_coefficients(*b->kernels, s.system, s.bath.coupling);
            b->engine = make_qbm_engine(*b->coeffs, b->ops, opt);
            diag["kernel_convergence_delta"] = b->kernels->convergence_delta;
            break;
        }
        case EngineKind::channels:
            b->channels = build_channels(s.bath, b->ops);
            b->engine = make_channel_engine(*b->channels, b->ops, opt);
            diag["channel_unitarity_error"] = max_unitarity_error(*b->channels);
            break;
        case EngineKind::secular: {
            b->channels = build_channels(s.bath, b->ops);
            b->rates = secular_rates(*b->channels, b->ops);
            const bool cross = s.include_cross;
            const BIndex bi = s.cross_index;
            const SecularRates& rates = *b->rates;
            const OperatorSet& ops = b->ops;
            b->engine = {cross ? "secular+cross" : "secular", opt.t_max, [&rates, &ops, opt, cross, bi](const DensityMatrix& r) {
                             return evolve_secular(r, rates, ops, opt, cross, bi);
                         }};
            break;
        }
    }
    diag["engine"] = b->engine.name;
    return b;
}

void cmd_kernels(Context& c) {
    const KernelTable k = build_kernel_table(c.s.bath, kernel_grid(c.s));
    write_kernel_csv(k, c.out.path("kernels.csv"));
    c.diagnostics["F_H0"] = k.F_H.front();
    c.diagnostics["F_R0"] = k.F_R.front();
    c.diagnostics["convergence_delta"] = k.convergence_delta;
    if (k.F_H.front() != 0.0) c.diagnostics["flatness_one_period"] = kernel_flatness(k, c.s.system.bohr_period());
}

void cmd_coeffs(Context& c) {
    const KernelTable k = build_kernel_table(c.s.bath, kernel_grid(c.s));
    const CoefficientTable t = build_coefficients(k, c.s.system, c.s.bath.coupling);
    const std::string csv = c.out.path("coefficients.csv");
    write_coefficients_csv(t, csv);
    c.plot(csv, PlotKind::coefficient_traces, "coefficient_traces.svg");
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(t.provenance));
    c.diagnostics["provenance"] = hex;
    c.diagnostics["convergence_delta"] = k.convergence_delta;
    const double flat = kernel_flatness(k, c.s.system.bohr_period());
    c.diagnostics["flatness_one_period"] = flat;
    if (flat <= 0.01) {
        const CoefficientTable cf = adiabatic_closed_form(k, c.s.system, c.s.bath.coupling);
        double dev = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < t.size() && t.t[i] <= c.s.system.bohr_period() * (1 + 1e-12); ++i) {
            dev = std::max(dev, std::abs(t.D[i] - cf.D[i]));
            scale = std::max(scale, std::abs(cf.D[i]));
        }
        c.diagnostics["adiabatic_max_relative_deviation_D"] = scale > 0 ? dev / scale : 0.0;
    }
}

void write_trajectory_csv(const Trajectory& tr, const std::vector<std::pair<int, int>>& elements,
                          const std::string& path) {
    std::vector<std::string> header{"t"};
    for (auto [n, m] : elements) {
        header.push_back("re_rho_" + std::to_string(n) + "_" + std::to_string(m));
        header.push_back("im_rho_" + std::to_string(n) + "_" + std::to_string(m));
    }
    header.insert(header.end(), {"entropy", "linear_entropy", "trace_error", "top_occupation", "min_eigenvalue"});
    CsvWriter w(path, header);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        w << tr.t[i];
        for (auto [n, m] : elements) w << tr.rho[i](n, m).real() << tr.rho[i](n, m).imag();
        w << tr.entropy[i] << tr.linear_entropy[i] << tr.trace_error[i] << tr.top_occupation[i] << tr.min_eigenvalue[i];
        w.end_row();
    }
}

void cmd_evolve(Context& c) {
    auto b = make_engine(c.s, c.diagnostics);
    const DensityMatrix rho0 = make_state(c.s.initial.params(), c.s.system.fock_dim);
    const Trajectory tr = b->engine.evolve(rho0);
    const std::string csv = c.out.path("trajectory.csv");
    write_trajectory_csv(tr, c.s.output.elements, csv);
    c.plot(csv, PlotKind::entropy_curves, "entropy.svg");
    bool offdiag = false;
    for (auto [n, m] : c.s.output.elements) offdiag = offdiag || n != m;
    if (offdiag) c.plot(csv, PlotKind::offdiag_decay, "offdiag_decay.svg");
    c.diagnostics["initial_state"] = c.s.initial.params().label();
    c.diagnostics["max_trace_error"] = tr.max_trace_error();
    c.diagnostics["max_hermiticity_error"] = tr.max_hermiticity_error();
    c.diagnostics["min_eigenvalue"] = tr.min_min_eigenvalue();
    c.diagnostics["final_entropy"] = tr.entropy.back();
}

void cmd_rates(Context& c) {
    const OperatorSet ops = build_operators(c.s.system);
    const ChannelSet ch = build_channels(c.s.bath, ops);
    const SecularRates r = secular_rates(ch, ops);
    write_rates_csv(r, c.out.path("rates.csv"));
    c.diagnostics["averaging_period"] = r.averaging_period;
    c.diagnostics["gamma_sq_max"] = r.gamma_sq.maxCoeff();
}

std::vector<Candidate> sieve_candidates(const SieveSpec& sp, int dim, std::vector<RejectedCandidate>& rejected) {
    std::vector<Candidate> out;
    auto add = [&](const FamilyResult& fr) {
        for (const auto& c : fr.states) {
            const std::string label = c.params.label();
            bool dup = false;
            for (const auto& o : out) dup = dup || o.params.label() == label;
            if (!dup) out.push_back(c);
        }
        rejected.insert(rejected.end(), fr.rejected.begin(), fr.rejected.end());
    };
    for (FamilyKind k : sp.families) {
        StateFamily f;
        f.kind = k;
        f.dim = dim;
        f.n_max = sp.n_max;
        f.alphas = StateFamily::grid(sp.alpha_re, sp.alpha_im);
        f.pairs = sp.pairs;
        f.phases = sp.phases;
        f.squeeze_r = sp.squeeze_r;
        f.squeeze_theta = sp.squeeze_theta;
        add(generate_family(f));
    }
    if (sp.energy_matched) {
        StateFamily f;
        f.kind = FamilyKind::coherent_grid;
        f.dim = dim;
        for (int n = 1; n <= sp.n_max; ++n) f.alphas.emplace_back(std::sqrt(static_cast<double>(n)), 0.0);
        add(generate_family(f));
    }
    return out;
}

void cmd_sieve(Context& c) {
    auto b = make_engine(c.s, c.diagnostics);
    std::vector<RejectedCandidate> rejected;
    const auto cands = sieve_candidates(c.s.sieve, c.s.system.fock_dim, rejected);
    SieveOptions so;
    so.measure = c.s.sieve.measure;
    so.tie_tol = c.s.sieve.tie_tol;
    so.workers = static_cast<unsigned>(c.s.sieve.workers);
    SieveResult res = run_sieve(cands, b->engine, c.s.sieve.checkpoints, so);
    for (const auto& r : rejected) {
        SieveRecord rec;
        rec.params = r.params;
        rec.label = r.params.label();
        rec.excluded = true;
        rec.reason = r.reason;
        rec.score = std::numeric_limits<double>::infinity();
        rec.position = static_cast<int>(res.records.size() + 1);
        res.records.push_back(rec);
    }
    write_ranking_csv(res, c.out.path("ranking.csv"));
    const std::string curves = c.out.path("entropy_curves.csv");
    write_entropy_curves_csv(res, curves);
    c.plot(curves, PlotKind::entropy_curves, "entropy_curves.svg");
    {
        CsvWriter w(c.out.path("winners.csv"), {"checkpoint", "winners"});
        for (std::size_t i = 0; i < res.checkpoints.size(); ++i) {
            std::string names;
            for (const auto& l : res.checkpoint_winners[i]) names += (names.empty() ? "" : ";") + l;
            w << res.checkpoints[i] << names;
            w.end_row();
        }
    }
    int excluded = 0;
    for (const auto& r : res.records) excluded += r.excluded ? 1 : 0;
    c.diagnostics["candidates"] = res.records.size();
    c.diagnostics["excluded"] = excluded;
    c.diagnostics["robust"] = res.robust;
    c.diagnostics["degenerate"] = res.degenerate;
    if (!res.records.empty() && !res.records.front().excluded) c.diagnostics["top"] = res.records.front().label;

    if (c.s.sieve.minimize != "none") {
        const bool coh = c.s.sieve.minimize == "coherent";
        MinimizeEntropyOptions mo;
        const double bnd = c.s.sieve.minimize_bound;
        mo.box = coh ? std::vector<Bounds>{{-bnd, bnd}, {-bnd, bnd}} : std::vector<Bounds>{{0.0, bnd}, {0.0, kPi}};
        mo.search.points_per_dim = c.s.sieve.grid_points;
        mo.search.refine.max_evaluations = c.s.sieve.max_evaluations;
        const auto m = minimize_entropy(b->engine, c.s.sieve.measure,
                                        coh ? FamilyKind::coherent_grid : FamilyKind::squeezed_grid,
                                        c.s.sieve.t_star, c.s.system.fock_dim, mo);
        CsvWriter w(c.out.path("minimize.csv"),
                    {"family", "label", "x0", "x1", "score", "evaluations", "converged", "degenerate"});
        w << c.s.sieve.minimize << m.params.label() << m.x[0] << m.x[1] << m.score << m.evaluations
          << (m.converged ? 1 : 0) << (m.degenerate ? 1 : 0);
        w.end_row();
        c.diagnostics["minimize_label"] = m.params.label();
        c.diagnostics["minimize_score"] = m.score;
    }
}

void cmd_oracle(Context& c) {
    const auto& o = c.s.oracle;
    JointModel jm;
    jm.system = {c.s.system.mass, c.s.system.frequency, o.system_dim};
    jm.form = o.form;
    for (std::size_t j = 0; j < o.omegas.size(); ++j) jm.modes.push_back({o.omegas[j], o.g[j], o.k[j], o.truncation});
    std::vector<double> couplings;
    for (int i = 0; i < o.levels; ++i) couplings.push_back(o.e0 / std::pow(2.0, i));
    const DensityMatrix rho0 = coherent_state(cplx(o.alpha, 0.0), o.system_dim, 1e-6);
    ScalingOptions so;
    so.temperature = o.temperature;
    so.steps = o.steps;
    so.sign = c.s.solver.anomalous_sign;
    const ScalingReport rep = perturbative_scaling_check(jm, rho0, couplings, o.t_star, so);
    write_scaling_csv(rep, c.out.path("oracle_scaling.csv"));
    c.diagnostics["engine"] = rep.engine;
    c.diagnostics["monotone"] = rep.monotone;
    c.diagnostics["joint_dim"] = jm.joint_dim();
    json ratios = json::array();
    for (std::size_t i = 1; i < rep.rows.size(); ++i) ratios.push_back(rep.rows[i].ratio);
    c.diagnostics["ratios"] = ratios;
}

} // namespace

RunReport run_command(const std::string& subcommand, const Scenario& scenario, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    rep.output_dir = out_dir;
    std::unique_ptr<Outputs> out;
    try {
        if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
            fail(ErrorCategory::config, "unknown subcommand '" + subcommand + "'");
        out = std::make_unique<Outputs>(out_dir);
        {
            std::ofstream echo(out->path("resolved.cfg"), std::ios::binary | std::ios::trunc);
            echo << serialize_scenario(scenario);
        }
        Context ctx{scenario, *out};
        if (subcommand == "kernels") cmd_kernels(ctx);
        else if (subcommand == "coeffs") cmd_coeffs(ctx);
        else if (subcommand == "evolve") cmd_evolve(ctx);
        else if (subcommand == "rates") cmd_rates(ctx);
        else if (subcommand == "sieve") cmd_sieve(ctx);
        else cmd_oracle(ctx);

        rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::string manifest_path = out->path("manifest.json");
        rep.files = out->names();
        json m;
        m["tool"] = "einselect";
        m["subcommand"] = subcommand;
        m["resolved_config"] = "resolved.cfg";
        m["wall_time_seconds"] = rep.wall_time_seconds;
        m["files"] = rep.files;
        m["diagnostics"] = ctx.diagnostics;
        m["exit_code"] = 0;
        std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
        mf << m.dump(2) << '\n';
        rep.message = "ok";
    } catch (const Error& e) {
        if (out) out->rollback();
        rep.exit_code = e.exit_code() == 1 ? 1 : e.exit_code();
        rep.message = std::string(category_name(e.category())) + ": " + e.what();
        rep.files.clear();
    } catch (const std::exception& e) {
        if (out) out->rollback();
        rep.exit_code = 1;
        rep.message = std::string("error: ") + e.what();
        rep.files.clear();
    }
    rep.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

RunReport run_from_config(const std::string& subcommand, const std::string& config_path, const std::string& cli_out) {
    Scenario s;
    try {
        s = load_scenario(config_path);
    } catch (const Error& e) {
        RunReport rep;
        rep.exit_code = e.exit_code();
        rep.message = std::string(category_name(e.category())) + ": " + e.what();
        return rep;
    }
    return run_command(subcommand, s, resolve_output_dir(cli_out, s));
}

} // namespace einselect
