#include "einselect/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "einselect/csv.hpp"
#include "einselect/error.hpp"
#include "einselect/secular.hpp"

namespace einselect {

EntropyMeasure parse_entropy_measure(const std::string& s) {
    if (s == "linear") return EntropyMeasure::linear;
    if (s == "von_neumann" || s == "vn") return EntropyMeasure::von_neumann;
    fail(ErrorCategory::config, "unknown entropy measure '" + s + "' (expected linear|von_neumann)");
}

std::string to_string(EntropyMeasure m) { return m == EntropyMeasure::linear ? "linear" : "von_neumann"; }

Engine make_qbm_engine(const CoefficientTable& coeffs, const OperatorSet& ops, const SolverOptions& options) {
    return {"qbm", options.t_max,
            [&coeffs, &ops, options](const DensityMatrix& r) { return evolve_qbm(r, coeffs, ops, options); }};
}

Engine make_channel_engine(const ChannelSet& channels, const OperatorSet& ops, const SolverOptions& options) {
    return {"channels", options.t_max, [&channels, &ops, options](const DensityMatrix& r) {
                return evolve_channels(r, channels, ops, options);
            }};
}

Engine make_secular_engine(const SecularRates& rates, const OperatorSet& ops, const SolverOptions& options) {
    return {"secular", options.t_max,
            [&rates, &ops, options](const DensityMatrix& r) { return evolve_secular(r, rates, ops, options); }};
}

double entropy_of(const Trajectory& traj, std::size_t i, EntropyMeasure measure) {
    const double v = measure == EntropyMeasure::linear ? traj.linear_entropy.at(i) : traj.entropy.at(i);
    if (std::isnan(v)) fail(ErrorCategory::invalid_argument, "trajectory was recorded without spectra");
    // rounding can leave a pure state a hair below zero
    return std::max(0.0, v);
}

namespace {

SieveRecord evaluate(const Candidate& cand, const Engine& engine, const std::vector<double>& checkpoints,
                     EntropyMeasure measure) {
    SieveRecord rec;
    rec.params = cand.params;
    rec.label = cand.params.label();
    try {
        const Trajectory traj = engine.evolve(cand.rho);
        rec.times = traj.t;
        rec.entropy_curve.resize(traj.size());
        for (std::size_t i = 0; i < traj.size(); ++i) rec.entropy_curve[i] = entropy_of(traj, i, measure);
        const double tol = traj.size() > 1 ? 0.5 * (traj.t[1] - traj.t[0]) + 1e-12 : 1e-12;
        double sum = 0.0;
        for (double c : checkpoints) {
            const std::size_t i = traj.index_near(c);
            if (std::abs(traj.t[i] - c) > tol)
                fail(ErrorCategory::config, "checkpoint not on the recorded time grid");
            rec.checkpoint_entropy.push_back(rec.entropy_curve[i]);
            sum += rec.entropy_curve[i];
        }
        rec.score = sum / static_cast<double>(checkpoints.size());
    } catch (const Error& e) {
        if (e.category() == ErrorCategory::config) throw;
        rec.excluded = true;
        rec.reason = e.what();
        rec.score = std::numeric_limits<double>::infinity();
    }
    return rec;
}

} // namespace

SieveResult run_sieve(const std::vector<Candidate>& candidates, const Engine& engine,
                      const std::vector<double>& checkpoints, const SieveOptions& options) {
    require(!candidates.empty(), "sieve family is empty");
    require(!checkpoints.empty(), "sieve needs at least one checkpoint");
    for (double c : checkpoints)
        if (c < 0.0 || c > engine.t_max * (1.0 + 1e-12))
            fail(ErrorCategory::config, "sieve checkpoint outside [0, solver.t_max]");

    const std::size_t n = candidates.size();
    std::vector<SieveRecord> records(n);
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) records[i] = evaluate(candidates[i], engine, checkpoints, options.measure);
    } else {
        // strided partition; results land at fixed indices, so the merge is deterministic
        std::vector<std::future<void>> jobs;
        for (unsigned w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < n; i += workers)
                    records[i] = evaluate(candidates[i], engine, checkpoints, options.measure);
            }));
        for (auto& j : jobs) j.get();
    }

    std::stable_sort(records.begin(), records.end(), [](const SieveRecord& a, const SieveRecord& b) {
        if (a.excluded != b.excluded) return !a.excluded;
        if (a.score != b.score) return a.score < b.score;
        return a.label < b.label;
    });

    SieveResult res;
    res.checkpoints = checkpoints;
    res.engine = engine.name;
    res.measure = options.measure;
    std::size_t ranked = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto& r = records[i];
        r.position = static_cast<int>(i + 1);
        if (r.excluded) continue;
        ++ranked;
        if (i > 0 && !records[i - 1].excluded && r.score - records[i - 1].score <= options.tie_tol)
            r.rank = records[i - 1].rank;
        else
            r.rank = r.position;
    }
    res.records = std::move(records);
    if (ranked == 0) return res;

    const double lo = res.records.front().score;
    double hi = lo;
    for (std::size_t i = 0; i < ranked; ++i) hi = std::max(hi, res.records[i].score);
    res.degenerate = hi - lo <= options.tie_tol;

    res.checkpoint_winners.resize(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ranked; ++i) best = std::min(best, res.records[i].checkpoint_entropy[c]);
        for (std::size_t i = 0; i < ranked; ++i)
            if (res.records[i].checkpoint_entropy[c] - best <= options.tie_tol)
                res.checkpoint_winners[c].push_back(res.records[i].label);
    }
    res.robust = false;
    for (std::size_t i = 0; i < ranked && res.records[i].rank == 1; ++i) {
        bool everywhere = true;
        for (const auto& w : res.checkpoint_winners)
            everywhere = everywhere && std::find(w.begin(), w.end(), res.records[i].label) != w.end();
        res.robust = res.robust || everywhere;
    }
    return res;
}

EntropyMinimum minimize_entropy(const Engine& engine, EntropyMeasure measure, FamilyKind kind, double t_star,
                                int dim, const MinimizeEntropyOptions& options) {
    require(kind == FamilyKind::coherent_grid || kind == FamilyKind::squeezed_grid,
            "entropy minimization needs a continuous family (coherent_grid or squeezed_grid)");
    require(options.box.size() == 2, "entropy minimization expects a two-parameter box");
    if (t_star <= 0.0 || t_star > engine.t_max * (1.0 + 1e-12))
        fail(ErrorCategory::config, "sieve.t_star must lie in (0, solver.t_max]");

    auto params_of = [kind](std::span<const double> x) {
        CandidateParams p;
        p.kind = kind;
        if (kind == FamilyKind::coherent_grid) {
            p.alpha = cplx(x[0], x[1]);
        } else {
            p.r = std::abs(x[0]);
            p.theta = x[1];
        }
        return p;
    };
    const Objective f = [&](std::span<const double> x) {
        try {
            const Trajectory traj = engine.evolve(make_state(params_of(x), dim, options.tail_tol));
            return entropy_of(traj, traj.index_near(t_star), measure);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::truncation) return std::numeric_limits<double>::infinity();
            throw;
        }
    };
    const GridRefineResult r = grid_then_nelder_mead(f, options.box, options.search);
    EntropyMinimum out;
    out.x = r.x;
    out.params = params_of(r.x);
    out.score = r.value;
    out.evaluations = r.evaluations;
    out.converged = r.converged;
    out.degenerate = r.degenerate;
    return out;
}

void write_ranking_csv(const SieveResult& result, const std::string& path) {
    std::vector<std::string> header{"position", "rank", "label", "kind", "n", "m", "alpha_re", "alpha_im",
                                    "r", "theta", "phase", "score"};
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c)
        header.push_back("entropy_t" + format_double(result.checkpoints[c]));
    header.insert(header.end(), {"checkpoint_wins", "robust", "excluded", "reason"});
    CsvWriter w(path, header);
    for (const auto& r : result.records) {
        int wins = 0;
        for (const auto& win : result.checkpoint_winners)
            wins += std::find(win.begin(), win.end(), r.label) != win.end() ? 1 : 0;
        w << r.position << r.rank << r.label << to_string(r.params.kind) << r.params.n << r.params.m
          << r.params.alpha.real() << r.params.alpha.imag() << r.params.r << r.params.theta << r.params.phase
          << r.score;
        for (std::size_t c = 0; c < result.checkpoints.size(); ++c)
            w << (r.excluded ? std::numeric_limits<double>::quiet_NaN() : r.checkpoint_entropy[c]);
        w << wins << (result.robust ? 1 : 0) << (r.excluded ? 1 : 0) << r.reason;
        w.end_row();
    }
}

void write_entropy_curves_csv(const SieveResult& result, const std::string& path) {
    std::vector<const SieveRecord*> ranked;
    for (const auto& r : result.records)
        if (!r.excluded) ranked.push_back(&r);
    require(!ranked.empty(), "no ranked candidates to write");
    std::vector<std::string> header{"t"};
    for (const auto* r : ranked) header.push_back(r->label);
    CsvWriter w(path, header);
    const auto& times = ranked.front()->times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        w << times[i];
        for (const auto* r : ranked) w << (i < r->entropy_curve.size() ? r->entropy_curve[i] : 0.0);
        w.end_row();
    }
}

} // namespace einselect
