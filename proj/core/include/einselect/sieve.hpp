#pragma once

// Predictability sieve: evolve candidate pure states, score their entropy
// production, and rank them.

#include <functional>
#include <string>
#include <vector>

#include "einselect/optimize.hpp"
#include "einselect/solvers.hpp"
#include "einselect/states.hpp"

namespace einselect {

enum class EntropyMeasure { linear, von_neumann };

EntropyMeasure parse_entropy_measure(const std::string& s);
std::string to_string(EntropyMeasure m);

/// Any solver bound to its inputs: initial state in, trajectory out.
struct Engine {
    std::string name;
    double t_max = 0.0;
    std::function<Trajectory(const DensityMatrix&)> evolve;
};

Engine make_qbm_engine(const CoefficientTable& coeffs, const OperatorSet& ops, const SolverOptions& options);
Engine make_channel_engine(const ChannelSet& channels, const OperatorSet& ops, const SolverOptions& options);
struct SecularRates;
Engine make_secular_engine(const SecularRates& rates, const OperatorSet& ops, const SolverOptions& options);

struct SieveRecord {
    CandidateParams params;
    std::string label;
    std::vector<double> times;
    std::vector<double> entropy_curve;
    std::vector<double> checkpoint_entropy;
    double score = 0.0;
    int rank = 0;      ///< competition rank; ties share a rank
    int position = 0;  ///< 1-based position in the deterministic order
    bool excluded = false;
    std::string reason;
};

struct SieveOptions {
    EntropyMeasure measure = EntropyMeasure::linear;
    double tie_tol = 1e-10;
    /// Concurrent evaluations; 0 picks the hardware concurrency.
    unsigned workers = 0;
};

struct SieveResult {
    std::vector<SieveRecord> records;  ///< ranked first, then excluded ones
    std::vector<double> checkpoints;
    /// Labels of the minimum-entropy candidate(s) at each checkpoint.
    std::vector<std::vector<std::string>> checkpoint_winners;
    /// A top-ranked candidate wins at every checkpoint.
    bool robust = false;
    /// All scores tie within tie_tol.
    bool degenerate = false;
    std::string engine;
    EntropyMeasure measure = EntropyMeasure::linear;
};

SieveResult run_sieve(const std::vector<Candidate>& candidates, const Engine& engine,
                      const std::vector<double>& checkpoints, const SieveOptions& options = {});

double entropy_of(const Trajectory& traj, std::size_t i, EntropyMeasure measure);

struct EntropyMinimum {
    CandidateParams params;
    std::vector<double> x;
    double score = 0.0;
    int evaluations = 0;
    bool converged = false;
    bool degenerate = false;
};

struct MinimizeEntropyOptions {
    /// Parameter box: coherent (Re alpha, Im alpha); squeezed (r, theta).
    std::vector<Bounds> box;
    GridSearchOptions search;
    double tail_tol = 1e-10;
};

/// Minimizes the entropy at t_star over a continuous family. Truncation-unsafe
/// parameters score +inf.
EntropyMinimum minimize_entropy(const Engine& engine, EntropyMeasure measure, FamilyKind kind, double t_star,
                                int dim, const MinimizeEntropyOptions& options);

void write_ranking_csv(const SieveResult& result, const std::string& path);
/// Columns: t, then one entropy column per ranked candidate (in rank order).
void write_entropy_curves_csv(const SieveResult& result, const std::string& path);

} // namespace einselect
