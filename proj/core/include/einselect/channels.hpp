#pragma once

// Discretized operator-coupling channels. Each node j carries the pair of
// directional channels S_j = exp(i k_j x) and S_j^dagger = exp(-i k_j x), both
// with kernels
//   c_j(t)  = amp_H[j] cos(w_j t)   (symmetric part, e^2 folded in)
//   c'_j(t) = amp_R[j] sin(w_j t)   (retarded part)

#include <span>
#include <string>
#include <vector>

#include "einselect/bath.hpp"
#include "einselect/hilbert.hpp"

namespace einselect {

struct ChannelSet {
    std::vector<Matrix> S;
    std::vector<double> k;
    std::vector<double> omega;
    std::vector<double> amp_H;
    std::vector<double> amp_R;
    std::string source;

    std::size_t size() const { return S.size(); }
    std::size_t directional_count() const { return 2 * S.size(); }
    double c(std::size_t j, double t) const;
    double c_prime(std::size_t j, double t) const;
};

/// Continuum bath: one node per quadrature point, directional weight
/// e^2 * measure / 2 times the single-mode kernels.
ChannelSet build_channels(const BathModel& model, const OperatorSet& ops);

/// Discrete modes with exponential coupling g (e^{ikx} a + h.c.). Modes must
/// come in (k, -k) pairs of equal frequency and coupling; each pair forms one
/// node with c = e2 g^2 (1 + 2N) cos(wt), c' = e2 g^2 sin(wt).
ChannelSet build_discrete_channels(std::span<const DiscreteMode> modes, double temperature, double e2,
                                   const OperatorSet& ops);

/// Largest |S^dagger S - 1| entry over all channels.
double max_unitarity_error(const ChannelSet& channels);

} // namespace einselect
