#include "einselect/channels.hpp"

#include <cmath>
#include <sstream>

#include "einselect/error.hpp"

namespace einselect {

double ChannelSet::c(std::size_t j, double t) const { return amp_H[j] * std::cos(omega[j] * t); }

double ChannelSet::c_prime(std::size_t j, double t) const { return amp_R[j] * std::sin(omega[j] * t); }

namespace {

// exp(i k x) by a single eigendecomposition of x shared by all nodes
struct PhaseFactory {
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    explicit PhaseFactory(const Matrix& x) : es(x) {
        if (es.info() != Eigen::Success) fail(ErrorCategory::invalid_argument, "eigendecomposition of x failed");
    }
    Matrix operator()(double k) const {
        const Vector phase = (cplx(0.0, k) * es.eigenvalues().cast<cplx>()).array().exp();
        return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    }
};

} // namespace

ChannelSet build_channels(const BathModel& model, const OperatorSet& ops) {
    model.validate();
    const KNodes nodes = build_k_nodes(model);
    const PhaseFactory expikx(ops.x);
    ChannelSet set;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double k = nodes.k[j];
        const double w = dispersion(k, model);
        const double base = model.coupling * 0.5 * nodes.measure[j] * window_weight(k, model) / (2.0 * w);
        set.S.push_back(expikx(k));
        set.k.push_back(k);
        set.omega.push_back(w);
        set.amp_H.push_back(base * (1.0 + 2.0 * occupation(k, model)));
        set.amp_R.push_back(base);
    }
    std::ostringstream os;
    os.precision(17);
    os << "continuum channels n_k=" << model.n_k << " e2=" << model.coupling;
    set.source = os.str();
    return set;
}

ChannelSet build_discrete_channels(std::span<const DiscreteMode> modes, double temperature, double e2,
                                   const OperatorSet& ops) {
    require(!modes.empty(), "no discrete modes");
    std::vector<bool> used(modes.size(), false);
    const PhaseFactory expikx(ops.x);
    ChannelSet set;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (used[i]) continue;
        const auto& a = modes[i];
        if (a.k == 0.0) fail(ErrorCategory::config, "exponential coupling needs nonzero mode wavenumbers");
        std::size_t partner = modes.size();
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            const auto& b = modes[j];
            if (!used[j] && b.k == -a.k && b.omega == a.omega && b.coupling == a.coupling) {
                partner = j;
                break;
            }
        }
        if (partner == modes.size()) {
            std::ostringstream os;
            os << "mode with k = " << a.k << " has no (-k) partner of equal frequency and coupling";
            fail(ErrorCategory::config, os.str());
        }
        used[i] = used[partner] = true;
        const double k = std::abs(a.k);
        const double g2 = a.coupling * a.coupling * e2;
        set.S.push_back(expikx(k));
        set.k.push_back(k);
        set.omega.push_back(a.omega);
        set.amp_H.push_back(g2 * (1.0 + 2.0 * thermal_occupation(a.omega, temperature)));
        set.amp_R.push_back(g2);
    }
    set.source = "discrete channels pairs=" + std::to_string(set.size());
    return set;
}

double max_unitarity_error(const ChannelSet& channels) {
    double worst = 0.0;
    for (const auto& s : channels.S) {
        const Matrix r = s.adjoint() * s - Matrix::Identity(s.rows(), s.cols());
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace einselect
