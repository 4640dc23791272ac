#include "einselect/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "einselect/channels.hpp"
#include "einselect/coeffs.hpp"
#include "einselect/csv.hpp"
#include "einselect/error.hpp"
#include "einselect/quadrature.hpp"

namespace einselect {

CouplingForm parse_coupling_form(const std::string& s) {
    if (s == "linear") return CouplingForm::linear;
    if (s == "exponential") return CouplingForm::exponential;
    fail(ErrorCategory::config, "unknown coupling form '" + s + "' (expected linear|exponential)");
}

std::string to_string(CouplingForm f) { return f == CouplingForm::linear ? "linear" : "exponential"; }

int JointModel::bath_dim() const {
    long d = 1;
    for (const auto& m : modes) {
        d *= (m.truncation + 1);
        if (d > kMaxJointDim) return kMaxJointDim + 1;
    }
    return static_cast<int>(d);
}

int JointModel::joint_dim() const {
    const long d = static_cast<long>(system.fock_dim) * bath_dim();
    return d > kMaxJointDim ? kMaxJointDim + 1 : static_cast<int>(d);
}

void JointModel::validate() const {
    system.validate();
    if (modes.empty()) fail(ErrorCategory::config, "oracle needs at least one bath mode");
    for (const auto& m : modes) {
        if (!(m.omega > 0.0)) fail(ErrorCategory::config, "oracle mode frequencies must be positive");
        if (m.truncation < 1) fail(ErrorCategory::config, "oracle mode truncation must be at least 1");
        if (!std::isfinite(m.coupling)) fail(ErrorCategory::config, "oracle couplings must be finite");
    }
    if (!std::isfinite(e)) fail(ErrorCategory::config, "oracle coupling e must be finite");
    if (joint_dim() > kMaxJointDim) {
        std::ostringstream os;
        os << "oracle joint dimension exceeds the cap of " << kMaxJointDim;
        fail(ErrorCategory::config, os.str());
    }
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix lowering(int levels) {
    Matrix b = Matrix::Zero(levels, levels);
    for (int n = 0; n + 1 < levels; ++n) b(n, n + 1) = std::sqrt(n + 1.0);
    return b;
}

// bath operator acting on mode j only
Matrix embed_mode(const JointModel& model, std::size_t j, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        const int lv = model.modes[i].truncation + 1;
        out = kron(out, i == j ? op : Matrix(Matrix::Identity(lv, lv)));
    }
    return out;
}

Matrix exp_ikx(const Matrix& x, double k) { return matrix_exp_unitary(x, k); }

} // namespace

Matrix joint_hamiltonian(const JointModel& model) {
    model.validate();
    const OperatorSet ops = build_operators(model.system);
    const int db = model.bath_dim();
    const int ds = ops.dim();
    Matrix H = kron(ops.H, Matrix::Identity(db, db));
    for (std::size_t j = 0; j < model.modes.size(); ++j) {
        const auto& m = model.modes[j];
        const Matrix b = embed_mode(model, j, lowering(m.truncation + 1));
        const Matrix bd = b.adjoint();
        H += m.omega * kron(Matrix::Identity(ds, ds), bd * b);
        const double g = model.e * m.coupling;
        if (g == 0.0) continue;
        if (model.form == CouplingForm::linear) {
            H += g * kron(ops.x, b + bd);
        } else {
            const Matrix S = exp_ikx(ops.x, m.k);
            const Matrix term = kron(S, b);
            H += g * (term + term.adjoint());
        }
    }
    return 0.5 * (H + H.adjoint());
}

ExactResult evolve_exact(const JointModel& model, const DensityMatrix& rho0, const std::vector<double>& t_grid,
                         const ExactOptions& options) {
    model.validate();
    require(rho0.dim() == model.system.fock_dim, "oracle system state has the wrong dimension");
    require(!t_grid.empty(), "oracle needs at least one output time");
    const int ds = model.system.fock_dim;
    const int db = model.bath_dim();
    const int dj = ds * db;

    // bath ensemble
    ExactResult res;
    std::vector<std::pair<int, double>> bath_members;  // (bath basis index, weight)
    if (options.temperature == 0.0) {
        bath_members.push_back({0, 1.0});
    } else {
        double kept_mass = 1.0;
        for (const auto& m : model.modes) {
            const double q = std::exp(-m.omega / options.temperature);
            kept_mass *= 1.0 - std::pow(q, m.truncation + 1);
        }
        res.gibbs_truncation = 1.0 - kept_mass;
        if (res.gibbs_truncation > options.gibbs_tol) {
            std::ostringstream os;
            os << "oracle bath truncation discards Gibbs weight " << res.gibbs_truncation << " > "
               << options.gibbs_tol << "; raise the per-mode truncation";
            fail(ErrorCategory::truncation, os.str());
        }
        std::vector<int> occ(model.modes.size(), 0);
        double total = 0.0;
        for (int b = 0; b < db; ++b) {
            // decode b with the last mode varying fastest
            int rem = b;
            double w = 1.0;
            for (std::size_t j = model.modes.size(); j-- > 0;) {
                const int lv = model.modes[j].truncation + 1;
                occ[j] = rem % lv;
                rem /= lv;
                const double q = std::exp(-model.modes[j].omega / options.temperature);
                w *= (1.0 - q) * std::pow(q, occ[j]);
            }
            if (w >= options.member_floor) {
                bath_members.push_back({b, w});
                total += w;
            }
        }
        for (auto& m : bath_members) m.second /= total;
    }

    // system unravelling
    Eigen::SelfAdjointEigenSolver<Matrix> sys(rho0.matrix());
    std::vector<std::pair<Vector, double>> sys_members;
    for (int i = ds - 1; i >= 0; --i)
        if (sys.eigenvalues()(i) > 1e-14) sys_members.push_back({sys.eigenvectors().col(i), sys.eigenvalues()(i)});

    const Matrix H = joint_hamiltonian(model);
    RealVector w;
    Matrix V;
    if (H.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(H.real());
        if (es.info() != Eigen::Success) fail(ErrorCategory::invalid_argument, "joint eigendecomposition failed");
        w = es.eigenvalues();
        V = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(H);
        if (es.info() != Eigen::Success) fail(ErrorCategory::invalid_argument, "joint eigendecomposition failed");
        w = es.eigenvalues();
        V = es.eigenvectors();
    }

    std::vector<Matrix> reduced(t_grid.size(), Matrix::Zero(ds, ds));
    for (const auto& [psi_s, ps] : sys_members) {
        for (const auto& [b, pb] : bath_members) {
            Vector psi0 = Vector::Zero(dj);
            for (int s = 0; s < ds; ++s) psi0(s * db + b) = psi_s(s);
            const Vector c = V.adjoint() * psi0;
            const double e0 = (c.cwiseAbs2().transpose() * w)(0);
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
                Vector ct(dj);
                for (int k = 0; k < dj; ++k) ct(k) = c(k) * std::polar(1.0, -w(k) * t_grid[i] / kHbar);
                const Vector psi = V * ct;
                const Vector hpsi = H * psi;
                res.max_energy_drift = std::max(res.max_energy_drift, std::abs(psi.dot(hpsi).real() - e0));
                res.max_norm_drift = std::max(res.max_norm_drift, std::abs(psi.squaredNorm() - 1.0));
                const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
                    psi.data(), ds, db);
                reduced[i].noalias() += ps * pb * (M * M.adjoint());
            }
            ++res.members;
        }
    }
    res.reduced.engine = "exact";
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const Matrix r = 0.5 * (reduced[i] + reduced[i].adjoint());
        append_snapshot(res.reduced, t_grid[i], r, true);
    }
    return res;
}

Trajectory oracle_master_run(const JointModel& model, const DensityMatrix& rho0, double e, double t_star,
                             const ScalingOptions& options, AnomalousSign sign) {
    require(options.steps >= 1, "oracle master run needs at least one step");
    const OperatorSet ops = build_operators(model.system);
    SolverOptions so;
    so.t_max = t_star;
    so.dt = t_star / options.steps;
    so.anomalous_sign = sign;
    // both sides evolve the same truncated system, so level truncation is part of the model here
    so.truncation_tol = std::numeric_limits<double>::infinity();
    if (model.form == CouplingForm::linear) {
        const auto grid = uniform_grid(t_star, 0.5 * so.dt);
        const KernelTable k = build_discrete_kernel_table(model.modes, options.temperature, grid);
        const CoefficientTable c = build_coefficients(k, model.system, e * e);
        return evolve_qbm(rho0, c, ops, so);
    }
    const ChannelSet ch = build_discrete_channels(model.modes, options.temperature, e * e, ops);
    return evolve_channels(rho0, ch, ops, so);
}

ScalingReport perturbative_scaling_check(const JointModel& model, const DensityMatrix& rho0,
                                         const std::vector<double>& couplings, double t_star,
                                         const ScalingOptions& options) {
    require(!couplings.empty(), "scaling check needs at least one coupling");
    require(t_star > 0.0, "scaling check needs t_star > 0");
    ScalingReport rep;
    rep.t_star = t_star;
    rep.engine = model.form == CouplingForm::linear ? "qbm" : "channels";
    const bool alt = options.report_alternate_sign && model.form == CouplingForm::linear;
    const AnomalousSign other =
        options.sign == AnomalousSign::plus ? AnomalousSign::minus : AnomalousSign::plus;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t i = 0; i < couplings.size(); ++i) {
        JointModel jm = model;
        jm.e = couplings[i];
        ExactOptions eo;
        eo.temperature = options.temperature;
        const ExactResult exact = evolve_exact(jm, rho0, {t_star}, eo);
        const Matrix& re = exact.reduced.final_state();

        ScalingRow row;
        row.e = couplings[i];
        Trajectory run = oracle_master_run(model, rho0, couplings[i], t_star, options, options.sign);
        row.delta = trace_distance(re, run.final_state());
        rep.master_runs.push_back(std::move(run));
        row.delta_alternate = alt
            ? trace_distance(re, oracle_master_run(model, rho0, couplings[i], t_star, options, other).final_state())
            : nan;
        row.ratio = i == 0 ? nan : rep.rows[i - 1].delta / row.delta;
        row.ratio_alternate = (i == 0 || !alt) ? nan : rep.rows[i - 1].delta_alternate / row.delta_alternate;
        if (i > 0 && std::abs(row.e) < std::abs(rep.rows[i - 1].e) && row.delta > rep.rows[i - 1].delta)
            rep.monotone = false;
        rep.rows.push_back(row);
    }
    return rep;
}

void write_scaling_csv(const ScalingReport& report, const std::string& path) {
    CsvWriter w(path, {"e", "delta", "ratio", "delta_alternate_sign", "ratio_alternate_sign"});
    for (const auto& r : report.rows) {
        w << r.e << r.delta << r.ratio << r.delta_alternate << r.ratio_alternate;
        w.end_row();
    }
}

} // namespace einselect
