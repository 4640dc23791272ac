#pragma once

// Truncated Fock-space linear algebra for a single harmonic mode.
// Units: hbar = 1 throughout.

#include <complex>
#include <Eigen/Dense>

namespace einselect {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHbar = 1.0;
inline constexpr double kPi = 3.14159265358979323846;

struct SystemParams {
    double mass = 1.0;
    double frequency = 1.0;
    int fock_dim = 16;

    void validate() const;
    /// Position scale sqrt(hbar / 2 m Omega).
    double x_char() const;
    double bohr_period() const { return 2.0 * kPi / frequency; }
};

struct OperatorSet {
    SystemParams params;
    Matrix a;
    Matrix a_dag;
    Matrix x;
    Matrix p;
    Matrix H;
    RealVector energies;

    int dim() const { return static_cast<int>(energies.size()); }
    /// omega_nm = (E_n - E_m) / hbar
    double bohr(int n, int m) const { return (energies(n) - energies(m)) / kHbar; }
};

OperatorSet build_operators(const SystemParams& params);

/// Hermitian, unit-trace state. Construction validates trace and Hermiticity;
/// `trace_tol` is loosened for integrator snapshots, which carry drift.
class DensityMatrix {
public:
    static constexpr double kConstructionTol = 1e-12;

    explicit DensityMatrix(Matrix rho, double trace_tol = kConstructionTol,
                           double hermitian_tol = kConstructionTol);

    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix fock(int n, int dim);
    static DensityMatrix maximally_mixed(int dim);

    const Matrix& matrix() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    cplx operator()(int n, int m) const { return rho_(n, m); }

    double trace_error() const;
    double hermiticity_error() const;
    double purity() const;
    DensityMatrix adjoint() const;

private:
    Matrix rho_;
};

/// Coherent state |alpha> truncated to `dim` levels and renormalized.
/// Rejects amplitudes whose Poisson weight beyond the cutoff exceeds `tail_tol`.
DensityMatrix coherent_state(cplx alpha, int dim, double tail_tol = 1e-10);
Vector coherent_amplitudes(cplx alpha, int dim, double tail_tol = 1e-10);
/// Poisson weight sum_{n >= dim} e^{-|a|^2} |a|^{2n} / n!
double coherent_tail_weight(cplx alpha, int dim);

RealVector eigenvalues(const DensityMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);

/// -Tr rho log rho in nats. Eigenvalues at or below 1e-14 contribute 0.
double von_neumann_entropy(const DensityMatrix& rho);
/// Entropy sum over a spectrum with the same floors as von_neumann_entropy.
double entropy_from_eigenvalues(const RealVector& lam);
/// 1 - Tr rho^2
double linear_entropy(const DensityMatrix& rho);
/// (1/2) sum |mu_i| over eigenvalues of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

cplx expectation(const DensityMatrix& rho, const Matrix& op);

/// exp(i * scale * generator) for Hermitian `generator`, by eigendecomposition.
Matrix matrix_exp_unitary(const Matrix& generator, double scale);

/// Combined population of the top `levels` Fock states.
double top_occupation(const Matrix& rho, int levels = 2);

/// Largest |A - A^dagger| entry.
double max_antihermitian(const Matrix& m);

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
inline Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

} // namespace einselect
