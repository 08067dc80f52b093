#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "stochq/hilbert.hpp"

namespace stochq::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxDimension = 512;
inline constexpr std::size_t kMaxCompositeDimension = 4096;

/// Truncated number basis |0> ... |D-1> with energy quantum hbar*omega.
struct FockConfig {
  std::size_t dimension;
  double energy_scale = 1.0;

  /// Throws DomainError unless 2 <= dimension <= 512 and energy_scale > 0.
  void validate() const;
};

/// Dense Hermitian matrix; construction checks Hermiticity within
/// 1e-12 times the largest entry magnitude.
class HermitianOperator {
public:
  explicit HermitianOperator(Matrix entries);

  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

  HermitianOperator operator+(const HermitianOperator& other) const;

private:
  Matrix entries_;
};

/// Unit-norm state vector (norm within 1e-10).
class QuantumStateVector {
public:
  explicit QuantumStateVector(Vector entries);

  /// Rescales an arbitrary nonzero vector to unit norm.
  static QuantumStateVector normalized(Vector entries);
  static QuantumStateVector basis(std::size_t index, std::size_t dimension);

  const Vector& vector() const noexcept { return entries_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(entries_.size()); }

private:
  Vector entries_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. `eigen_floor` is the
/// most negative eigenvalue tolerated, `trace_slack` the allowed |Tr - 1|.
class DensityOperator {
public:
  explicit DensityOperator(Matrix entries, double eigen_floor = -1e-8,
                           double trace_slack = 1e-10);

  static DensityOperator pure(const QuantumStateVector& psi);
  static DensityOperator maximally_mixed(std::size_t dimension);

  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double trace() const { return entries_.trace().real(); }
  double purity() const { return (entries_ * entries_).trace().real(); }
  /// Diagonal entry <n|rho|n>.
  double population(std::size_t n) const { return entries_(n, n).real(); }

private:
  Matrix entries_;
};

/// A value together with a flag raised when an accuracy envelope was exceeded.
template <class T>
struct Flagged {
  T value;
  bool outside_envelope = false;
};

Matrix annihilation(const FockConfig& cfg);
Matrix creation(const FockConfig& cfg);
Matrix number_operator(const FockConfig& cfg);

/// hbar*omega (N + 1/2).
HermitianOperator qho_hamiltonian(const FockConfig& cfg);

/// exp(alpha a^dagger - conj(alpha) a). Flagged when |alpha|^2 > D/4.
Flagged<Matrix> displacement(const FockConfig& cfg, Complex alpha);

/// Truncated, renormalized coherent-state series. Flagged when |alpha|^2 > D/4.
Flagged<QuantumStateVector> coherent_state(const FockConfig& cfg, Complex alpha);

/// hbar*omega (-alpha a^dagger - conj(alpha) a + |alpha|^2); the coherent state
/// |alpha> is an eigenstate of H_QHO plus this term with eigenvalue hbar*omega/2.
HermitianOperator poisson_perturbation(const FockConfig& cfg, Complex alpha);

/// qho_hamiltonian(cfg) + poisson_perturbation(cfg, alpha).
HermitianOperator poisson_hamiltonian(const FockConfig& cfg, Complex alpha);

/// Delta V = hbar*omega (I - |psi><psi|) - H_QHO, so that H_QHO + Delta V has
/// |psi> (the target amplitudes) as unique ground state, eigenvalue 0, gap hbar*omega.
/// Throws DomainError if more than 1e-10 probability lies outside the register.
HermitianOperator synthesize_perturbation(const StochasticState& target, const FockConfig& cfg);

struct EigenDecomposition {
  /// Ascending.
  Eigen::VectorXd values;
  /// Orthonormal eigenvectors as columns, in the order of `values`.
  Matrix vectors;
};

/// Cyclic complex Jacobi. Converges when the off-diagonal Frobenius norm falls
/// below 1e-12 ||H||_F; throws NumericalError after the sweep cap.
EigenDecomposition hermitian_eigen(const HermitianOperator& h);

/// exp(A t) by scaling and squaring around a truncated Taylor core.
Matrix matrix_exponential(const Matrix& a, double t = 1.0);

/// Spectral propagator exp(-i H t) built once from a decomposition.
class SpectralPropagator {
public:
  explicit SpectralPropagator(const HermitianOperator& h);

  QuantumStateVector evolve(const QuantumStateVector& psi0, double t) const;
  Matrix unitary(double t) const;
  const EigenDecomposition& spectrum() const noexcept { return spectrum_; }

private:
  EigenDecomposition spectrum_;
};

/// |psi(t)> = sum_k exp(-i E_k t) <phi_k|psi(0)> |phi_k>.
QuantumStateVector evolve(const HermitianOperator& h, const QuantumStateVector& psi0, double t);

/// Bipartite pure state sum c_nm |n>_A |m>_B.
class CompositeState {
public:
  /// Throws DomainError unless sum |c_nm|^2 = 1 within 1e-10 and D_A * D_B <= 4096.
  explicit CompositeState(Matrix coefficients);

  static CompositeState product(const QuantumStateVector& a, const QuantumStateVector& b);

  const Matrix& coefficients() const noexcept { return coefficients_; }
  /// P_nm = |c_nm|^2.
  Eigen::MatrixXd joint_probabilities() const;
  Eigen::VectorXd marginal_a() const;
  Eigen::VectorXd marginal_b() const;
  /// Tr_B |Psi><Psi| = C C^dagger.
  Matrix reduced_a() const;
  /// Tr_A |Psi><Psi| = C^T conj(C).
  Matrix reduced_b() const;

private:
  Matrix coefficients_;
};

CompositeState joint_state(const Matrix& coefficients);

enum class Subsystem { A, B };

/// -Tr(rho ln rho) of the reduced state of one subsystem, in nats.
double entanglement_entropy(const CompositeState& state, Subsystem which = Subsystem::A);

/// Von Neumann entropy of a Hermitian positive matrix, in nats (0 ln 0 = 0).
double von_neumann_entropy(const Matrix& rho);

/// Integrates d rho/dt = -i[H0, rho] + V rho V^dagger - (V^dagger V rho + rho V^dagger V)/2
/// with `steps` classical RK4 steps of size dt. Requires dt <= 1e-2 / ||H0||_2.
/// Throws NumericalError if the trace drifts by more than 1e-8 or an eigenvalue
/// drops below -1e-6.
DensityOperator lindblad_step(const HermitianOperator& h0, const Matrix& v,
                              const DensityOperator& rho, double dt, std::size_t steps);

}  // namespace stochq::fock
