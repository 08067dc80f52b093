#include "stochq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <numeric>
#include <string>

#include "stochq/error.hpp"
#include "stochq/numeric.hpp"

namespace stochq::fock {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr double kStateNormSlack = 1e-10;
constexpr double kEnvelopeFraction = 0.25;

double max_entry_magnitude(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Two-sided unitary rotation in the (p, q) plane annihilating a(p, q).
void jacobi_rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double magnitude = std::abs(apq);
  const Complex phase = apq / magnitude;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  // Real symmetric Jacobi angle for [[app, |apq|], [|apq|, aqq]].
  const double theta = (aqq - app) / (2.0 * magnitude);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // G = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q).
  const Complex g_pp = c;
  const Complex g_pq = s;
  const Complex g_qp = -std::conj(phase) * s;
  const Complex g_qq = std::conj(phase) * c;

  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = aip * g_pp + aiq * g_qp;
    a(i, q) = aip * g_pq + aiq * g_qq;
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex apj = a(p, j);
    const Complex aqj = a(q, j);
    a(p, j) = std::conj(g_pp) * apj + std::conj(g_qp) * aqj;
    a(q, j) = std::conj(g_pq) * apj + std::conj(g_qq) * aqj;
  }
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const Complex vip = v(i, p);
    const Complex viq = v(i, q);
    v(i, p) = vip * g_pp + viq * g_qp;
    v(i, q) = vip * g_pq + viq * g_qq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

Matrix lindblad_rhs(const Matrix& h, const Matrix& v, const Matrix& v_dag, const Matrix& decay,
                    const Matrix& rho) {
  const Complex i{0.0, 1.0};
  Matrix out = -i * (h * rho - rho * h);
  if (v.size() != 0) {
    out += v * rho * v_dag - 0.5 * (decay * rho + rho * decay);
  }
  return out;
}

double spectral_norm(const HermitianOperator& h) {
  const EigenDecomposition e = hermitian_eigen(h);
  return e.values.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& hermitian) {
  return hermitian_eigen(HermitianOperator(hermitian_part(hermitian))).values(0);
}

}  // namespace

void FockConfig::validate() const {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw DomainError("Fock dimension must lie in [2, 512], got " + std::to_string(dimension));
  }
  if (!(energy_scale > 0.0) || !std::isfinite(energy_scale)) {
    throw DomainError("energy scale must be positive and finite");
  }
}

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DomainError("Hermitian operator must be a nonempty square matrix");
  }
  const double scale = max_entry_magnitude(entries_);
  const double asym = max_entry_magnitude(entries_ - entries_.adjoint());
  if (!std::isfinite(scale) || asym > 1e-12 * scale) {
    throw DomainError("operator is not Hermitian within tolerance");
  }
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dimension() != other.dimension()) throw DomainError("operator dimensions differ");
  return HermitianOperator(entries_ + other.entries_);
}

QuantumStateVector::QuantumStateVector(Vector entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw DomainError("state vector must be nonempty");
  if (std::abs(entries_.norm() - 1.0) > kStateNormSlack) {
    throw DomainError("state vector is not normalized");
  }
}

QuantumStateVector QuantumStateVector::normalized(Vector entries) {
  const double norm = entries.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero vector");
  return QuantumStateVector(entries / norm);
}

QuantumStateVector QuantumStateVector::basis(std::size_t index, std::size_t dimension) {
  if (index >= dimension) throw DomainError("basis index outside register");
  Vector e = Vector::Zero(static_cast<Eigen::Index>(dimension));
  e(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumStateVector(std::move(e));
}

DensityOperator::DensityOperator(Matrix entries, double eigen_floor, double trace_slack)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DomainError("density operator must be a nonempty square matrix");
  }
  if (max_entry_magnitude(entries_ - entries_.adjoint()) > 1e-10) {
    throw DomainError("density operator is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > trace_slack) {
    throw DomainError("density operator trace differs from 1");
  }
  if (min_eigenvalue(entries_) < eigen_floor) {
    throw DomainError("density operator has a negative eigenvalue");
  }
}

DensityOperator DensityOperator::pure(const QuantumStateVector& psi) {
  return DensityOperator(psi.vector() * psi.vector().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(dimension));
}

Matrix annihilation(const FockConfig& cfg) {
  cfg.validate();
  const auto d = static_cast<Eigen::Index>(cfg.dimension);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix creation(const FockConfig& cfg) { return annihilation(cfg).adjoint(); }

Matrix number_operator(const FockConfig& cfg) {
  cfg.validate();
  const auto d = static_cast<Eigen::Index>(cfg.dimension);
  Matrix n = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

HermitianOperator qho_hamiltonian(const FockConfig& cfg) {
  cfg.validate();
  const auto d = static_cast<Eigen::Index>(cfg.dimension);
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    h(k, k) = cfg.energy_scale * (static_cast<double>(k) + 0.5);
  }
  return HermitianOperator(std::move(h));
}

Flagged<Matrix> displacement(const FockConfig& cfg, Complex alpha) {
  const Matrix a = annihilation(cfg);
  const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const bool outside = std::norm(alpha) > kEnvelopeFraction * static_cast<double>(cfg.dimension);
  return {matrix_exponential(generator), outside};
}

Flagged<QuantumStateVector> coherent_state(const FockConfig& cfg, Complex alpha) {
  cfg.validate();
  const bool outside = std::norm(alpha) > kEnvelopeFraction * static_cast<double>(cfg.dimension);
  if (alpha == Complex{0.0, 0.0}) {
    return {QuantumStateVector::basis(0, cfg.dimension), false};
  }
  const auto d = static_cast<Eigen::Index>(cfg.dimension);
  const long double log_mag = std::log(static_cast<long double>(std::abs(alpha)));
  const long double half_norm = 0.5L * static_cast<long double>(std::norm(alpha));
  const double phase = std::arg(alpha);
  std::vector<long double> mags(cfg.dimension);
  long double mass = 0.0L;
  for (Eigen::Index n = 0; n < d; ++n) {
    const auto k = static_cast<std::uint64_t>(n);
    const long double log_amp =
        -half_norm + static_cast<long double>(k) * log_mag - 0.5L * log_factorial(k);
    mags[k] = std::exp(log_amp);
    mass += mags[k] * mags[k];
  }
  // Sequential long-double mass so the renormalization is stable as D grows.
  const long double scale = 1.0L / std::sqrt(mass);
  Vector psi(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    psi(n) = std::polar(static_cast<double>(mags[static_cast<std::size_t>(n)] * scale),
                        phase * static_cast<double>(n));
  }
  return {QuantumStateVector(std::move(psi)), outside};
}

HermitianOperator poisson_perturbation(const FockConfig& cfg, Complex alpha) {
  const Matrix a = annihilation(cfg);
  const auto d = static_cast<Eigen::Index>(cfg.dimension);
  Matrix dv = -alpha * a.adjoint() - std::conj(alpha) * a +
              std::norm(alpha) * Matrix::Identity(d, d);
  return HermitianOperator(cfg.energy_scale * dv);
}

HermitianOperator poisson_hamiltonian(const FockConfig& cfg, Complex alpha) {
  return qho_hamiltonian(cfg) + poisson_perturbation(cfg, alpha);
}

HermitianOperator synthesize_perturbation(const StochasticState& target, const FockConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.dimension;
  CompensatedSum outside;
  outside += target.tail_mass();
  for (std::size_t n = d; n < target.dimension(); ++n) {
    outside += target.amplitude(n) * target.amplitude(n);
  }
  if (outside.value() > 1e-10) {
    throw DomainError("synthesize_perturbation: target keeps " + std::to_string(outside.value()) +
                      " probability outside the register");
  }
  const auto dim = static_cast<Eigen::Index>(d);
  Vector psi = Vector::Zero(dim);
  for (std::size_t n = 0; n < std::min(d, target.dimension()); ++n) {
    psi(static_cast<Eigen::Index>(n)) = target.amplitude(n);
  }
  psi /= psi.norm();
  const Matrix shifted =
      cfg.energy_scale * (Matrix::Identity(dim, dim) - psi * psi.adjoint());
  return HermitianOperator(hermitian_part(shifted - qho_hamiltonian(cfg).matrix()));
}

EigenDecomposition hermitian_eigen(const HermitianOperator& h) {
  Matrix a = h.matrix();
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();

  if (scale > 0.0) {
    int sweep = 0;
    while (off_diagonal_norm(a) > kOffDiagonalTolerance * scale) {
      if (++sweep > kMaxSweeps) {
        throw NumericalError("hermitian_eigen: Jacobi sweeps did not converge");
      }
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          if (std::abs(a(p, q)) > 1e-300) jacobi_rotate(a, v, p, q);
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&a](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });
  EigenDecomposition out{Eigen::VectorXd(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

Matrix matrix_exponential(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw DomainError("matrix_exponential: matrix must be square");
  const Matrix scaled = a * t;
  const double norm = scaled.size() == 0 ? 0.0 : one_norm(scaled);
  if (!std::isfinite(norm)) throw NumericalError("matrix_exponential: non-finite input");

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  if (squarings > 1000) throw NumericalError("matrix_exponential: norm too large");

  const Matrix x = scaled / std::ldexp(1.0, squarings);
  const Eigen::Index n = a.rows();
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    result += term;
    if (one_norm(term) <= 1e-18 * one_norm(result)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  if (!result.allFinite()) throw NumericalError("matrix_exponential: overflow");
  return result;
}

SpectralPropagator::SpectralPropagator(const HermitianOperator& h) : spectrum_(hermitian_eigen(h)) {}

QuantumStateVector SpectralPropagator::evolve(const QuantumStateVector& psi0, double t) const {
  if (psi0.dimension() != static_cast<std::size_t>(spectrum_.values.size())) {
    throw DomainError("evolve: state and Hamiltonian dimensions differ");
  }
  Vector coeffs = spectrum_.vectors.adjoint() * psi0.vector();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -spectrum_.values(k) * t);
  }
  return QuantumStateVector(spectrum_.vectors * coeffs);
}

Matrix SpectralPropagator::unitary(double t) const {
  const Eigen::Index n = spectrum_.values.size();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, -spectrum_.values(k) * t);
  return spectrum_.vectors * phases.asDiagonal() * spectrum_.vectors.adjoint();
}

QuantumStateVector evolve(const HermitianOperator& h, const QuantumStateVector& psi0, double t) {
  return SpectralPropagator(h).evolve(psi0, t);
}

CompositeState::CompositeState(Matrix coefficients) : coefficients_(std::move(coefficients)) {
  const auto rows = static_cast<std::size_t>(coefficients_.rows());
  const auto cols = static_cast<std::size_t>(coefficients_.cols());
  if (rows == 0 || cols == 0) throw DomainError("composite state must be nonempty");
  if (rows * cols > kMaxCompositeDimension) {
    throw DomainError("composite dimension exceeds 4096");
  }
  if (std::abs(coefficients_.squaredNorm() - 1.0) > kStateNormSlack) {
    throw DomainError("composite coefficients are not normalized");
  }
}

CompositeState CompositeState::product(const QuantumStateVector& a, const QuantumStateVector& b) {
  return CompositeState(a.vector() * b.vector().transpose());
}

Eigen::MatrixXd CompositeState::joint_probabilities() const { return coefficients_.cwiseAbs2(); }

Eigen::VectorXd CompositeState::marginal_a() const {
  return joint_probabilities().rowwise().sum();
}

Eigen::VectorXd CompositeState::marginal_b() const {
  return joint_probabilities().colwise().sum().transpose();
}

Matrix CompositeState::reduced_a() const { return coefficients_ * coefficients_.adjoint(); }

Matrix CompositeState::reduced_b() const {
  return coefficients_.transpose() * coefficients_.conjugate();
}

CompositeState joint_state(const Matrix& coefficients) { return CompositeState(coefficients); }

double von_neumann_entropy(const Matrix& rho) {
  const EigenDecomposition e = hermitian_eigen(HermitianOperator(hermitian_part(rho)));
  double s = 0.0;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    const double lambda = e.values(k);
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

double entanglement_entropy(const CompositeState& state, Subsystem which) {
  return von_neumann_entropy(which == Subsystem::A ? state.reduced_a() : state.reduced_b());
}

DensityOperator lindblad_step(const HermitianOperator& h0, const Matrix& v,
                              const DensityOperator& rho, double dt, std::size_t steps) {
  const Eigen::Index d = h0.matrix().rows();
  if (rho.dimension() != h0.dimension()) throw DomainError("lindblad: dimension mismatch");
  if (v.size() != 0 && (v.rows() != d || v.cols() != d)) {
    throw DomainError("lindblad: jump operator dimension mismatch");
  }
  if (!(dt > 0.0) || !std::isfinite(dt * static_cast<double>(steps))) {
    throw DomainError("lindblad: dt must be positive and dt*steps finite");
  }
  const double h_norm = spectral_norm(h0);
  if (h_norm > 0.0 && dt > 1e-2 / h_norm) {
    throw DomainError("lindblad: dt exceeds 1e-2 / ||H0||");
  }

  const Matrix& h = h0.matrix();
  const Matrix v_dag = v.adjoint();
  const Matrix decay = v.size() != 0 ? Matrix(v_dag * v) : Matrix();
  Matrix state = rho.matrix();
  for (std::size_t step = 0; step < steps; ++step) {
    const Matrix k1 = lindblad_rhs(h, v, v_dag, decay, state);
    const Matrix k2 = lindblad_rhs(h, v, v_dag, decay, state + 0.5 * dt * k1);
    const Matrix k3 = lindblad_rhs(h, v, v_dag, decay, state + 0.5 * dt * k2);
    const Matrix k4 = lindblad_rhs(h, v, v_dag, decay, state + dt * k3);
    state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const double trace = state.trace().real();
  if (std::abs(trace - 1.0) > 1e-8) {
    throw NumericalError("lindblad: trace drifted to " + std::to_string(trace) +
                         "; use a smaller dt");
  }
  state = hermitian_part(state);
  if (min_eigenvalue(state) < -1e-6) {
    throw NumericalError("lindblad: positivity lost; use a smaller dt");
  }
  return DensityOperator(std::move(state), -1e-6, 1e-8);
}

}  // namespace stochq::fock
