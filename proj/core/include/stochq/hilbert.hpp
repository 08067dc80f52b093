#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stochq/distributions.hpp"

namespace stochq {

/// A value with a symmetric uncertainty interval induced by truncation.
struct Estimate {
  double value;
  double half_width;
};

/// Truncated amplitude state sum_n alpha_n |n> with alpha_n = sqrt(P(n)) >= 0.
///
/// `tail_mass` is the probability not represented by the explicit amplitudes
/// (1 - sum alpha_n^2, never negative); `tail_bound` is the rigorous majorant
/// that was used to choose the truncation. Both are zero for finite-support laws.
class StochasticState {
public:
  /// Wraps raw amplitudes. Throws DomainError if any amplitude is negative or
  /// sum alpha^2 + tail_mass is not 1 within 1e-12.
  static StochasticState from_amplitudes(std::vector<double> amplitudes, double tail_mass = 0.0);

  /// Point mass on basis state |index> in a register of `dimension` entries.
  static StochasticState point_mass(std::size_t index, std::size_t dimension);

  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  double amplitude(std::size_t n) const noexcept {
    return n < amplitudes_.size() ? amplitudes_[n] : 0.0;
  }
  double tail_mass() const noexcept { return tail_mass_; }
  double tail_bound() const noexcept { return tail_bound_; }
  const std::optional<DistributionSpec>& source() const noexcept { return source_; }

  /// sum alpha_n^2 over the explicit amplitudes.
  double explicit_norm_squared() const noexcept;

private:
  friend StochasticState build_state(const DistributionSpec&, double, std::uint64_t);

  StochasticState(std::vector<double> amplitudes, double tail_mass, double tail_bound,
                  std::optional<DistributionSpec> source);

  std::vector<double> amplitudes_;
  double tail_mass_ = 0.0;
  double tail_bound_ = 0.0;
  std::optional<DistributionSpec> source_;
};

/// Amplitude state of a distribution, truncated adaptively so that the tail
/// bound does not exceed `tail_tolerance` (which must lie in (0, 1e-6]).
StochasticState build_state(const DistributionSpec& spec, double tail_tolerance = 1e-12,
                            std::uint64_t cap = kDefaultDimensionCap);

/// -sum P log P in the given base. For an unbounded source the half-width is
/// the explicitly summed tail entropy; otherwise tail_mass * log(D) / log(base).
Estimate shannon_entropy(const StochasticState& state, double log_base = 2.718281828459045);

/// 4 sum (d alpha_n / d theta)^2 from closed-form amplitude derivatives.
double fisher_information(const DistributionSpec& spec, Parameter parameter);

/// Same quantity from Richardson-refined central differences of the amplitudes.
double fisher_information_numeric(const DistributionSpec& spec, Parameter parameter);

/// <N^k> = sum n^k P(n), k in [1, 8]. The half-width estimates the omitted tail.
Estimate moment(const StochasticState& state, unsigned k);

/// sum alpha_n beta_n over the common range, with a Cauchy-Schwarz tail interval.
Estimate overlap(const StochasticState& a, const StochasticState& b);

/// Euclidean norm of the amplitude difference (missing entries count as 0).
double l2_distance(const StochasticState& a, const StochasticState& b);

/// True iff NB(1, p) and Geometric(p) amplitudes agree within one ulp per term.
bool nb_hierarchy_check(double p);

}  // namespace stochq
