#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochq/distributions.hpp"

namespace stochq {

/// Law of N mod M, indexed by residue 0..M-1.
struct ModularLaw {
  std::uint32_t modulus = 0;
  std::vector<double> probs;
  /// sqrt(probs[k]); the folded amplitudes.
  std::vector<double> beta;
  /// Probability mass not assigned to any residue (truncated tail). Zero for
  /// finite support and for the Fourier route.
  double unassigned_tail = 0.0;
  double max_abs_deviation = 0.0;
  double tv_distance = 0.0;
  /// (1/M) sum_{k=1}^{M-1} |phi(2 pi k / M)| when known.
  std::optional<double> cf_bound;

  /// Builds a law from raw residue probabilities and fills in the metrics.
  static ModularLaw from_probs(std::vector<double> probs, std::optional<double> cf_bound = {},
                               double unassigned_tail = 0.0);
};

struct UniformDeviation {
  double max_abs;
  double tv;
  /// M * sum_k (probs_k - 1/M)^2.
  double chi2_population;
};

struct CfDecayBound {
  double max_cf_magnitude;
  double per_point_bound;
};

/// Default tail tolerance for direct folding; small enough that conservation
/// holds to 1e-12 without accounting for the unassigned tail.
inline constexpr double kProjectionTolerance = 1e-14;

/// Folds the pmf over residue lattices k + jM up to the adaptive cutoff.
/// `tail_tolerance` must not exceed 1e-10.
ModularLaw project_direct(const DistributionSpec& spec, std::uint32_t modulus,
                          double tail_tolerance = kProjectionTolerance);

/// Inverse M-point DFT of characteristic-function samples phi(2 pi k / M).
/// Throws NumericalError if any residue keeps an imaginary part above 1e-10.
ModularLaw project_cf(const DistributionSpec& spec, std::uint32_t modulus);

UniformDeviation uniform_deviation(const ModularLaw& law);

CfDecayBound cf_decay_bound(const DistributionSpec& spec, std::uint32_t modulus);

/// One-parameter family whose scale (n, r or lambda) is searched by turng_advise.
struct ScaleFamily {
  Family family;
  /// Fixed success/event probability for binomial and negative binomial.
  double p = 0.5;
  NbConvention convention = NbConvention::Pmf;

  DistributionSpec at(double scale) const;
};

struct TurngAdvice {
  /// Minimal n or r (integral) or lambda (real) meeting the deviation target.
  double scale;
  double achieved_deviation;
  /// Scale at which the mean reaches 2M, the rule-of-thumb threshold.
  double heuristic_scale;
  double heuristic_deviation;
};

/// Smallest scale parameter whose direct projection deviates from uniform by
/// at most `epsilon` in max-abs. epsilon must lie in (0, 0.1].
TurngAdvice turng_advise(const ScaleFamily& family, std::uint32_t modulus, double epsilon);

}  // namespace stochq
