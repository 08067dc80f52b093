#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace stochq {

enum class Family { Binomial, NegativeBinomial, Geometric, Poisson, Hypergeometric };

/// Parameterization of the negative binomial law.
///
/// `Pmf` is the library default: P(n) = C(n+r-1, n) (1-p)^r p^n, so `p` weights
/// each counted event. `Swapped` exchanges the roles of p and 1-p:
/// P(n) = C(n+r-1, n) p^r (1-p)^n, the form whose characteristic-function
/// magnitude is |p / (1 - (1-p) e^{iw})|^r.
enum class NbConvention { Pmf, Swapped };

struct BinomialParams {
  std::uint64_t trials;
  double p;

  bool operator==(const BinomialParams&) const = default;
};

struct NegativeBinomialParams {
  std::uint64_t r;
  double p;
  NbConvention convention = NbConvention::Pmf;

  bool operator==(const NegativeBinomialParams&) const = default;
};

struct GeometricParams {
  double p;

  bool operator==(const GeometricParams&) const = default;
};

struct PoissonParams {
  double lambda;

  bool operator==(const PoissonParams&) const = default;
};

struct HypergeometricParams {
  std::uint64_t population;
  std::uint64_t marked;
  std::uint64_t draws;

  bool operator==(const HypergeometricParams&) const = default;
};

/// Continuous parameters that information measures can differentiate against.
enum class Parameter { P, Lambda };

/// Inclusive support window [lo, hi]; `hi` is empty for unbounded families.
struct Support {
  std::uint64_t lo = 0;
  std::optional<std::uint64_t> hi;

  bool finite() const noexcept { return hi.has_value(); }
};

struct Moments {
  double mean;
  double variance;
};

/// A stochastic-system family together with validated parameters. Construct
/// through the named factories; they throw DomainError on invalid input.
class DistributionSpec {
public:
  using Params = std::variant<BinomialParams, NegativeBinomialParams, GeometricParams,
                              PoissonParams, HypergeometricParams>;

  static DistributionSpec binomial(std::uint64_t trials, double p);
  static DistributionSpec negative_binomial(std::uint64_t r, double p,
                                            NbConvention convention = NbConvention::Pmf);
  static DistributionSpec geometric(double p);
  static DistributionSpec poisson(double lambda);
  static DistributionSpec hypergeometric(std::uint64_t population, std::uint64_t marked,
                                         std::uint64_t draws);

  Family family() const noexcept;
  const Params& params() const noexcept { return params_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(params_);
  }

  Support support() const noexcept;

  /// Value of a continuous parameter; throws DomainError if the family has none of that name.
  double parameter(Parameter which) const;
  /// Copy with one continuous parameter replaced (validated).
  DistributionSpec with_parameter(Parameter which, double value) const;

  /// Stable human-readable form, e.g. "binomial:n=10,p=0.3".
  std::string describe() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
  explicit DistributionSpec(Params params) : params_(params) {}

  Params params_;
};

std::string to_string(Family family);

/// P(N = n). Exactly zero outside the support.
double pmf(const DistributionSpec& spec, std::uint64_t n);

/// ln P(N = n); -infinity outside the support.
double log_pmf(const DistributionSpec& spec, std::uint64_t n);

/// Characteristic function E[exp(i w N)].
std::complex<double> cf(const DistributionSpec& spec, double omega);

/// Probability generating function E[z^N] for |z| <= 1.
std::complex<double> pgf(const DistributionSpec& spec, std::complex<double> z);

Moments closed_moments(const DistributionSpec& spec);

/// Rigorous upper bound on sum_{n >= cutoff} P(n). Returns 1 when no bound is
/// available yet (cutoff still left of the mode region).
double tail_bound(const DistributionSpec& spec, std::uint64_t cutoff);

/// Hard cap on the number of explicitly enumerated terms.
inline constexpr std::uint64_t kDefaultDimensionCap = std::uint64_t{1} << 20;

/// Smallest cutoff D (support end for finite families) such that
/// tail_bound(spec, D) <= tolerance. Throws ResourceError past `cap`.
std::uint64_t truncation_point(const DistributionSpec& spec, double tolerance,
                               std::uint64_t cap = kDefaultDimensionCap);

}  // namespace stochq
