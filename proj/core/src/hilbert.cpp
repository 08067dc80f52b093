#include "stochq/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochq/error.hpp"
#include "stochq/numeric.hpp"

namespace stochq {
namespace {

constexpr double kNormalizationSlack = 1e-12;
constexpr double kMeasureTolerance = 1e-15;

// d ln P(n) / d theta for the families with a continuous parameter.
double score(const DistributionSpec& spec, Parameter parameter, std::uint64_t n) {
  const auto k = static_cast<double>(n);
  switch (spec.family()) {
    case Family::Binomial: {
      const auto& b = spec.as<BinomialParams>();
      const auto trials = static_cast<double>(b.trials);
      return (k - trials * b.p) / (b.p * (1.0 - b.p));
    }
    case Family::NegativeBinomial: {
      const auto& nb = spec.as<NegativeBinomialParams>();
      const auto r = static_cast<double>(nb.r);
      if (nb.convention == NbConvention::Pmf) return k / nb.p - r / (1.0 - nb.p);
      return r / nb.p - k / (1.0 - nb.p);
    }
    case Family::Geometric: {
      const double p = spec.as<GeometricParams>().p;
      return k / p - 1.0 / (1.0 - p);
    }
    case Family::Poisson:
      return k / spec.as<PoissonParams>().lambda - 1.0;
    case Family::Hypergeometric:
      break;
  }
  (void)parameter;
  throw DomainError("hypergeometric has no continuous parameter");
}

void require_interior(const DistributionSpec& spec, Parameter parameter) {
  const double theta = spec.parameter(parameter);
  if (parameter == Parameter::P && (theta <= 0.0 || theta >= 1.0)) {
    throw DomainError("fisher_information: p lies on the boundary of its domain");
  }
}

std::uint64_t cutoff_for(const DistributionSpec& spec) {
  return truncation_point(spec, kMeasureTolerance);
}

}  // namespace

StochasticState::StochasticState(std::vector<double> amplitudes, double tail_mass,
                                 double tail_bound, std::optional<DistributionSpec> source)
    : amplitudes_(std::move(amplitudes)),
      tail_mass_(tail_mass),
      tail_bound_(tail_bound),
      source_(std::move(source)) {}

StochasticState StochasticState::from_amplitudes(std::vector<double> amplitudes, double tail_mass) {
  if (!(tail_mass >= 0.0)) throw DomainError("state: tail mass must be nonnegative");
  CompensatedSum norm;
  for (double a : amplitudes) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw DomainError("state: amplitudes must be finite and nonnegative");
    }
    norm += a * a;
  }
  if (std::abs(norm.value() + tail_mass - 1.0) > kNormalizationSlack) {
    throw DomainError("state: squared amplitudes plus tail must sum to 1");
  }
  return StochasticState(std::move(amplitudes), tail_mass, tail_mass, std::nullopt);
}

StochasticState StochasticState::point_mass(std::size_t index, std::size_t dimension) {
  if (index >= dimension) throw DomainError("point_mass: index outside register");
  std::vector<double> amplitudes(dimension, 0.0);
  amplitudes[index] = 1.0;
  return StochasticState(std::move(amplitudes), 0.0, 0.0, std::nullopt);
}

double StochasticState::explicit_norm_squared() const noexcept {
  CompensatedSum norm;
  for (double a : amplitudes_) norm += a * a;
  return norm.value();
}

StochasticState build_state(const DistributionSpec& spec, double tail_tolerance,
                            std::uint64_t cap) {
  if (!(tail_tolerance > 0.0 && tail_tolerance <= 1e-6)) {
    throw DomainError("build_state: tail tolerance must lie in (0, 1e-6]");
  }
  const std::uint64_t dimension = truncation_point(spec, tail_tolerance, cap);
  std::vector<double> amplitudes(dimension);
  CompensatedSum norm;
  for (std::uint64_t n = 0; n < dimension; ++n) {
    const double p = pmf(spec, n);
    amplitudes[n] = std::sqrt(p);
    norm += p;
  }
  const bool finite = spec.support().finite();
  const double tail_mass = finite ? 0.0 : std::max(0.0, 1.0 - norm.value());
  const double bound = finite ? 0.0 : tail_bound(spec, dimension);
  return StochasticState(std::move(amplitudes), tail_mass, bound, spec);
}

Estimate shannon_entropy(const StochasticState& state, double log_base) {
  if (!(log_base > 1.0)) throw DomainError("shannon_entropy: log base must exceed 1");
  CompensatedSum h;
  for (double a : state.amplitudes()) {
    const double p = a * a;
    if (p > 0.0) h += -p * std::log(p);
  }
  const double scale = std::log(log_base);
  const auto& source = state.source();
  if (source && !source->support().finite()) {
    CompensatedSum tail;
    const double mean = closed_moments(*source).mean;
    for (std::uint64_t n = state.dimension(); n < state.dimension() + kDefaultDimensionCap; ++n) {
      const double p = pmf(*source, n);
      const double term = p > 0.0 ? -p * std::log(p) : 0.0;
      tail += term;
      if (static_cast<double>(n) > mean && term <= 1e-18 * (h.value() + 1.0)) break;
    }
    return {h.value() / scale, tail.value() / scale};
  }
  const double effective = std::max<double>(2.0, static_cast<double>(state.dimension()));
  return {h.value() / scale, state.tail_mass() * std::log(effective) / scale};
}

double fisher_information(const DistributionSpec& spec, Parameter parameter) {
  require_interior(spec, parameter);
  const std::uint64_t dimension = cutoff_for(spec);
  CompensatedSum total;
  for (std::uint64_t n = 0; n < dimension; ++n) {
    const double alpha = std::sqrt(pmf(spec, n));
    if (alpha == 0.0) continue;
    const double d_alpha = 0.5 * alpha * score(spec, parameter, n);
    total += 4.0 * d_alpha * d_alpha;
  }
  return total.value();
}

double fisher_information_numeric(const DistributionSpec& spec, Parameter parameter) {
  require_interior(spec, parameter);
  const double theta = spec.parameter(parameter);
  double h = std::max(1e-5, 1e-5 * std::abs(theta));
  if (parameter == Parameter::P) h = std::min(h, 0.25 * std::min(theta, 1.0 - theta));
  if (parameter == Parameter::Lambda) h = std::min(h, 0.25 * theta);

  const DistributionSpec plus = spec.with_parameter(parameter, theta + h);
  const DistributionSpec minus = spec.with_parameter(parameter, theta - h);
  const DistributionSpec plus_half = spec.with_parameter(parameter, theta + 0.5 * h);
  const DistributionSpec minus_half = spec.with_parameter(parameter, theta - 0.5 * h);
  const std::uint64_t dimension = std::max(cutoff_for(plus), cutoff_for(minus));

  auto amp = [](const DistributionSpec& s, std::uint64_t n) { return std::sqrt(pmf(s, n)); };
  CompensatedSum total;
  for (std::uint64_t n = 0; n < dimension; ++n) {
    const double coarse = (amp(plus, n) - amp(minus, n)) / (2.0 * h);
    const double fine = (amp(plus_half, n) - amp(minus_half, n)) / h;
    const double d_alpha = (4.0 * fine - coarse) / 3.0;
    total += 4.0 * d_alpha * d_alpha;
  }
  return total.value();
}

Estimate moment(const StochasticState& state, unsigned k) {
  if (k < 1 || k > 8) throw DomainError("moment: order must lie in [1, 8]");
  const auto power = [k](double n) { return std::pow(n, static_cast<double>(k)); };
  CompensatedSum total;
  const auto amplitudes = state.amplitudes();
  for (std::size_t n = 0; n < amplitudes.size(); ++n) {
    total += power(static_cast<double>(n)) * amplitudes[n] * amplitudes[n];
  }
  const double value = total.value();

  double half_width = 0.0;
  const auto& source = state.source();
  if (source && !source->support().finite()) {
    // Sum the omitted tail explicitly until its terms stop mattering.
    CompensatedSum tail;
    const double mean = closed_moments(*source).mean;
    for (std::uint64_t n = state.dimension(); n < state.dimension() + kDefaultDimensionCap; ++n) {
      const double term = power(static_cast<double>(n)) * pmf(*source, n);
      tail += term;
      if (static_cast<double>(n) > mean && term <= 1e-18 * (std::abs(value) + 1.0)) break;
    }
    half_width = tail.value();
  } else if (!source) {
    half_width = state.tail_mass() * power(static_cast<double>(state.dimension()));
  }
  return {value, half_width};
}

Estimate overlap(const StochasticState& a, const StochasticState& b) {
  const std::size_t common = std::min(a.dimension(), b.dimension());
  CompensatedSum inner;
  for (std::size_t n = 0; n < common; ++n) inner += a.amplitude(n) * b.amplitude(n);

  auto beyond = [common](const StochasticState& s) {
    CompensatedSum rest;
    for (std::size_t n = common; n < s.dimension(); ++n) rest += s.amplitude(n) * s.amplitude(n);
    return rest.value() + s.tail_mass();
  };
  const double value = std::clamp(inner.value(), 0.0, 1.0);
  return {value, std::sqrt(beyond(a) * beyond(b))};
}

double l2_distance(const StochasticState& a, const StochasticState& b) {
  const std::size_t extent = std::max(a.dimension(), b.dimension());
  CompensatedSum total;
  for (std::size_t n = 0; n < extent; ++n) {
    const double d = a.amplitude(n) - b.amplitude(n);
    total += d * d;
  }
  return std::sqrt(total.value());
}

bool nb_hierarchy_check(double p) {
  const StochasticState nb = build_state(DistributionSpec::negative_binomial(1, p));
  const StochasticState geo = build_state(DistributionSpec::geometric(p));
  if (nb.dimension() != geo.dimension()) return false;
  for (std::size_t n = 0; n < nb.dimension(); ++n) {
    const double x = nb.amplitude(n);
    const double y = geo.amplitude(n);
    if (x != y && std::nextafter(x, y) != y) return false;
  }
  return true;
}

}  // namespace stochq
