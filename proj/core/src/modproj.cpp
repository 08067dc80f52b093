#include "stochq/modproj.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "stochq/error.hpp"
#include "stochq/numeric.hpp"

namespace stochq {
namespace {

constexpr std::uint32_t kMaxModulus = 1u << 16;
constexpr double kImaginaryResidue = 1e-10;
constexpr double kIntegralScaleCap = 1 << 16;
constexpr double kLambdaCap = 1e4;

void require_modulus(std::uint32_t modulus) {
  if (modulus < 2 || modulus > kMaxModulus) {
    throw DomainError("modulus must lie in [2, 65536], got " + std::to_string(modulus));
  }
}

// Frequency 2 pi k / M folded into (-pi, pi].
double frequency(std::uint32_t k, std::uint32_t modulus) {
  const double signed_k = 2 * static_cast<std::uint64_t>(k) <= modulus
                              ? static_cast<double>(k)
                              : static_cast<double>(k) - static_cast<double>(modulus);
  return 2.0 * std::numbers::pi * signed_k / static_cast<double>(modulus);
}

double deviation_at(const ScaleFamily& family, double scale, std::uint32_t modulus) {
  return uniform_deviation(project_direct(family.at(scale), modulus)).max_abs;
}

double bound_at(const ScaleFamily& family, double scale, std::uint32_t modulus) {
  return cf_decay_bound(family.at(scale), modulus).per_point_bound;
}

double heuristic_scale(const ScaleFamily& family, std::uint32_t modulus) {
  const double target_mean = 2.0 * modulus;
  switch (family.family) {
    case Family::Binomial:
      return std::ceil(target_mean / family.p);
    case Family::NegativeBinomial:
      return family.convention == NbConvention::Pmf
                 ? std::ceil(target_mean * (1.0 - family.p) / family.p)
                 : std::ceil(target_mean * family.p / (1.0 - family.p));
    default:
      return target_mean;
  }
}

TurngAdvice advise_integral(const ScaleFamily& family, std::uint32_t modulus, double epsilon) {
  // The Fourier bound decays monotonically in n (or r) and dominates the
  // deviation, so it brackets the search from above.
  double bracket = 1.0;
  while (bound_at(family, bracket, modulus) > epsilon) {
    if (bracket >= kIntegralScaleCap) {
      throw ResourceError("turng_advise: deviation target not reachable below scale cap",
                          deviation_at(family, kIntegralScaleCap, modulus));
    }
    bracket = std::min(kIntegralScaleCap, 2.0 * bracket);
  }
  for (double n = 1.0; n <= bracket; n += 1.0) {
    const double dev = deviation_at(family, n, modulus);
    if (dev <= epsilon) {
      const double h = std::min(heuristic_scale(family, modulus), kIntegralScaleCap);
      return {n, dev, h, deviation_at(family, h, modulus)};
    }
  }
  // Unreachable: the bracket itself satisfies the target.
  throw NumericalError("turng_advise: bracket does not satisfy its own bound");
}

TurngAdvice advise_poisson(const ScaleFamily& family, std::uint32_t modulus, double epsilon) {
  constexpr double grid = 0.1;
  double bracket = grid;
  while (bound_at(family, bracket, modulus) > epsilon) {
    if (bracket >= kLambdaCap) {
      throw ResourceError("turng_advise: deviation target not reachable below lambda cap",
                          deviation_at(family, kLambdaCap, modulus));
    }
    bracket = std::min(kLambdaCap, 2.0 * bracket);
  }
  double lo = 0.0;
  double hi = bracket;
  for (int k = 1; grid * k <= bracket + 1e-9; ++k) {
    const double lambda = grid * k;
    if (deviation_at(family, lambda, modulus) <= epsilon) {
      hi = lambda;
      lo = grid * (k - 1);
      break;
    }
  }
  lo = std::max(lo, 1e-6);
  while (hi - lo > 1e-9 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (deviation_at(family, mid, modulus) <= epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double h = heuristic_scale(family, modulus);
  return {hi, deviation_at(family, hi, modulus), h, deviation_at(family, h, modulus)};
}

}  // namespace

ModularLaw ModularLaw::from_probs(std::vector<double> probs, std::optional<double> cf_bound,
                                  double unassigned_tail) {
  if (probs.size() < 2) throw DomainError("modular law needs at least two residues");
  ModularLaw law;
  law.modulus = static_cast<std::uint32_t>(probs.size());
  law.probs = std::move(probs);
  law.beta.reserve(law.probs.size());
  for (double p : law.probs) law.beta.push_back(std::sqrt(p));
  law.unassigned_tail = unassigned_tail;
  law.cf_bound = cf_bound;
  const UniformDeviation dev = uniform_deviation(law);
  law.max_abs_deviation = dev.max_abs;
  law.tv_distance = dev.tv;
  return law;
}

ModularLaw project_direct(const DistributionSpec& spec, std::uint32_t modulus,
                          double tail_tolerance) {
  require_modulus(modulus);
  if (!(tail_tolerance > 0.0 && tail_tolerance <= 1e-10)) {
    throw DomainError("project_direct: tail tolerance must lie in (0, 1e-10]");
  }
  const std::uint64_t cutoff = truncation_point(spec, tail_tolerance);
  std::vector<CompensatedSum> classes(modulus);
  CompensatedSum total;
  for (std::uint64_t n = spec.support().lo; n < cutoff; ++n) {
    const double p = pmf(spec, n);
    classes[n % modulus] += p;
    total += p;
  }
  std::vector<double> probs(modulus);
  std::transform(classes.begin(), classes.end(), probs.begin(),
                 [](const CompensatedSum& s) { return s.value(); });
  const double tail = spec.support().finite() ? 0.0 : std::max(0.0, 1.0 - total.value());
  return ModularLaw::from_probs(std::move(probs), cf_decay_bound(spec, modulus).per_point_bound,
                                tail);
}

ModularLaw project_cf(const DistributionSpec& spec, std::uint32_t modulus) {
  require_modulus(modulus);
  std::vector<std::complex<double>> samples(modulus);
  std::vector<std::complex<double>> twiddle(modulus);
  CompensatedSum magnitude;
  for (std::uint32_t k = 0; k < modulus; ++k) {
    samples[k] = cf(spec, frequency(k, modulus));
    twiddle[k] = std::polar(1.0, -frequency(k, modulus));
    if (k > 0) magnitude += std::abs(samples[k]);
  }
  std::vector<double> probs(modulus);
  const double scale = 1.0 / static_cast<double>(modulus);
  for (std::uint32_t r = 0; r < modulus; ++r) {
    CompensatedSum re;
    CompensatedSum im;
    for (std::uint32_t k = 0; k < modulus; ++k) {
      const auto index = static_cast<std::uint32_t>((static_cast<std::uint64_t>(k) * r) % modulus);
      const std::complex<double> term = samples[k] * twiddle[index];
      re += term.real();
      im += term.imag();
    }
    const double imag = im.value() * scale;
    if (std::abs(imag) > kImaginaryResidue) {
      throw NumericalError("project_cf: residue " + std::to_string(r) +
                           " keeps imaginary part " + std::to_string(imag));
    }
    probs[r] = std::clamp(re.value() * scale, 0.0, 1.0);
  }
  return ModularLaw::from_probs(std::move(probs), magnitude.value() * scale);
}

UniformDeviation uniform_deviation(const ModularLaw& law) {
  const auto m = static_cast<double>(law.probs.size());
  const double uniform = 1.0 / m;
  double max_abs = 0.0;
  CompensatedSum abs_sum;
  CompensatedSum sq_sum;
  for (double p : law.probs) {
    const double d = p - uniform;
    max_abs = std::max(max_abs, std::abs(d));
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  return {max_abs, 0.5 * abs_sum.value(), m * sq_sum.value()};
}

CfDecayBound cf_decay_bound(const DistributionSpec& spec, std::uint32_t modulus) {
  require_modulus(modulus);
  double max_magnitude = 0.0;
  CompensatedSum total;
  for (std::uint32_t k = 1; k < modulus; ++k) {
    const double mag = std::abs(cf(spec, frequency(k, modulus)));
    max_magnitude = std::max(max_magnitude, mag);
    total += mag;
  }
  return {max_magnitude, total.value() / static_cast<double>(modulus)};
}

DistributionSpec ScaleFamily::at(double scale) const {
  switch (family) {
    case Family::Binomial:
      return DistributionSpec::binomial(static_cast<std::uint64_t>(std::llround(scale)), p);
    case Family::NegativeBinomial:
      return DistributionSpec::negative_binomial(static_cast<std::uint64_t>(std::llround(scale)),
                                                 p, convention);
    case Family::Poisson:
      return DistributionSpec::poisson(scale);
    default:
      throw DomainError("scale search supports binomial, negative binomial and poisson only");
  }
}

TurngAdvice turng_advise(const ScaleFamily& family, std::uint32_t modulus, double epsilon) {
  require_modulus(modulus);
  if (!(epsilon > 0.0 && epsilon <= 0.1)) {
    throw DomainError("turng_advise: epsilon must lie in (0, 0.1]");
  }
  switch (family.family) {
    case Family::Binomial:
    case Family::NegativeBinomial:
      (void)family.at(1.0);
      return advise_integral(family, modulus, epsilon);
    case Family::Poisson:
      return advise_poisson(family, modulus, epsilon);
    default:
      throw DomainError("turng_advise: family has no scale parameter");
  }
}

}  // namespace stochq
