#include "stochq/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "stochq/error.hpp"
#include "stochq/numeric.hpp"

namespace stochq {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_open_unit(double p) { return std::isfinite(p) && p > 0.0 && p < 1.0; }

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

// Probability weighting each counted event, and its complement.
struct NbWeights {
  double event;
  double stop;
};

NbWeights nb_weights(const NegativeBinomialParams& nb) {
  if (nb.convention == NbConvention::Pmf) return {nb.p, 1.0 - nb.p};
  return {1.0 - nb.p, nb.p};
}

// Shared kernel for negative binomial and geometric laws; geometric is r = 1.
long double nb_log_pmf(std::uint64_t r, double p, NbConvention convention, std::uint64_t n) {
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(-static_cast<long double>(p));
  const long double log_event = convention == NbConvention::Pmf ? lp : lq;
  const long double log_stop = convention == NbConvention::Pmf ? lq : lp;
  return log_choose_ld(n + r - 1, n) + static_cast<long double>(r) * log_stop +
         static_cast<long double>(n) * log_event;
}

long double binomial_log_pmf(const BinomialParams& b, std::uint64_t n) {
  const auto k = static_cast<long double>(n);
  const auto rest = static_cast<long double>(b.trials - n);
  const auto p = static_cast<long double>(b.p);
  return log_choose_ld(b.trials, n) + k * std::log(p) + rest * std::log1p(-p);
}

long double poisson_log_pmf(double lambda, std::uint64_t n) {
  const auto l = static_cast<long double>(lambda);
  return -l + static_cast<long double>(n) * std::log(l) - log_factorial(n);
}

long double hypergeometric_log_pmf(const HypergeometricParams& h, std::uint64_t n) {
  return log_choose_ld(h.marked, n) + log_choose_ld(h.population - h.marked, h.draws - n) -
         log_choose_ld(h.population, h.draws);
}

bool in_support(const Support& s, std::uint64_t n) {
  return n >= s.lo && (!s.hi || n <= *s.hi);
}

std::complex<double> integer_power(std::complex<double> w, std::uint64_t exponent) {
  if (exponent == 0) return {1.0, 0.0};
  const double magnitude = std::abs(w);
  if (magnitude == 0.0) return {0.0, 0.0};
  const auto e = static_cast<double>(exponent);
  return std::polar(std::pow(magnitude, e), e * std::arg(w));
}

template <class Weight>
std::complex<double> finite_sum(const DistributionSpec& spec, Weight weight) {
  const Support s = spec.support();
  CompensatedSum re;
  CompensatedSum im;
  for (std::uint64_t n = s.lo; n <= *s.hi; ++n) {
    const std::complex<double> term = pmf(spec, n) * weight(n);
    re += term.real();
    im += term.imag();
  }
  return {re.value(), im.value()};
}

// Geometric majorant: if P(n+1)/P(n) <= ratio < 1 for all n >= cutoff, the
// tail is at most P(cutoff) / (1 - ratio).
double geometric_majorant(double head, double ratio) {
  if (ratio >= 1.0) return 1.0;
  return std::min(1.0, head / (1.0 - ratio));
}

}  // namespace

DistributionSpec DistributionSpec::binomial(std::uint64_t trials, double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw DomainError("binomial: p must lie in [0, 1], got " + format_number(p));
  }
  return DistributionSpec(BinomialParams{trials, p});
}

DistributionSpec DistributionSpec::negative_binomial(std::uint64_t r, double p,
                                                     NbConvention convention) {
  if (r == 0) throw DomainError("negative binomial: r must be positive");
  if (!is_open_unit(p)) {
    throw DomainError("negative binomial: p must lie in (0, 1), got " + format_number(p));
  }
  return DistributionSpec(NegativeBinomialParams{r, p, convention});
}

DistributionSpec DistributionSpec::geometric(double p) {
  if (!is_open_unit(p)) {
    throw DomainError("geometric: p must lie in (0, 1), got " + format_number(p));
  }
  return DistributionSpec(GeometricParams{p});
}

DistributionSpec DistributionSpec::poisson(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("poisson: lambda must be positive and finite, got " + format_number(lambda));
  }
  return DistributionSpec(PoissonParams{lambda});
}

DistributionSpec DistributionSpec::hypergeometric(std::uint64_t population, std::uint64_t marked,
                                                  std::uint64_t draws) {
  if (marked > population) throw DomainError("hypergeometric: marked count exceeds population");
  if (draws > population) throw DomainError("hypergeometric: draws exceed population");
  return DistributionSpec(HypergeometricParams{population, marked, draws});
}

Family DistributionSpec::family() const noexcept {
  return std::visit(Overloaded{
                        [](const BinomialParams&) { return Family::Binomial; },
                        [](const NegativeBinomialParams&) { return Family::NegativeBinomial; },
                        [](const GeometricParams&) { return Family::Geometric; },
                        [](const PoissonParams&) { return Family::Poisson; },
                        [](const HypergeometricParams&) { return Family::Hypergeometric; },
                    },
                    params_);
}

Support DistributionSpec::support() const noexcept {
  return std::visit(Overloaded{
                        [](const BinomialParams& b) {
                          if (b.p == 0.0) return Support{0, 0};
                          if (b.p == 1.0) return Support{b.trials, b.trials};
                          return Support{0, b.trials};
                        },
                        [](const HypergeometricParams& h) {
                          const std::uint64_t unmarked = h.population - h.marked;
                          const std::uint64_t lo = h.draws > unmarked ? h.draws - unmarked : 0;
                          return Support{lo, std::min(h.marked, h.draws)};
                        },
                        [](const auto&) { return Support{0, std::nullopt}; },
                    },
                    params_);
}

double DistributionSpec::parameter(Parameter which) const {
  const Family f = family();
  if (which == Parameter::Lambda && f == Family::Poisson) return as<PoissonParams>().lambda;
  if (which == Parameter::P) {
    if (f == Family::Binomial) return as<BinomialParams>().p;
    if (f == Family::NegativeBinomial) return as<NegativeBinomialParams>().p;
    if (f == Family::Geometric) return as<GeometricParams>().p;
  }
  throw DomainError(to_string(f) + " has no continuous parameter of that name");
}

DistributionSpec DistributionSpec::with_parameter(Parameter which, double value) const {
  (void)parameter(which);
  switch (family()) {
    case Family::Binomial:
      return binomial(as<BinomialParams>().trials, value);
    case Family::NegativeBinomial: {
      const auto& nb = as<NegativeBinomialParams>();
      return negative_binomial(nb.r, value, nb.convention);
    }
    case Family::Geometric:
      return geometric(value);
    case Family::Poisson:
      return poisson(value);
    case Family::Hypergeometric:
      break;
  }
  throw DomainError("hypergeometric has no continuous parameter");
}

std::string DistributionSpec::describe() const {
  return std::visit(
      Overloaded{
          [](const BinomialParams& b) {
            return "binomial:n=" + std::to_string(b.trials) + ",p=" + format_number(b.p);
          },
          [](const NegativeBinomialParams& nb) {
            std::string s = "nb:r=" + std::to_string(nb.r) + ",p=" + format_number(nb.p);
            if (nb.convention == NbConvention::Swapped) s += ",convention=swapped";
            return s;
          },
          [](const GeometricParams& g) { return "geometric:p=" + format_number(g.p); },
          [](const PoissonParams& p) { return "poisson:lambda=" + format_number(p.lambda); },
          [](const HypergeometricParams& h) {
            return "hypergeometric:N=" + std::to_string(h.population) +
                   ",K=" + std::to_string(h.marked) + ",n=" + std::to_string(h.draws);
          },
      },
      params_);
}

std::string to_string(Family family) {
  switch (family) {
    case Family::Binomial: return "binomial";
    case Family::NegativeBinomial: return "negative_binomial";
    case Family::Geometric: return "geometric";
    case Family::Poisson: return "poisson";
    case Family::Hypergeometric: return "hypergeometric";
  }
  return "unknown";
}

double log_pmf(const DistributionSpec& spec, std::uint64_t n) {
  if (!in_support(spec.support(), n)) return kNegInf;
  const long double value = std::visit(
      Overloaded{
          [n](const BinomialParams& b) -> long double {
            // Degenerate laws are point masses on their single support point.
            if (b.p == 0.0 || b.p == 1.0) return 0.0L;
            return binomial_log_pmf(b, n);
          },
          [n](const NegativeBinomialParams& nb) { return nb_log_pmf(nb.r, nb.p, nb.convention, n); },
          [n](const GeometricParams& g) { return nb_log_pmf(1, g.p, NbConvention::Pmf, n); },
          [n](const PoissonParams& p) { return poisson_log_pmf(p.lambda, n); },
          [n](const HypergeometricParams& h) { return hypergeometric_log_pmf(h, n); },
      },
      spec.params());
  return static_cast<double>(value);
}

double pmf(const DistributionSpec& spec, std::uint64_t n) {
  if (!in_support(spec.support(), n)) return 0.0;
  const double lp = log_pmf(spec, n);
  return std::min(1.0, std::exp(lp));
}

std::complex<double> cf(const DistributionSpec& spec, double omega) {
  const std::complex<double> unit = std::polar(1.0, omega);
  return std::visit(
      Overloaded{
          [&](const BinomialParams& b) {
            return integer_power((1.0 - b.p) + b.p * unit, b.trials);
          },
          [&](const NegativeBinomialParams& nb) {
            const NbWeights w = nb_weights(nb);
            return integer_power(w.stop / (1.0 - w.event * unit), nb.r);
          },
          [&](const GeometricParams& g) { return (1.0 - g.p) / (1.0 - g.p * unit); },
          [&](const PoissonParams& p) {
            return std::polar(std::exp(p.lambda * (std::cos(omega) - 1.0)),
                              p.lambda * std::sin(omega));
          },
          [&](const HypergeometricParams&) {
            return finite_sum(spec, [omega](std::uint64_t n) {
              return std::polar(1.0, omega * static_cast<double>(n));
            });
          },
      },
      spec.params());
}

std::complex<double> pgf(const DistributionSpec& spec, std::complex<double> z) {
  if (!(std::abs(z) <= 1.0 + 1e-12)) {
    throw DomainError("pgf: |z| must not exceed 1");
  }
  return std::visit(
      Overloaded{
          [&](const BinomialParams& b) { return integer_power((1.0 - b.p) + b.p * z, b.trials); },
          [&](const NegativeBinomialParams& nb) {
            const NbWeights w = nb_weights(nb);
            const std::complex<double> base = w.stop / (1.0 - w.event * z);
            std::complex<double> out{1.0, 0.0};
            for (std::uint64_t i = 0; i < nb.r; ++i) out *= base;
            return out;
          },
          [&](const GeometricParams& g) { return (1.0 - g.p) / (1.0 - g.p * z); },
          [&](const PoissonParams& p) { return std::exp(p.lambda * (z - 1.0)); },
          [&](const HypergeometricParams&) {
            return finite_sum(spec, [z](std::uint64_t n) {
              std::complex<double> out{1.0, 0.0};
              for (std::uint64_t i = 0; i < n; ++i) out *= z;
              return out;
            });
          },
      },
      spec.params());
}

Moments closed_moments(const DistributionSpec& spec) {
  return std::visit(
      Overloaded{
          [](const BinomialParams& b) {
            const auto n = static_cast<double>(b.trials);
            return Moments{n * b.p, n * b.p * (1.0 - b.p)};
          },
          [](const NegativeBinomialParams& nb) {
            const NbWeights w = nb_weights(nb);
            const auto r = static_cast<double>(nb.r);
            return Moments{r * w.event / w.stop, r * w.event / (w.stop * w.stop)};
          },
          [](const GeometricParams& g) {
            const double q = 1.0 - g.p;
            return Moments{g.p / q, g.p / (q * q)};
          },
          [](const PoissonParams& p) { return Moments{p.lambda, p.lambda}; },
          [](const HypergeometricParams& h) {
            const auto N = static_cast<double>(h.population);
            const auto K = static_cast<double>(h.marked);
            const auto n = static_cast<double>(h.draws);
            if (h.population == 0) return Moments{0.0, 0.0};
            const double frac = K / N;
            const double var = h.population > 1 ? n * frac * (1.0 - frac) * (N - n) / (N - 1.0) : 0.0;
            return Moments{n * frac, var};
          },
      },
      spec.params());
}

double tail_bound(const DistributionSpec& spec, std::uint64_t cutoff) {
  const Support s = spec.support();
  if (s.finite()) {
    if (cutoff > *s.hi) return 0.0;
    CompensatedSum rest;
    for (std::uint64_t n = std::max(cutoff, s.lo); n <= *s.hi; ++n) rest += pmf(spec, n);
    return std::min(1.0, rest.value());
  }
  const double head = pmf(spec, cutoff);
  const auto d = static_cast<double>(cutoff);
  return std::visit(
      Overloaded{
          [&](const PoissonParams& p) {
            const double ratio_bound = geometric_majorant(head, p.lambda / (d + 1.0));
            if (d <= p.lambda) return ratio_bound;
            // Chernoff: P(N >= d) <= exp(-lambda) (e lambda / d)^d.
            const double chernoff =
                std::exp(-p.lambda + d - d * std::log(d / p.lambda));
            return std::min(ratio_bound, chernoff);
          },
          [&](const NegativeBinomialParams& nb) {
            const NbWeights w = nb_weights(nb);
            if (nb.r == 1) return std::pow(w.event, d);
            // P(n+1)/P(n) = event (n + r)/(n + 1) decreases in n.
            const double ratio = w.event * (d + static_cast<double>(nb.r)) / (d + 1.0);
            return geometric_majorant(head, ratio);
          },
          [&](const GeometricParams& g) { return std::pow(g.p, d); },
          [](const auto&) { return 1.0; },
      },
      spec.params());
}

std::uint64_t truncation_point(const DistributionSpec& spec, double tolerance, std::uint64_t cap) {
  if (!(tolerance > 0.0)) throw DomainError("truncation_point: tolerance must be positive");
  const Support s = spec.support();
  if (s.finite()) return *s.hi + 1;

  // Past the mode the bound is non-increasing; gallop, then bisect.
  const Moments m = closed_moments(spec);
  std::uint64_t lo = static_cast<std::uint64_t>(std::floor(m.mean));
  if (tail_bound(spec, lo) <= tolerance) {
    while (lo > 0 && tail_bound(spec, lo - 1) <= tolerance) --lo;
    return lo;
  }
  std::uint64_t step = 1;
  std::uint64_t hi = lo + step;
  while (tail_bound(spec, hi) > tolerance) {
    if (hi >= cap) {
      throw ResourceError("truncation: tail tolerance not reached within dimension cap " +
                              std::to_string(cap),
                          tail_bound(spec, cap));
    }
    lo = hi;
    step *= 2;
    hi = std::min(cap, hi + step);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tail_bound(spec, mid) <= tolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace stochq
