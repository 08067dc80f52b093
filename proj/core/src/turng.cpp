#include "stochq/turng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "stochq/error.hpp"
#include "stochq/modproj.hpp"
#include "stochq/numeric.hpp"

namespace stochq::turng {
namespace {

constexpr double kSamplerTail = 1e-15;

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
  for (std::uint64_t i = 0; i < stream; ++i) jump();
}

Xoshiro256pp::result_type Xoshiro256pp::operator()() noexcept {
  const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

void Xoshiro256pp::jump() noexcept {
  static constexpr std::array<std::uint64_t, 4> kJump = {
      0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
  std::array<std::uint64_t, 4> acc{};
  for (std::uint64_t word : kJump) {
    for (int b = 0; b < 64; ++b) {
      if (word & (std::uint64_t{1} << b)) {
        for (std::size_t i = 0; i < 4; ++i) acc[i] ^= s_[i];
      }
      (*this)();
    }
  }
  s_ = acc;
}

Sampler::Sampler(const DistributionSpec& spec) : spec_(spec), offset_(spec.support().lo) {
  const std::uint64_t cutoff = truncation_point(spec, kSamplerTail);
  cdf_.reserve(cutoff - offset_);
  CompensatedSum running;
  for (std::uint64_t n = offset_; n < cutoff; ++n) {
    running += pmf(spec, n);
    cdf_.push_back(running.value());
  }
}

std::uint64_t Sampler::operator()(Xoshiro256pp& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto index = it == cdf_.end() ? cdf_.size() - 1
                                      : static_cast<std::size_t>(it - cdf_.begin());
  return offset_ + index;
}

std::uint64_t sample(const DistributionSpec& spec, Xoshiro256pp& rng) {
  return Sampler(spec)(rng);
}

std::vector<std::uint32_t> generate(const DistributionSpec& spec, std::uint32_t modulus,
                                    std::size_t count, std::uint64_t seed, std::uint64_t stream) {
  if (modulus == 0) throw DomainError("generate: modulus must be at least 1");
  if (count == 0) throw DomainError("generate: count must be at least 1");
  const Sampler sampler(spec);
  Xoshiro256pp rng(seed, stream);
  std::vector<std::uint32_t> digits(count);
  for (auto& d : digits) d = static_cast<std::uint32_t>(sampler(rng) % modulus);
  return digits;
}

std::vector<std::uint64_t> residue_counts(std::span<const std::uint32_t> digits,
                                          std::uint32_t modulus) {
  std::vector<std::uint64_t> counts(modulus, 0);
  for (std::uint32_t d : digits) {
    if (d >= modulus) throw DomainError("digit outside [0, modulus)");
    ++counts[d];
  }
  return counts;
}

double chi_square_survival(double statistic, double degrees_of_freedom) {
  if (!(degrees_of_freedom > 0.0)) throw DomainError("chi-square: degrees of freedom must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

ChiSquare chi_square_uniform_counts(std::span<const std::uint64_t> counts) {
  const std::size_t modulus = counts.size();
  if (modulus < 2) throw DomainError("chi-square: modulus must be at least 2");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total < 10 * modulus) {
    throw DomainError("chi-square: need at least " + std::to_string(10 * modulus) +
                      " digits, got " + std::to_string(total));
  }
  const double expected = static_cast<double>(total) / static_cast<double>(modulus);
  CompensatedSum stat;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  const double statistic = stat.value();
  return {statistic, chi_square_survival(statistic, static_cast<double>(modulus - 1))};
}

ChiSquare chi_square_uniform(std::span<const std::uint32_t> digits, std::uint32_t modulus) {
  const auto counts = residue_counts(digits, modulus);
  return chi_square_uniform_counts(counts);
}

double empirical_entropy_bits(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  CompensatedSum h;
  for (auto c : counts) {
    if (c == 0) continue;
    const double f = static_cast<double>(c) / static_cast<double>(total);
    h += -f * std::log2(f);
  }
  return h.value();
}

TurngReport certify(const DistributionSpec& spec, std::uint32_t modulus, std::size_t count,
                    std::uint64_t seed, double alpha_level) {
  if (!(alpha_level > 0.0 && alpha_level < 0.5)) {
    throw DomainError("certify: alpha level must lie in (0, 0.5)");
  }
  if (modulus < 2) throw DomainError("certify: modulus must be at least 2");
  if (count < 10 * static_cast<std::size_t>(modulus)) {
    throw DomainError("certify: need at least 10 * modulus samples");
  }
  const ModularLaw law = project_direct(spec, modulus);
  const auto digits = generate(spec, modulus, count, seed);
  auto counts = residue_counts(digits, modulus);
  const ChiSquare chi = chi_square_uniform_counts(counts);
  const double entropy = empirical_entropy_bits(counts);
  const bool empirical_ok = chi.p_value >= alpha_level && chi.p_value <= 1.0 - alpha_level;
  const bool analytic_ok = law.max_abs_deviation <= kAnalyticDeviationLimit;
  return TurngReport{spec,
                     modulus,
                     seed,
                     count,
                     std::move(counts),
                     chi.statistic,
                     chi.p_value,
                     entropy,
                     law.max_abs_deviation,
                     alpha_level,
                     empirical_ok && analytic_ok ? Verdict::Pass : Verdict::Fail};
}

void write_digits_bytes(std::span<const std::uint32_t> digits, std::ostream& out) {
  for (std::uint32_t d : digits) {
    if (d > 0xff) throw DomainError("write_digits_bytes: digit does not fit in a byte");
    out.put(static_cast<char>(d));
  }
}

void write_digits_packed(std::span<const std::uint32_t> digits, std::uint32_t modulus,
                         std::ostream& out) {
  if (modulus < 2 || !std::has_single_bit(modulus)) {
    throw DomainError("write_digits_packed: modulus must be a power of two >= 2");
  }
  const int width = std::countr_zero(modulus);
  std::uint8_t byte = 0;
  int filled = 0;
  for (std::uint32_t d : digits) {
    if (d >= modulus) throw DomainError("write_digits_packed: digit outside [0, modulus)");
    for (int b = 0; b < width; ++b) {
      byte |= static_cast<std::uint8_t>(((d >> b) & 1u) << filled);
      if (++filled == 8) {
        out.put(static_cast<char>(byte));
        byte = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.put(static_cast<char>(byte));
}

}  // namespace stochq::turng
