#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "stochq/distributions.hpp"

namespace stochq::turng {

/// xoshiro256++ with splitmix64 seeding. Independent streams for the same
/// seed are separated by `stream` applications of the 2^128-step jump.
class Xoshiro256pp {
public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  void jump() noexcept;

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

private:
  std::array<std::uint64_t, 4> s_;
};

/// Inversion sampler over a cached CDF. Mass beyond 1 - 1e-15 is folded onto
/// the last cached outcome.
class Sampler {
public:
  explicit Sampler(const DistributionSpec& spec);

  std::uint64_t operator()(Xoshiro256pp& rng) const;
  const DistributionSpec& spec() const noexcept { return spec_; }
  std::size_t table_size() const noexcept { return cdf_.size(); }

private:
  DistributionSpec spec_;
  std::uint64_t offset_ = 0;
  std::vector<double> cdf_;
};

/// One variate. Builds a sampler each call; prefer Sampler for bulk draws.
std::uint64_t sample(const DistributionSpec& spec, Xoshiro256pp& rng);

/// `count` digits, each a variate reduced mod `modulus` (modulus >= 1).
std::vector<std::uint32_t> generate(const DistributionSpec& spec, std::uint32_t modulus,
                                    std::size_t count, std::uint64_t seed,
                                    std::uint64_t stream = 0);

std::vector<std::uint64_t> residue_counts(std::span<const std::uint32_t> digits,
                                          std::uint32_t modulus);

struct ChiSquare {
  double statistic;
  /// Upper-tail probability with modulus - 1 degrees of freedom.
  double p_value;
};

/// Pearson test against the uniform law. Requires at least 10 * modulus digits.
ChiSquare chi_square_uniform(std::span<const std::uint32_t> digits, std::uint32_t modulus);
ChiSquare chi_square_uniform_counts(std::span<const std::uint64_t> counts);

/// Q(df/2, x/2), the chi-square survival function.
double chi_square_survival(double statistic, double degrees_of_freedom);

/// -sum f log2 f of the empirical residue frequencies.
double empirical_entropy_bits(std::span<const std::uint64_t> counts);

enum class Verdict { Pass, Fail };

struct TurngReport {
  DistributionSpec spec;
  std::uint32_t modulus;
  std::uint64_t seed;
  std::size_t sample_count;
  std::vector<std::uint64_t> observed_counts;
  double chi_square;
  double p_value;
  double empirical_entropy_bits;
  double analytic_max_deviation;
  double alpha_level;
  Verdict verdict;
};

/// Maximum analytic deviation accepted by certify.
inline constexpr double kAnalyticDeviationLimit = 1e-3;

/// Passes iff alpha <= p_value <= 1 - alpha and the analytic projection
/// deviates from uniform by at most 1e-3. alpha_level must lie in (0, 0.5).
TurngReport certify(const DistributionSpec& spec, std::uint32_t modulus, std::size_t count,
                    std::uint64_t seed, double alpha_level);

/// One digit per byte.
void write_digits_bytes(std::span<const std::uint32_t> digits, std::ostream& out);

/// log2(modulus) bits per digit, little-endian: digit bits are emitted least
/// significant first and fill each byte from bit 0 upward; the final byte is
/// zero-padded. modulus must be a power of two >= 2.
void write_digits_packed(std::span<const std::uint32_t> digits, std::uint32_t modulus,
                         std::ostream& out);

}  // namespace stochq::turng
