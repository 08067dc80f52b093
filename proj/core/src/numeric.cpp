#include "stochq/numeric.hpp"

#include <array>
#include <cmath>
#include <string>

#include "stochq/error.hpp"

namespace stochq {
namespace {

constexpr std::size_t kTableSize = 1024;

const std::array<long double, kTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<long double, kTableSize> t{};
    t[0] = 0.0L;
    for (std::size_t i = 1; i < kTableSize; ++i) {
      t[i] = t[i - 1] + std::log(static_cast<long double>(i));
    }
    return t;
  }();
  return table;
}

// ln Gamma(x) for x >= kTableSize by the Stirling series; the first omitted
// term is O(x^-11), far below long double resolution here.
long double stirling_log_gamma(long double x) {
  constexpr long double half_log_two_pi = 0.918938533204672741780329736406L;
  const long double inv = 1.0L / x;
  const long double inv2 = inv * inv;
  const long double series =
      inv * (1.0L / 12.0L -
             inv2 * (1.0L / 360.0L -
                     inv2 * (1.0L / 1260.0L -
                             inv2 * (1.0L / 1680.0L - inv2 * (1.0L / 1188.0L)))));
  return (x - 0.5L) * std::log(x) - x + half_log_two_pi + series;
}

}  // namespace

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc += v;
  return acc.value();
}

long double log_factorial(std::uint64_t n) noexcept {
  if (n < kTableSize) return log_factorial_table()[n];
  return stirling_log_gamma(static_cast<long double>(n) + 1.0L);
}

long double log_choose_ld(std::uint64_t a, std::uint64_t b) noexcept {
  if (b == 0 || b == a) return 0.0L;
  return log_factorial(a) - log_factorial(b) - log_factorial(a - b);
}

double log_choose(std::uint64_t a, std::uint64_t b) {
  if (b > a) {
    throw DomainError("log_choose: b=" + std::to_string(b) + " exceeds a=" + std::to_string(a));
  }
  return static_cast<double>(log_choose_ld(a, b));
}

}  // namespace stochq
