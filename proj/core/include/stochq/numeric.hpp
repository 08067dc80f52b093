#pragma once

#include <cstdint>
#include <span>

namespace stochq {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (abs_ge(sum_, x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

private:
  static bool abs_ge(double a, double b) noexcept {
    return (a < 0 ? -a : a) >= (b < 0 ? -b : b);
  }

  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

/// ln(n!) in extended precision. Exact cumulative table for small n, Stirling
/// series beyond it; relative error well below 1e-15.
long double log_factorial(std::uint64_t n) noexcept;

/// ln C(a, b). Throws DomainError when b > a.
double log_choose(std::uint64_t a, std::uint64_t b);

/// Extended-precision variant used internally by the pmf kernels.
long double log_choose_ld(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace stochq
