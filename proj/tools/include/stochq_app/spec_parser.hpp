#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "stochq/distributions.hpp"

namespace stochq::app {

/// Parses `family:key=value,...`. Families and keys:
///   binomial n, p          poisson lambda
///   nb r, p [, convention] geometric p
///   hypergeometric N, K, n
/// Reals accept decimal or `a/b` fractions. `default_convention` applies to nb
/// specs that do not name a convention. Throws UsageError.
DistributionSpec parse_spec(std::string_view text,
                            NbConvention default_convention = NbConvention::Pmf);

NbConvention parse_convention(std::string_view text);

/// Strict real number: decimal/scientific or a/b.
double parse_real(std::string_view text);
std::uint64_t parse_count(std::string_view text);

}  // namespace stochq::app
