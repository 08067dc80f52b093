#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stochq/distributions.hpp"
#include "stochq/modproj.hpp"
#include "stochq_app/report.hpp"

namespace stochq::app {

enum class TableKind { Poisson, Binomial, NegativeBinomial };

TableKind parse_table_kind(const std::string& text);

/// Residue-class table over the fixed grids lambda in {1,2,4,8,16},
/// n in {12,24,48,96} (p = 1/6) and r in {1,2,3,4} (p = 1/6).
Report cmd_tables(TableKind which, std::uint32_t modulus, NbConvention convention);

/// Entropy, Fisher information and the first four moments of one spec.
Report cmd_measures(const DistributionSpec& spec);

enum class Suite { Theorem1, Limits, Conservation, Dynamics, All };

Suite parse_suite(const std::string& text);

/// Invariant checks at pinned parameters. all_passed() decides the exit code.
Report cmd_verify(Suite suite);

struct TurngOptions {
  DistributionSpec spec;
  std::uint32_t modulus = 4;
  std::size_t count = 1000000;
  std::uint64_t seed = 1;
  double alpha = 0.001;
  /// Raw digit stream destination; nothing is written when empty.
  std::optional<std::string> stream_path;
  bool packed = false;
};

Report cmd_turng(const TurngOptions& options);

/// Minimal scale parameter reaching the target deviation.
Report cmd_advise(const ScaleFamily& family, std::uint32_t modulus, double epsilon);

}  // namespace stochq::app
