#include "stochq_app/spec_parser.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "stochq/error.hpp"
#include "stochq_app/report.hpp"

namespace stochq::app {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
    throw UsageError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

using Fields = std::map<std::string, std::string, std::less<>>;

const std::string& field(const Fields& f, const char* key, std::string_view family) {
  const auto it = f.find(key);
  if (it == f.end()) {
    throw UsageError(std::string(family) + " spec needs '" + key + "'");
  }
  return it->second;
}

void reject_unknown(const Fields& f, std::set<std::string> allowed, std::string_view family) {
  for (const auto& [k, v] : f) {
    if (!allowed.count(k)) throw UsageError("unknown key '" + k + "' for " + std::string(family));
  }
}

}  // namespace

double parse_real(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw UsageError("empty number");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const double num = parse_decimal(trim(text.substr(0, slash)));
  const double den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0.0) throw UsageError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

std::uint64_t parse_count(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw UsageError("not a nonnegative integer: '" + std::string(text) + "'");
  }
  return value;
}

NbConvention parse_convention(std::string_view text) {
  if (text == "pmf") return NbConvention::Pmf;
  if (text == "swapped") return NbConvention::Swapped;
  throw UsageError("unknown negative binomial convention '" + std::string(text) +
                   "' (expected pmf or swapped)");
}

DistributionSpec parse_spec(std::string_view text, NbConvention default_convention) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string family(trim(text.substr(0, colon)));
  Fields fields;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw UsageError("expected key=value, got '" + std::string(item) + "'");
      std::string key(trim(item.substr(0, eq)));
      if (fields.count(key)) throw UsageError("duplicate key '" + key + "'");
      fields.emplace(std::move(key), std::string(trim(item.substr(eq + 1))));
    }
  }

  try {
    if (family == "binomial") {
      reject_unknown(fields, {"n", "p"}, family);
      return DistributionSpec::binomial(parse_count(field(fields, "n", family)),
                                        parse_real(field(fields, "p", family)));
    }
    if (family == "nb" || family == "negative_binomial") {
      reject_unknown(fields, {"r", "p", "convention"}, family);
      const auto conv = fields.count("convention") ? parse_convention(fields.at("convention"))
                                                    : default_convention;
      return DistributionSpec::negative_binomial(parse_count(field(fields, "r", family)),
                                                 parse_real(field(fields, "p", family)), conv);
    }
    if (family == "geometric") {
      reject_unknown(fields, {"p"}, family);
      return DistributionSpec::geometric(parse_real(field(fields, "p", family)));
    }
    if (family == "poisson") {
      reject_unknown(fields, {"lambda"}, family);
      return DistributionSpec::poisson(parse_real(field(fields, "lambda", family)));
    }
    if (family == "hypergeometric") {
      reject_unknown(fields, {"N", "K", "n"}, family);
      return DistributionSpec::hypergeometric(parse_count(field(fields, "N", family)),
                                              parse_count(field(fields, "K", family)),
                                              parse_count(field(fields, "n", family)));
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown family '" + family +
                   "' (expected binomial, nb, geometric, poisson or hypergeometric)");
}

}  // namespace stochq::app
