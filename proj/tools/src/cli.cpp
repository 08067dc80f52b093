#include "stochq_app/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "stochq/error.hpp"
#include "stochq/version.hpp"
#include "stochq_app/commands.hpp"
#include "stochq_app/report.hpp"
#include "stochq_app/spec_parser.hpp"

namespace stochq::app {
namespace {

Family parse_scale_family(const std::string& text) {
  if (text == "poisson") return Family::Poisson;
  if (text == "binomial") return Family::Binomial;
  if (text == "nb" || text == "negative_binomial") return Family::NegativeBinomial;
  throw UsageError("unknown scale family '" + text + "' (expected poisson, binomial or nb)");
}

void emit(const Report& report, const std::string& format, int precision,
          const std::optional<std::string>& path, std::ostream& out) {
  const std::string text = render(report, parse_format(format), precision);
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file " + *path);
  file << text;
  if (!file) throw UsageError("failed writing output file " + *path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stochq: stochastic quantum-state toolkit", "stochq"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string format = "md";
  std::optional<std::string> out_path;
  int precision = 4;
  app.add_option("--format", format, "Report format: md, csv or json")->capture_default_str();
  app.add_option("--out", out_path, "Write the report to PATH instead of stdout");
  app.add_option("--precision", precision, "Decimals for table cells (round half to even)")
      ->capture_default_str()
      ->check(CLI::Range(0, 17));

  std::string nb_convention = "pmf";
  auto add_convention = [&](CLI::App* sub) {
    sub->add_option("--nb-convention", nb_convention, "Negative binomial convention: pmf or swapped")
        ->capture_default_str();
  };

  auto* tables = app.add_subcommand("tables", "Residue-class probability tables");
  std::string which;
  std::uint32_t modulus = 4;
  tables->add_option("--which", which, "poisson, binomial or nb")->required();
  tables->add_option("--modulus", modulus, "Number of residue classes")->capture_default_str();
  add_convention(tables);

  auto* measures = app.add_subcommand("measures", "Entropy, Fisher information and moments");
  std::string spec_text;
  measures->add_option("--spec", spec_text, "family:key=value,...")->required();
  add_convention(measures);

  auto* verify = app.add_subcommand("verify", "Run invariant check suites");
  std::string suite = "all";
  verify->add_option("--suite", suite, "theorem1, limits, conservation, dynamics or all")
      ->capture_default_str();

  auto* turng_cmd = app.add_subcommand("turng", "Sample, reduce mod M and certify a digit stream");
  std::size_t count = 1000000;
  std::uint64_t seed = 1;
  double alpha = 0.001;
  std::optional<std::string> stream_path;
  bool packed = false;
  turng_cmd->add_option("--spec", spec_text, "family:key=value,...")->required();
  turng_cmd->add_option("--modulus", modulus, "Number of residue classes")->capture_default_str();
  turng_cmd->add_option("--count", count, "Number of digits")->capture_default_str();
  turng_cmd->add_option("--seed", seed, "Generator seed")->capture_default_str();
  turng_cmd->add_option("--alpha", alpha, "Two-sided significance level")->capture_default_str();
  turng_cmd->add_option("--stream", stream_path, "Write the raw digit stream to PATH");
  turng_cmd->add_flag("--packed", packed, "Pack log2(M) bits per digit (power-of-two M)");
  add_convention(turng_cmd);

  auto* advise = app.add_subcommand("advise", "Smallest scale parameter reaching a deviation target");
  std::string family = "poisson";
  std::string p_text = "1/6";
  double epsilon = 5e-5;
  advise->add_option("--family", family, "poisson, binomial or nb")->capture_default_str();
  advise->add_option("--p", p_text, "Fixed p for binomial and nb")->capture_default_str();
  advise->add_option("--modulus", modulus, "Number of residue classes")->capture_default_str();
  advise->add_option("--epsilon", epsilon, "Target max-abs deviation")->capture_default_str();
  add_convention(advise);

  for (auto* sub : {tables, measures, verify, turng_cmd, advise}) sub->fallthrough();

  std::vector<std::string> argv_store{"stochq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const NbConvention convention = parse_convention(nb_convention);
    Report report;
    if (*tables) {
      report = cmd_tables(parse_table_kind(which), modulus, convention);
    } else if (*measures) {
      report = cmd_measures(parse_spec(spec_text, convention));
    } else if (*verify) {
      report = cmd_verify(parse_suite(suite));
    } else if (*turng_cmd) {
      report = cmd_turng(TurngOptions{parse_spec(spec_text, convention), modulus, count, seed, alpha,
                                      stream_path, packed});
    } else {
      report = cmd_advise(ScaleFamily{parse_scale_family(family), parse_real(p_text), convention},
                          modulus, epsilon);
    }
    emit(report, format, precision, out_path, out);
    return report.all_passed() ? kExitOk : kExitCheckFailed;
  } catch (const UsageError& e) {
    err << "stochq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "stochq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "stochq: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace stochq::app
