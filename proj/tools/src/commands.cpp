#include "stochq_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "stochq/error.hpp"
#include "stochq/fock.hpp"
#include "stochq/hilbert.hpp"
#include "stochq/turng.hpp"
#include "stochq/version.hpp"

namespace stochq::app {
namespace {

constexpr double kSixth = 1.0 / 6.0;

Report start(std::string command) {
  Report r;
  r.command = std::move(command);
  r.version = kVersion;
  return r;
}

std::string convention_name(NbConvention c) { return c == NbConvention::Pmf ? "pmf" : "swapped"; }

std::string table_kind_name(TableKind k) {
  switch (k) {
    case TableKind::Poisson: return "poisson";
    case TableKind::Binomial: return "binomial";
    case TableKind::NegativeBinomial: return "nb";
  }
  return {};
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::Theorem1: return "theorem1";
    case Suite::Limits: return "limits";
    case Suite::Conservation: return "conservation";
    case Suite::Dynamics: return "dynamics";
    case Suite::All: return "all";
  }
  return {};
}

fock::Matrix random_hermitian(std::size_t d, turng::Xoshiro256pp& rng) {
  fock::Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = fock::Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    }
  }
  return (m + m.adjoint()) / 2.0;
}

fock::Vector random_unit(std::size_t d, turng::Xoshiro256pp& rng) {
  fock::Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = fock::Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  }
  return v / v.norm();
}

double coherent_eigen_residual(std::size_t d) {
  const fock::FockConfig cfg{d};
  const fock::Complex alpha(2.0, 0.0);
  const fock::Vector psi = fock::coherent_state(cfg, alpha).value.vector();
  return (fock::poisson_hamiltonian(cfg, alpha).matrix() * psi - 0.5 * psi).norm();
}

double synthesis_error(const DistributionSpec& spec, std::size_t d) {
  const fock::FockConfig cfg{d};
  const auto target = build_state(spec, 1e-14);
  const auto eig = fock::hermitian_eigen(fock::qho_hamiltonian(cfg) + fock::synthesize_perturbation(target, cfg));
  fock::Vector ground = eig.vectors.col(0);
  ground /= ground(0) / std::abs(ground(0));
  double worst = 0.0;
  for (std::size_t n = 0; n < d; ++n) {
    worst = std::max(worst, std::abs(ground(static_cast<Eigen::Index>(n)) - target.amplitude(n)));
  }
  return worst;
}

void theorem1_checks(Report& r) {
  r.checks.push_back(make_check("theorem1.residual_D128", coherent_eigen_residual(128), "<=", 1e-8));

  const fock::FockConfig cfg{128};
  const fock::Vector psi = fock::coherent_state(cfg, 2.0).value.vector();
  const double rayleigh = psi.dot(fock::poisson_hamiltonian(cfg, 2.0).matrix() * psi).real();
  r.checks.push_back(make_check("theorem1.rayleigh_minus_half_D128", std::abs(rayleigh - 0.5), "<=", 1e-8));

  double worst_step = -INFINITY;
  double previous = coherent_eigen_residual(32);
  for (std::size_t d : {64u, 128u, 256u}) {
    const double next = coherent_eigen_residual(d);
    worst_step = std::max(worst_step, next - previous);
    previous = next;
  }
  r.checks.push_back(make_check("theorem1.residual_increase_over_D_32_to_256", worst_step, "<=", 0.0));
  r.checks.push_back(make_check("theorem1.synthesis_binomial_10_0.3",
                                synthesis_error(DistributionSpec::binomial(10, 0.3), 64), "<=", 1e-9));
  r.checks.push_back(make_check("theorem1.synthesis_nb_3_0.4",
                                synthesis_error(DistributionSpec::negative_binomial(3, 0.4), 64), "<=", 1e-9));
}

void limits_checks(Report& r) {
  const auto target = build_state(DistributionSpec::poisson(4.0), 1e-15);
  Table table{"poisson limit l2 gaps (lambda = 4)", {"n", "l2_distance"}, 1, {}};
  double worst_ratio = 0.0;
  double previous = INFINITY;
  double last = 0.0;
  for (std::int64_t n : {10, 100, 1000, 10000}) {
    const auto b = build_state(DistributionSpec::binomial(static_cast<std::uint64_t>(n), 4.0 / static_cast<double>(n)));
    last = l2_distance(b, target);
    table.rows.push_back({n, last});
    if (std::isfinite(previous)) worst_ratio = std::max(worst_ratio, last / previous);
    previous = last;
  }
  r.tables.push_back(std::move(table));
  r.checks.push_back(make_check("limits.l2_worst_successive_ratio", worst_ratio, "<", 1.0));
  r.checks.push_back(make_check("limits.l2_at_n_10000", last, "<", 1e-3));

  double failures = 0.0;
  for (double p : {0.1, kSixth, 0.5, 0.9, 0.999}) failures += nb_hierarchy_check(p) ? 0.0 : 1.0;
  r.checks.push_back(make_check("limits.nb_geometric_hierarchy_failures", failures, "==", 0.0));
}

std::vector<DistributionSpec> conservation_grid() {
  std::vector<DistributionSpec> grid;
  for (double lambda : {0.5, 1.0, 4.0, 8.0, 20.0}) grid.push_back(DistributionSpec::poisson(lambda));
  for (std::uint64_t n : {5u, 12u, 96u}) grid.push_back(DistributionSpec::binomial(n, kSixth));
  for (double p : {0.2, 0.7}) grid.push_back(DistributionSpec::geometric(p));
  grid.push_back(DistributionSpec::negative_binomial(3, kSixth));
  grid.push_back(DistributionSpec::negative_binomial(4, kSixth, NbConvention::Swapped));
  grid.push_back(DistributionSpec::hypergeometric(40, 15, 12));
  return grid;
}

void conservation_checks(Report& r) {
  double worst_sum = 0.0;
  double worst_route = 0.0;
  double worst_dominance = -INFINITY;
  double cases = 0.0;
  for (const auto& spec : conservation_grid()) {
    for (std::uint32_t m : {2u, 3u, 4u, 5u, 8u}) {
      const auto direct = project_direct(spec, m);
      const auto fourier = project_cf(spec, m);
      double total = 0.0;
      for (std::uint32_t k = 0; k < m; ++k) {
        total += direct.probs[k];
        worst_route = std::max(worst_route, std::abs(direct.probs[k] - fourier.probs[k]));
      }
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
      worst_dominance = std::max(worst_dominance, direct.max_abs_deviation - *direct.cf_bound);
      cases += 1.0;
    }
  }
  r.checks.push_back(make_check("conservation.grid_cases", cases, ">=", 50.0));
  r.checks.push_back(make_check("conservation.max_abs_sum_minus_one", worst_sum, "<=", 1e-12));
  r.checks.push_back(make_check("conservation.max_direct_vs_fourier", worst_route, "<=", 1e-10));
  r.checks.push_back(make_check("conservation.max_deviation_minus_cf_bound", worst_dominance, "<=", 1e-10));
}

void dynamics_checks(Report& r) {
  turng::Xoshiro256pp rng(20251016);
  double norm_drift = 0.0;
  double composition = 0.0;
  double eigen_residual = 0.0;
  double symmetry = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial) % 31;
    const fock::HermitianOperator h(random_hermitian(d, rng));
    const fock::QuantumStateVector psi(random_unit(d, rng));
    const fock::SpectralPropagator prop(h);
    for (double t : {0.1, 1.0, 10.0}) norm_drift = std::max(norm_drift, std::abs(prop.evolve(psi, t).vector().norm() - 1.0));
    composition = std::max(
        composition, (prop.evolve(prop.evolve(psi, 0.4), 0.9).vector() - prop.evolve(psi, 1.3).vector()).norm());
    const auto& spec = prop.spectrum();
    for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
      const fock::Vector v = spec.vectors.col(k);
      eigen_residual = std::max(eigen_residual, (h.matrix() * v - spec.values(k) * v).norm() / h.matrix().norm());
    }
    const std::size_t da = 2 + static_cast<std::size_t>(trial) % 5;
    const std::size_t db = 3 + static_cast<std::size_t>(trial) % 4;
    const fock::Vector c = random_unit(da * db, rng);
    const auto state = fock::joint_state(
        Eigen::Map<const fock::Matrix>(c.data(), static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db)));
    symmetry = std::max(symmetry, std::abs(fock::entanglement_entropy(state, fock::Subsystem::A) -
                                           fock::entanglement_entropy(state, fock::Subsystem::B)));
  }
  r.checks.push_back(make_check("dynamics.unitarity_norm_drift", norm_drift, "<=", 1e-9));
  r.checks.push_back(make_check("dynamics.composition_error", composition, "<=", 1e-9));
  r.checks.push_back(make_check("dynamics.relative_eigen_residual", eigen_residual, "<=", 1e-9));

  fock::Matrix x = fock::Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const fock::SpectralPropagator rabi{fock::HermitianOperator(x)};
  double rabi_error = 0.0;
  for (double t : {0.3, M_PI / 2.0, 2.0}) {
    const auto psi = rabi.evolve(fock::QuantumStateVector::basis(0, 2), t).vector();
    rabi_error = std::max({rabi_error, std::abs(std::abs(psi(0)) - std::abs(std::cos(t))),
                           std::abs(std::abs(psi(1)) - std::abs(std::sin(t)))});
  }
  r.checks.push_back(make_check("dynamics.rabi_error", rabi_error, "<=", 1e-9));

  const auto product = fock::CompositeState::product(fock::QuantumStateVector(random_unit(3, rng)),
                                                     fock::QuantumStateVector(random_unit(4, rng)));
  r.checks.push_back(make_check("dynamics.product_entropy", std::abs(fock::entanglement_entropy(product)), "<=", 1e-12));
  fock::Matrix bell = fock::Matrix::Zero(2, 2);
  bell(0, 0) = bell(1, 1) = 1.0 / std::sqrt(2.0);
  r.checks.push_back(make_check("dynamics.bell_entropy_minus_ln2",
                                std::abs(fock::entanglement_entropy(fock::joint_state(bell)) - std::log(2.0)), "<=", 1e-10));
  r.checks.push_back(make_check("dynamics.entropy_asymmetry", symmetry, "<=", 1e-10));

  const fock::HermitianOperator h0(fock::Matrix::Zero(2, 2));
  const fock::Matrix v = fock::annihilation({2});
  auto rho = fock::DensityOperator::pure(fock::QuantumStateVector::basis(1, 2));
  double trace_drift = 0.0;
  for (int step = 0; step < 1000; ++step) {
    rho = fock::lindblad_step(h0, v, rho, 1e-3, 1);
    trace_drift = std::max(trace_drift, std::abs(rho.trace() - 1.0));
  }
  r.checks.push_back(make_check("dynamics.damping_population_error", std::abs(rho.population(1) - std::exp(-1.0)), "<=", 1e-4));
  r.checks.push_back(make_check("dynamics.lindblad_trace_drift", trace_drift, "<=", 1e-8));
}

}  // namespace

TableKind parse_table_kind(const std::string& text) {
  if (text == "poisson") return TableKind::Poisson;
  if (text == "binomial") return TableKind::Binomial;
  if (text == "nb" || text == "negative_binomial") return TableKind::NegativeBinomial;
  throw UsageError("unknown table '" + text + "' (expected poisson, binomial or nb)");
}

Suite parse_suite(const std::string& text) {
  if (text == "theorem1") return Suite::Theorem1;
  if (text == "limits") return Suite::Limits;
  if (text == "conservation") return Suite::Conservation;
  if (text == "dynamics") return Suite::Dynamics;
  if (text == "all") return Suite::All;
  throw UsageError("unknown suite '" + text + "' (expected theorem1, limits, conservation, dynamics or all)");
}

Report cmd_tables(TableKind which, std::uint32_t modulus, NbConvention convention) {
  Report r = start("tables");
  r.inputs.emplace_back("which", table_kind_name(which));
  r.inputs.emplace_back("modulus", static_cast<std::int64_t>(modulus));

  Table table;
  std::vector<std::pair<Value, DistributionSpec>> grid;
  switch (which) {
    case TableKind::Poisson:
      table.name = "poisson mod " + std::to_string(modulus);
      table.columns.push_back("lambda");
      for (double lambda : {1.0, 2.0, 4.0, 8.0, 16.0}) grid.emplace_back(lambda, DistributionSpec::poisson(lambda));
      break;
    case TableKind::Binomial:
      table.name = "binomial p=1/6 mod " + std::to_string(modulus);
      table.columns.push_back("n");
      for (std::int64_t n : {12, 24, 48, 96}) {
        grid.emplace_back(n, DistributionSpec::binomial(static_cast<std::uint64_t>(n), kSixth));
      }
      break;
    case TableKind::NegativeBinomial:
      r.inputs.emplace_back("nb_convention", convention_name(convention));
      table.name = "negative binomial p=1/6 mod " + std::to_string(modulus) + " (" + convention_name(convention) + ")";
      table.columns.push_back("r");
      for (std::int64_t k : {1, 2, 3, 4}) {
        grid.emplace_back(k, DistributionSpec::negative_binomial(static_cast<std::uint64_t>(k), kSixth, convention));
      }
      break;
  }
  for (std::uint32_t k = 0; k < modulus; ++k) table.columns.push_back("residue " + std::to_string(k));
  table.columns.push_back("max_abs_deviation");
  table.columns.push_back("cf_bound");

  for (const auto& [label, spec] : grid) {
    const auto law = project_direct(spec, modulus);
    std::vector<Value> row{label};
    for (double p : law.probs) row.emplace_back(p);
    row.emplace_back(law.max_abs_deviation);
    row.push_back(law.cf_bound ? Value(*law.cf_bound) : Value(std::string("n/a")));
    table.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(table));
  r.notes.push_back("cells are P(N mod M = k) by direct lattice summation; unassigned tail below 1e-14");
  if (which == TableKind::NegativeBinomial) {
    r.notes.push_back(
        "NOT-REFERENCE-MATCHING: oracle values under the " + convention_name(convention) +
        " convention; pmf means P(n) = C(n+r-1,n) (1-p)^r p^n, swapped means C(n+r-1,n) p^r (1-p)^n; "
        "select with --nb-convention");
  }
  return r;
}

Report cmd_measures(const DistributionSpec& spec) {
  Report r = start("measures");
  r.inputs.emplace_back("spec", spec.describe());

  const auto state = build_state(spec);
  r.metrics.push_back({"dimension", static_cast<double>(state.dimension()), std::nullopt});
  r.metrics.push_back({"tail_bound", state.tail_bound(), std::nullopt});
  const auto nats = shannon_entropy(state);
  const auto bits = shannon_entropy(state, 2.0);
  r.metrics.push_back({"entropy_nats", nats.value, nats.half_width});
  r.metrics.push_back({"entropy_bits", bits.value, bits.half_width});

  const Parameter which = spec.family() == Family::Poisson ? Parameter::Lambda : Parameter::P;
  const std::string pname = which == Parameter::Lambda ? "lambda" : "p";
  if (spec.family() == Family::Hypergeometric) {
    r.notes.push_back("hypergeometric has no continuous parameter; Fisher information omitted");
  } else {
    try {
      r.metrics.push_back({"fisher_" + pname, fisher_information(spec, which), std::nullopt});
      r.metrics.push_back({"fisher_" + pname + "_numeric", fisher_information_numeric(spec, which), std::nullopt});
    } catch (const DomainError& e) {
      r.notes.push_back(std::string("Fisher information omitted: ") + e.what());
    }
  }
  for (unsigned k = 1; k <= 4; ++k) {
    const auto m = moment(state, k);
    r.metrics.push_back({"moment_" + std::to_string(k), m.value, m.half_width});
  }
  const auto closed = closed_moments(spec);
  r.metrics.push_back({"mean_closed_form", closed.mean, std::nullopt});
  r.metrics.push_back({"variance_closed_form", closed.variance, std::nullopt});
  r.notes.push_back("half-widths bound the contribution of the truncated tail");
  if (spec.family() == Family::NegativeBinomial) {
    r.notes.push_back("negative binomial convention: " +
                      convention_name(spec.as<NegativeBinomialParams>().convention));
  }
  return r;
}

Report cmd_verify(Suite suite) {
  Report r = start("verify");
  r.inputs.emplace_back("suite", suite_name(suite));
  if (suite == Suite::Theorem1 || suite == Suite::All) theorem1_checks(r);
  if (suite == Suite::Limits || suite == Suite::All) limits_checks(r);
  if (suite == Suite::Conservation || suite == Suite::All) conservation_checks(r);
  if (suite == Suite::Dynamics || suite == Suite::All) dynamics_checks(r);
  r.notes.push_back(r.all_passed() ? "all checks passed" : "one or more checks failed");
  return r;
}

Report cmd_turng(const TurngOptions& o) {
  Report r = start("turng");
  r.inputs.emplace_back("spec", o.spec.describe());
  r.inputs.emplace_back("modulus", static_cast<std::int64_t>(o.modulus));
  r.inputs.emplace_back("count", static_cast<std::int64_t>(o.count));
  r.inputs.emplace_back("seed", static_cast<std::int64_t>(o.seed));
  r.inputs.emplace_back("alpha", o.alpha);

  if (o.packed && (o.modulus < 2 || (o.modulus & (o.modulus - 1)) != 0)) {
    throw UsageError("--packed needs a power-of-two modulus");
  }
  if (o.packed && !o.stream_path) throw UsageError("--packed needs --stream");

  const auto report = turng::certify(o.spec, o.modulus, o.count, o.seed, o.alpha);
  const auto law = project_direct(o.spec, o.modulus);

  Table counts{"residue counts", {"residue", "count", "frequency", "analytic_probability"}, 1, {}};
  for (std::uint32_t k = 0; k < o.modulus; ++k) {
    const auto c = report.observed_counts[k];
    counts.rows.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(c),
                           static_cast<double>(c) / static_cast<double>(o.count), law.probs[k]});
  }
  r.tables.push_back(std::move(counts));

  r.metrics.push_back({"chi_square", report.chi_square, std::nullopt});
  r.metrics.push_back({"p_value", report.p_value, std::nullopt});
  r.metrics.push_back({"empirical_entropy_bits", report.empirical_entropy_bits, std::nullopt});
  r.metrics.push_back({"entropy_ceiling_bits", std::log2(static_cast<double>(o.modulus)), std::nullopt});
  r.metrics.push_back({"analytic_max_deviation", report.analytic_max_deviation, std::nullopt});

  r.checks.push_back(make_check("turng.analytic_max_deviation", report.analytic_max_deviation, "<=",
                                turng::kAnalyticDeviationLimit));
  r.checks.push_back(make_check("turng.p_value_not_too_small", report.p_value, ">=", o.alpha));
  r.checks.push_back(make_check("turng.p_value_not_too_large", report.p_value, "<=", 1.0 - o.alpha));
  r.notes.push_back(std::string("verdict: ") + (report.verdict == turng::Verdict::Pass ? "pass" : "fail"));
  r.notes.push_back("digits come from a seeded xoshiro256++ generator; the stream demonstrates the "
                    "distribution-to-uniform reduction, not physical entropy");

  if (o.stream_path) {
    std::ofstream out(*o.stream_path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open stream file " + *o.stream_path);
    const auto digits = turng::generate(o.spec, o.modulus, o.count, o.seed);
    if (o.packed) {
      turng::write_digits_packed(digits, o.modulus, out);
      r.notes.push_back("stream: packed, log2(M) bits per digit, least significant bit first");
    } else {
      turng::write_digits_bytes(digits, out);
      r.notes.push_back("stream: one digit per byte");
    }
    if (!out) throw UsageError("failed writing stream file " + *o.stream_path);
  }
  return r;
}

Report cmd_advise(const ScaleFamily& family, std::uint32_t modulus, double epsilon) {
  Report r = start("advise");
  r.inputs.emplace_back("family", to_string(family.family));
  if (family.family != Family::Poisson) r.inputs.emplace_back("p", family.p);
  if (family.family == Family::NegativeBinomial) r.inputs.emplace_back("nb_convention", convention_name(family.convention));
  r.inputs.emplace_back("modulus", static_cast<std::int64_t>(modulus));
  r.inputs.emplace_back("epsilon", epsilon);
  const auto advice = turng_advise(family, modulus, epsilon);
  r.metrics.push_back({"scale", advice.scale, std::nullopt});
  r.metrics.push_back({"achieved_deviation", advice.achieved_deviation, std::nullopt});
  r.metrics.push_back({"heuristic_scale_mean_2M", advice.heuristic_scale, std::nullopt});
  r.metrics.push_back({"heuristic_deviation", advice.heuristic_deviation, std::nullopt});
  r.checks.push_back(make_check("advise.achieved_deviation", advice.achieved_deviation, "<=", epsilon));
  return r;
}

}  // namespace stochq::app
