// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stochq/distributions.hpp"
#include "stochq/fock.hpp"
#include "stochq/hilbert.hpp"
#include "stochq/modproj.hpp"
#include "stochq/turng.hpp"
#include "stochq_app/commands.hpp"
#include "stochq_app/report.hpp"

using namespace stochq;
using namespace stochq::fock;
using stochq::app::Report;

namespace {

using Row = std::array<double, 4>;

constexpr double kUniform4dp = 5e-5;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [fail: " << what << "]";
    }
  }
};

double metric(const Report& r, const std::string& name) {
  for (const auto& m : r.metrics) {
    if (m.name == name) return m.value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double cell(const app::Table& t, std::size_t row, std::size_t col) {
  return std::get<double>(t.rows.at(row).at(col));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs body, appends runtime, prints the verdict line.
bool criterion(int id, const char* title, double time_limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double elapsed = seconds_since(start);
  if (time_limit_s > 0.0) {
    out.detail << " runtime=" << elapsed << "s";
    out.require(elapsed < time_limit_s, "runtime limit " + std::to_string(time_limit_s) + "s");
  }
  std::printf("%s %2d %s:%s\n", out.passed ? "PASS" : "FAIL", id, title, out.detail.str().c_str());
  std::fflush(stdout);
  return out.passed;
}

Matrix random_hermitian(std::size_t d, turng::Xoshiro256pp& rng) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return (m + m.adjoint()) / 2.0;
}

Vector random_unit(std::size_t d, turng::Xoshiro256pp& rng) {
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return v / v.norm();
}

double coherent_eigen_residual(std::size_t d) {
  const FockConfig cfg{d};
  const Complex alpha(2.0, 0.0);
  const Vector psi = coherent_state(cfg, alpha).value.vector();
  return (poisson_hamiltonian(cfg, alpha).matrix() * psi - 0.5 * psi).norm();
}

std::uint64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  std::uint64_t steps = 0;
  double x = std::min(a, b);
  const double hi = std::max(a, b);
  while (x < hi && steps < 1000) {
    x = std::nextafter(x, hi);
    ++steps;
  }
  return steps;
}

void entropy_case(Outcome& o, const DistributionSpec& spec, double nats, double bits) {
  const Report r = app::cmd_measures(spec);
  const double hn = metric(r, "entropy_nats");
  const double hb = metric(r, "entropy_bits");
  o.detail << " nats=" << hn << " (target " << nats << ") bits=" << hb << " (target " << bits << ")";
  o.require(std::abs(hn - nats) <= 5e-4, "nats off by " + std::to_string(std::abs(hn - nats)));
  o.require(std::abs(hb - bits) <= 5e-4, "bits off by " + std::to_string(std::abs(hb - bits)));
}

}  // namespace

int main() {
  std::printf("stochq acceptance suite\n");
  int failures = 0;
  const auto tally = [&](bool ok) { failures += ok ? 0 : 1; };

  tally(criterion(1, "entropy Binomial{10,0.3}", 1.0, [](Outcome& o) {
    entropy_case(o, DistributionSpec::binomial(10, 0.3), 1.779, 2.567);
  }));

  tally(criterion(2, "entropy Poisson{4}", 1.0, [](Outcome& o) {
    entropy_case(o, DistributionSpec::poisson(4.0), 2.086, 3.010);
  }));

  tally(criterion(3, "Fisher information", 0.0, [](Outcome& o) {
    const Report b = app::cmd_measures(DistributionSpec::binomial(10, 0.3));
    const Report p = app::cmd_measures(DistributionSpec::poisson(4.0));
    const double fb = metric(b, "fisher_p");
    const double fbn = metric(b, "fisher_p_numeric");
    const double fp = metric(p, "fisher_lambda");
    const double fpn = metric(p, "fisher_lambda_numeric");
    o.detail << " binomial=" << fb << " numeric=" << fbn << " poisson=" << fp << " numeric=" << fpn;
    o.require(std::abs(fb - 47.619) <= 1e-2, "binomial analytic");
    o.require(std::abs(fbn - 47.619) <= 1e-2, "binomial numeric");
    o.require(std::abs(fp - 0.25) <= 1e-6, "poisson analytic");
    o.require(std::abs(fpn - 0.25) <= 1e-6, "poisson numeric");
  }));

  tally(criterion(4, "Poisson mod 4 table", 1.0, [](Outcome& o) {
    const std::array<Row, 5> printed = {{{0.3832, 0.3710, 0.1847, 0.0614},
                                         {0.3233, 0.2901, 0.2203, 0.1663},
                                         {0.2618, 0.2521, 0.2462, 0.2399},
                                         {0.2500, 0.2500, 0.2500, 0.2500},
                                         {0.2500, 0.2500, 0.2500, 0.2500}}};
    const std::array<double, 5> lambdas = {1, 2, 4, 8, 16};
    const Report r = app::cmd_tables(app::TableKind::Poisson, 4, NbConvention::Pmf);
    const auto& t = r.tables.at(0);
    int matched = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double v = cell(t, i, k + 1);
        if (std::abs(v - printed[i][k]) <= 1e-3) {
          ++matched;
        } else {
          o.require(false, "lambda=" + std::to_string(static_cast<int>(lambdas[i])) + " residue " +
                               std::to_string(k) + " computed " + app::format_fixed(v, 4) +
                               " printed " + app::format_fixed(printed[i][k], 4));
        }
      }
    }
    o.detail << " cells matched " << matched << "/20";
    for (std::size_t i : {3u, 4u}) {
      const double dev = cell(t, i, 5);
      o.detail << " lambda=" << lambdas[i] << " max_dev=" << dev;
      o.require(dev <= kUniform4dp, "lambda=" + std::to_string(static_cast<int>(lambdas[i])) +
                                        " not uniform to 4 decimals");
    }
  }));

  tally(criterion(5, "Binomial p=1/6 mod 4 table", 1.0, [](Outcome& o) {
    const std::array<Row, 4> printed = {{{0.2016, 0.1985, 0.3026, 0.2975},
                                         {0.2498, 0.2398, 0.2503, 0.2600},
                                         {0.2502, 0.2498, 0.2499, 0.2501},
                                         {0.2500, 0.2500, 0.2500, 0.2500}}};
    const Report r = app::cmd_tables(app::TableKind::Binomial, 4, NbConvention::Pmf);
    const auto& t = r.tables.at(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      Row computed{};
      for (std::size_t k = 0; k < 4; ++k) computed[k] = cell(t, i, k + 1);
      Row expected = printed[i];
      std::sort(computed.begin(), computed.end());
      std::sort(expected.begin(), expected.end());
      for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(computed[k] - expected[k]));
    }
    const double dev96 = cell(t, 3, 5);
    o.detail << " worst multiset gap=" << worst << " n=96 max_dev=" << dev96;
    o.require(worst <= 1e-3, "multiset gap");
    o.require(dev96 <= kUniform4dp, "n=96 not uniform to 4 decimals");
  }));

  tally(criterion(6, "negative binomial substitute property", 0.0, [](Outcome& o) {
    double worst_sum = 0.0;
    double worst_excess = -1.0;
    for (std::uint64_t r : {1u, 2u, 3u, 4u}) {
      for (auto conv : {NbConvention::Pmf, NbConvention::Swapped}) {
        const auto spec = DistributionSpec::negative_binomial(r, 1.0 / 6.0, conv);
        const auto law = project_direct(spec, 4);
        double sum = 0.0;
        for (double p : law.probs) sum += p;
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        const double bound = cf_decay_bound(spec, 4).per_point_bound;
        worst_excess = std::max(worst_excess, law.max_abs_deviation - bound);
      }
    }
    o.detail << " max|sum-1|=" << worst_sum << " max(dev-bound)=" << worst_excess;
    o.require(worst_sum <= 1e-12, "conservation");
    o.require(worst_excess <= 1e-12, "bound dominance");

    const auto swapped = DistributionSpec::negative_binomial(4, 1.0 / 6.0, NbConvention::Swapped);
    const double analytic = cf_decay_bound(swapped, 4).per_point_bound;
    const auto folded = project_direct(swapped, 4);
    const auto fourier = project_cf(swapped, 4);
    o.detail << " swapped r=4: cf_bound=" << analytic << " direct max_dev=" << folded.max_abs_deviation
             << " fourier max_dev=" << fourier.max_abs_deviation;
    o.require(analytic <= 2.7e-4, "cf bound");
    o.require(folded.max_abs_deviation <= analytic + 1e-12, "direct fold exceeds cf bound");
    o.require(folded.max_abs_deviation <= kUniform4dp, "swapped r=4 not uniform to 4 decimals");
  }));

  tally(criterion(7, "coherent-state eigen-residual", 30.0, [](Outcome& o) {
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t d : {32u, 64u, 128u, 256u}) {
      const double r = coherent_eigen_residual(d);
      o.detail << " D=" << d << ":" << r;
      o.require(r <= previous, "residual increased at D=" + std::to_string(d));
      if (d == 128) o.require(r <= 1e-8, "residual at D=128");
      previous = r;
    }
  }));

  tally(criterion(8, "dual-route projection identity", 0.0, [](Outcome& o) {
    std::vector<DistributionSpec> grid;
    for (double lambda : {0.3, 1.0, 2.5, 7.0, 19.0}) grid.push_back(DistributionSpec::poisson(lambda));
    for (double p : {0.1, 1.0 / 6.0, 0.5, 0.83}) grid.push_back(DistributionSpec::geometric(p));
    for (std::uint64_t n : {1u, 12u, 45u}) grid.push_back(DistributionSpec::binomial(n, 0.27));
    for (std::uint64_t r : {2u, 5u}) {
      grid.push_back(DistributionSpec::negative_binomial(r, 0.35));
      grid.push_back(DistributionSpec::negative_binomial(r, 0.35, NbConvention::Swapped));
    }
    grid.push_back(DistributionSpec::hypergeometric(20, 7, 9));
    grid.push_back(DistributionSpec::hypergeometric(50, 25, 30));
    int cases = 0;
    double worst = 0.0;
    std::array<bool, 5> families{};
    for (const auto& spec : grid) {
      families[static_cast<std::size_t>(spec.family())] = true;
      for (std::uint32_t m : {2u, 3u, 4u, 7u}) {
        const auto direct = project_direct(spec, m);
        const auto fourier = project_cf(spec, m);
        for (std::uint32_t k = 0; k < m; ++k)
          worst = std::max(worst, std::abs(direct.probs[k] - fourier.probs[k]));
        ++cases;
      }
    }
    const auto covered = std::count(families.begin(), families.end(), true);
    o.detail << " cases=" << cases << " families=" << covered << " max cell gap=" << worst;
    o.require(cases >= 50, "grid size");
    o.require(covered == 5, "family coverage");
    o.require(worst <= 1e-10, "cell gap");
  }));

  tally(criterion(9, "Poisson limit of Binomial", 0.0, [](Outcome& o) {
    const auto target = build_state(DistributionSpec::poisson(4.0));
    double previous = std::numeric_limits<double>::infinity();
    for (std::uint64_t n : {10u, 100u, 1000u, 10000u}) {
      const double d = l2_distance(build_state(DistributionSpec::binomial(n, 4.0 / static_cast<double>(n))), target);
      o.detail << " n=" << n << ":" << d;
      o.require(d < previous, "not strictly decreasing at n=" + std::to_string(n));
      if (n == 10000) o.require(d < 1e-3, "gap at n=1e4");
      previous = d;
    }
  }));

  tally(criterion(10, "NB(1,p) equals Geometric(p)", 0.0, [](Outcome& o) {
    std::uint64_t worst = 0;
    for (double p : {0.1, 1.0 / 6.0, 0.5, 0.9, 0.999}) {
      const auto nb = build_state(DistributionSpec::negative_binomial(1, p));
      const auto geo = build_state(DistributionSpec::geometric(p));
      o.require(nb.dimension() == geo.dimension(), "dimension mismatch");
      const std::size_t d = std::min(nb.dimension(), geo.dimension());
      for (std::size_t n = 0; n < d; ++n) worst = std::max(worst, ulp_distance(nb.amplitude(n), geo.amplitude(n)));
      o.require(nb_hierarchy_check(p), "hierarchy check");
    }
    o.detail << " max ulp distance=" << worst;
    o.require(worst <= 1, "ulp distance");
  }));

  tally(criterion(11, "unitarity and spectral dynamics", 0.0, [](Outcome& o) {
    turng::Xoshiro256pp rng(20251016);
    double norm_err = 0.0;
    double comp_err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = 2 + static_cast<std::size_t>(rng() % 31);
      const HermitianOperator h(random_hermitian(d, rng));
      const QuantumStateVector psi(random_unit(d, rng));
      const SpectralPropagator prop(h);
      for (double t : {0.1, 1.0, 10.0}) norm_err = std::max(norm_err, std::abs(prop.evolve(psi, t).vector().norm() - 1.0));
      const auto two_step = prop.evolve(prop.evolve(psi, 0.7), 1.9);
      comp_err = std::max(comp_err, (two_step.vector() - prop.evolve(psi, 2.6).vector()).norm());
    }
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const SpectralPropagator rabi{HermitianOperator(x)};
    double rabi_err = 0.0;
    for (double t : {0.0, 0.4, M_PI / 4.0, M_PI / 2.0, 2.0, 7.0}) {
      const auto psi = rabi.evolve(QuantumStateVector::basis(0, 2), t).vector();
      rabi_err = std::max(rabi_err, std::abs(psi(0) - Complex(std::cos(t), 0.0)));
      rabi_err = std::max(rabi_err, std::abs(psi(1) - Complex(0.0, -std::sin(t))));
    }
    o.detail << " norm err=" << norm_err << " composition err=" << comp_err << " rabi err=" << rabi_err;
    o.require(norm_err <= 1e-9, "norm");
    o.require(comp_err <= 1e-9, "composition");
    o.require(rabi_err <= 1e-9, "rabi");
  }));

  tally(criterion(12, "entanglement entropy", 0.0, [](Outcome& o) {
    turng::Xoshiro256pp rng(7);
    double product_max = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto prod = CompositeState::product(QuantumStateVector(random_unit(3, rng)),
                                                QuantumStateVector(random_unit(5, rng)));
      product_max = std::max(product_max, std::abs(entanglement_entropy(prod)));
    }
    Matrix bell = Matrix::Zero(2, 2);
    bell(0, 0) = bell(1, 1) = 1.0 / std::sqrt(2.0);
    const double bell_err = std::abs(entanglement_entropy(joint_state(bell)) - std::log(2.0));
    double asym = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t da = 2 + static_cast<std::size_t>(rng() % 8);
      const std::size_t db = 2 + static_cast<std::size_t>(rng() % 8);
      const Vector v = random_unit(da * db, rng);
      const auto state = joint_state(Eigen::Map<const Matrix>(v.data(), da, db));
      asym = std::max(asym, std::abs(entanglement_entropy(state, Subsystem::A) -
                                     entanglement_entropy(state, Subsystem::B)));
    }
    o.detail << " product max=" << product_max << " bell err=" << bell_err << " |S_A-S_B| max=" << asym;
    o.require(product_max <= 1e-12, "product");
    o.require(bell_err <= 1e-10, "bell");
    o.require(asym <= 1e-10, "symmetry");
  }));

  tally(criterion(13, "Lindblad amplitude damping", 0.0, [](Outcome& o) {
    const FockConfig cfg{2};
    const HermitianOperator h0(Matrix::Zero(2, 2));
    const Matrix v = annihilation(cfg);
    DensityOperator rho = DensityOperator::pure(QuantumStateVector::basis(1, 2));
    double trace_err = 0.0;
    for (int step = 0; step < 1000; ++step) {
      rho = lindblad_step(h0, v, rho, 1e-3, 1);
      trace_err = std::max(trace_err, std::abs(rho.trace() - 1.0));
    }
    const double pop_err = std::abs(rho.population(1) - std::exp(-1.0));
    o.detail << " |P1(1)-e^-1|=" << pop_err << " max trace err=" << trace_err;
    o.require(pop_err <= 1e-4, "population");
    o.require(trace_err <= 1e-8, "trace");
  }));

  tally(criterion(14, "TURNG end to end", 10.0, [](Outcome& o) {
    app::TurngOptions opt{DistributionSpec::poisson(8.0)};
    opt.modulus = 4;
    opt.count = 1000000;
    opt.seed = 1;
    const Report first = app::cmd_turng(opt);
    const Report second = app::cmd_turng(opt);
    const auto& t = first.tables.at(0);
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, std::abs(cell(t, k, 2) - 0.25));
    const double entropy = metric(first, "empirical_entropy_bits");
    const bool identical = app::render_json(first) == app::render_json(second) &&
                           app::render_markdown(first, 4) == app::render_markdown(second, 4) &&
                           app::render_csv(first, 4) == app::render_csv(second, 4);
    o.detail << " verdict=" << (first.all_passed() ? "pass" : "fail") << " max|freq-0.25|=" << worst
             << " entropy=" << entropy << " byte-identical=" << (identical ? "yes" : "no");
    o.require(first.all_passed(), "certify");
    o.require(worst <= 0.0022, "frequency");
    o.require(entropy >= 1.999, "entropy");
    o.require(identical, "rerun differs");
  }));

  std::printf("%d of 14 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
