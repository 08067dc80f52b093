#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stochq/error.hpp"
#include "stochq_app/cli.hpp"
#include "stochq_app/commands.hpp"
#include "stochq_app/report.hpp"
#include "stochq_app/spec_parser.hpp"

using namespace stochq;
using namespace stochq::app;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Report sample_report() {
  Report r;
  r.command = "measures";
  r.version = "0.3.0";
  r.inputs = {{"spec", std::string("poisson:lambda=4")}, {"modulus", std::int64_t{4}},
              {"epsilon", 1e-4}};
  r.tables.push_back({"t, \"quoted\"", {"label", "a", "b"}, 1,
                      {{std::string("x,y"), 0.125, std::int64_t{3}},
                       {std::string("line\nbreak"), -0.0, 1.0 / 3.0}}});
  r.metrics = {{"m1", 2.0866726998809638, 7e-12}, {"m2", 0.1, std::nullopt}};
  r.checks = {make_check("c1", 1e-9, "<=", 1e-8), make_check("c2", 3.0, ">", 4.0)};
  r.notes = {"note one", "note, two"};
  return r;
}

}  // namespace

TEST(FormatFixed, RoundsHalfToEvenOnExactValue) {
  EXPECT_EQ(format_fixed(0.125, 2), "0.12");
  EXPECT_EQ(format_fixed(0.375, 2), "0.38");
  EXPECT_EQ(format_fixed(2.5, 0), "2");
  EXPECT_EQ(format_fixed(3.5, 0), "4");
  EXPECT_EQ(format_fixed(-2.5, 0), "-2");
  // 2.675 is stored slightly below the midpoint.
  EXPECT_EQ(format_fixed(2.675, 2), "2.67");
  EXPECT_EQ(format_fixed(0.25, 4), "0.2500");
  EXPECT_EQ(format_fixed(0.0625, 3), "0.062");
  EXPECT_EQ(format_fixed(0.1875, 3), "0.188");
  EXPECT_EQ(format_fixed(0.5, 0), "0");
  // Binary values just above the decimal midpoint round up.
  EXPECT_EQ(format_fixed(0.99995, 4), "1.0000");
  EXPECT_EQ(format_fixed(0.99985, 4), "0.9999");
  EXPECT_EQ(format_fixed(1e20, 1), "100000000000000000000.0");
}

TEST(FormatFixed, NoNegativeZero) {
  EXPECT_EQ(format_fixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(format_fixed(-0.0, 2), "0.00");
  EXPECT_EQ(format_fixed(-0.03125, 1), "0.0");
  EXPECT_EQ(format_fixed(-0.00005, 4), "-0.0001");
  EXPECT_EQ(format_fixed(-0.00006, 4), "-0.0001");
}

TEST(FormatShortest, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 2.0866726998809638, 1e-300, 47.61904761904762}) {
    EXPECT_EQ(std::stod(format_shortest(v)), v);
  }
  EXPECT_EQ(format_shortest(0.25), "0.25");
}

TEST(SpecParser, Families) {
  EXPECT_EQ(parse_spec("binomial:n=10,p=0.3"), DistributionSpec::binomial(10, 0.3));
  EXPECT_EQ(parse_spec(" nb : r=4 , p=1/6, convention=swapped "),
            DistributionSpec::negative_binomial(4, 1.0 / 6.0, NbConvention::Swapped));
  EXPECT_EQ(parse_spec("negative_binomial:r=2,p=0.5", NbConvention::Swapped),
            DistributionSpec::negative_binomial(2, 0.5, NbConvention::Swapped));
  EXPECT_EQ(parse_spec("nb:r=2,p=0.5,convention=pmf", NbConvention::Swapped),
            DistributionSpec::negative_binomial(2, 0.5, NbConvention::Pmf));
  EXPECT_EQ(parse_spec("geometric:p=0.5"), DistributionSpec::geometric(0.5));
  EXPECT_EQ(parse_spec("poisson:lambda=4"), DistributionSpec::poisson(4.0));
  EXPECT_EQ(parse_spec("hypergeometric:N=20,K=7,n=5"), DistributionSpec::hypergeometric(20, 7, 5));
  EXPECT_EQ(parse_spec(DistributionSpec::binomial(10, 0.3).describe()),
            DistributionSpec::binomial(10, 0.3));
}

TEST(SpecParser, Rejections) {
  for (const char* bad :
       {"", "bogus:x=1", "poisson", "poisson:lambda", "poisson:lambda=abc", "poisson:lambda=-1",
        "poisson:lambda=4,lambda=5", "poisson:lambda=4,p=0.1", "binomial:n=10",
        "binomial:n=-3,p=0.5", "binomial:n=10,p=1.5", "nb:r=2,p=0.5,convention=other",
        "geometric:p=1/0", "poisson:lambda=nan", "hypergeometric:N=5,K=7,n=2"}) {
    EXPECT_THROW(parse_spec(bad), UsageError) << bad;
  }
}

TEST(SpecParser, Numbers) {
  EXPECT_DOUBLE_EQ(parse_real("1/6"), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(parse_real("2.5e-1"), 0.25);
  EXPECT_EQ(parse_count("96"), 96u);
  EXPECT_THROW(parse_count("1.5"), UsageError);
  EXPECT_THROW(parse_real("1/"), UsageError);
}

TEST(ReportJson, RoundTripsLosslessly) {
  const Report r = sample_report();
  const Report back = report_from_json(Json::parse(render_json(r)));
  EXPECT_EQ(back, r);
  EXPECT_EQ(render_json(back), render_json(r));
}

TEST(ReportJson, RealCommandsRoundTrip) {
  const std::vector<Report> reports = {
      cmd_measures(parse_spec("binomial:n=10,p=0.3")),
      cmd_tables(TableKind::NegativeBinomial, 4, NbConvention::Pmf),
      cmd_advise(ScaleFamily{Family::Poisson}, 4, 1e-4),
  };
  for (const auto& r : reports) {
    EXPECT_EQ(report_from_json(Json::parse(render_json(r))), r) << r.command;
  }
}

TEST(ReportJson, MalformedDocument) {
  EXPECT_THROW(report_from_json(Json::parse("{}")), UsageError);
  EXPECT_THROW(report_from_json(Json::parse("[1,2]")), UsageError);
}

TEST(ReportCsv, Rfc4180) {
  const std::string csv = render_csv(sample_report(), 4);
  EXPECT_EQ(csv.rfind("section,name,row,column,value\r\n", 0), 0u);
  EXPECT_NE(csv.find("\"t, \"\"quoted\"\"\""), std::string::npos);
  EXPECT_NE(csv.find("\"x,y\""), std::string::npos);
  EXPECT_NE(csv.find("\"line\nbreak\""), std::string::npos);
  EXPECT_NE(csv.find("0.1250"), std::string::npos);
  // Every record ends with CRLF; no bare LF outside quoted fields.
  bool quoted = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    if (csv[i] == '"') quoted = !quoted;
    if (csv[i] == '\n' && !quoted) {
      ASSERT_GT(i, 0u);
      EXPECT_EQ(csv[i - 1], '\r') << i;
    }
  }
  EXPECT_FALSE(quoted);
  EXPECT_EQ(csv.substr(csv.size() - 2), "\r\n");
}

TEST(ReportMarkdown, FixedColumnOrderAndPrecision) {
  const std::string md = render_markdown(sample_report(), 4);
  EXPECT_NE(md.find("| label | a | b |"), std::string::npos);
  EXPECT_NE(md.find("0.1250"), std::string::npos);
  EXPECT_NE(md.find("0.3333"), std::string::npos);
  EXPECT_NE(md.find("PASS"), std::string::npos);
  EXPECT_NE(md.find("FAIL"), std::string::npos);
  EXPECT_NE(render_markdown(sample_report(), 2).find("0.12 "), std::string::npos);
}

TEST(Checks, Relations) {
  EXPECT_TRUE(make_check("a", 1, "<=", 1).passed);
  EXPECT_FALSE(make_check("a", 1, "<", 1).passed);
  EXPECT_TRUE(make_check("a", 2, ">", 1).passed);
  EXPECT_TRUE(make_check("a", 1, ">=", 1).passed);
  EXPECT_TRUE(make_check("a", 1, "==", 1).passed);
  EXPECT_FALSE(make_check("a", std::nan(""), "<=", 1).passed);
  EXPECT_THROW(make_check("a", 1, "!=", 1), std::invalid_argument);
}

TEST(Commands, TablesPoissonGrid) {
  const Report r = cmd_tables(TableKind::Poisson, 4, NbConvention::Pmf);
  ASSERT_EQ(r.tables.size(), 1u);
  const auto& t = r.tables[0];
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.columns.size(), 7u);
  for (const auto& row : t.rows) {
    double sum = 0.0;
    for (int k = 1; k <= 4; ++k) sum += std::get<double>(row[k]);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_NEAR(std::get<double>(t.rows[0][1]), 0.38321687598235965, 1e-13);
}

TEST(Commands, NbTableCarriesProvenanceNote) {
  for (auto conv : {NbConvention::Pmf, NbConvention::Swapped}) {
    const Report r = cmd_tables(TableKind::NegativeBinomial, 4, conv);
    bool flagged = false;
    for (const auto& n : r.notes) flagged |= n.find("NOT-REFERENCE-MATCHING") != std::string::npos;
    EXPECT_TRUE(flagged);
  }
}

TEST(Commands, MeasuresPointMass) {
  const Report r = cmd_measures(parse_spec("binomial:n=5,p=0"));
  bool found = false;
  for (const auto& m : r.metrics) {
    if (m.name == "entropy_nats") {
      found = true;
      EXPECT_EQ(m.value, 0.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Commands, VerifyAllPasses) {
  const Report r = cmd_verify(Suite::All);
  EXPECT_TRUE(r.all_passed());
  double grid_cases = 0.0;
  for (const auto& c : r.checks) {
    EXPECT_TRUE(c.passed) << c.name << " " << c.value;
    if (c.name == "conservation.grid_cases") grid_cases = c.value;
  }
  EXPECT_GE(grid_cases, 50.0);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(run_cli({"--version"}).code, kExitOk);
  EXPECT_EQ(run_cli({"measures", "--spec", "poisson:lambda=4"}).code, kExitOk);
  EXPECT_EQ(run_cli({"turng", "--spec", "poisson:lambda=8", "--modulus", "4", "--count",
                     "100000", "--seed", "1"})
                .code,
            kExitOk);
  EXPECT_EQ(run_cli({"turng", "--spec", "poisson:lambda=1", "--modulus", "4", "--count",
                     "100000"})
                .code,
            kExitCheckFailed);
  EXPECT_EQ(run_cli({"turng", "--spec", "poisson:lambda=8", "--modulus", "4", "--count", "10"})
                .code,
            kExitUsage);
  EXPECT_EQ(run_cli({"measures", "--spec", "bogus:x=1"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"measures"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"--format", "xml", "measures", "--spec", "poisson:lambda=4"}).code,
            kExitUsage);
  EXPECT_EQ(run_cli({"--precision", "40", "measures", "--spec", "poisson:lambda=4"}).code,
            kExitUsage);
  EXPECT_EQ(run_cli({"tables", "--which", "nb", "--nb-convention", "weird"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"verify", "--suite", "theorem1"}).code, kExitOk);
  EXPECT_EQ(run_cli({"turng", "--spec", "poisson:lambda=8", "--modulus", "6", "--count",
                     "1000", "--packed"})
                .code,
            kExitUsage);
}

TEST(Run, UsageErrorsGoToStderr) {
  const auto r = run_cli({"measures", "--spec", "poisson:lambda=-1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST(Run, ByteIdenticalOnRerun) {
  for (const char* fmt : {"md", "csv", "json"}) {
    const std::vector<std::string> args = {"--format", fmt, "turng", "--spec",
                                           "poisson:lambda=8", "--modulus", "4",
                                           "--count", "200000", "--seed", "7"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out) << fmt;
    EXPECT_FALSE(a.out.empty());
  }
  const auto t1 = run_cli({"--format", "json", "tables", "--which", "binomial"});
  const auto t2 = run_cli({"--format", "json", "tables", "--which", "binomial"});
  EXPECT_EQ(t1.out, t2.out);
}

TEST(Run, OutFileAndStream) {
  const std::string report_path = ::testing::TempDir() + "stochq_cli_report.json";
  const std::string stream_path = ::testing::TempDir() + "stochq_cli_stream.bin";
  const std::vector<std::string> args = {
      "--format", "json", "--out", report_path, "turng", "--spec", "poisson:lambda=8",
      "--modulus", "4", "--count", "4000", "--seed", "3", "--stream", stream_path, "--packed"};
  const auto r = run_cli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string first_report = slurp(report_path);
  const std::string first_stream = slurp(stream_path);
  EXPECT_EQ(first_stream.size(), 1000u);
  EXPECT_EQ(report_from_json(Json::parse(first_report)).command, "turng");
  ASSERT_EQ(run_cli(args).code, kExitOk);
  EXPECT_EQ(slurp(report_path), first_report);
  EXPECT_EQ(slurp(stream_path), first_stream);
  std::remove(report_path.c_str());
  std::remove(stream_path.c_str());
}

TEST(Run, PrecisionFlag) {
  const auto r = run_cli({"--precision", "2", "tables", "--which", "poisson"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("| 1 | 0.38 |"), std::string::npos) << r.out;
}
