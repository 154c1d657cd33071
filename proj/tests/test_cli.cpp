#include "crdeform/runner.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sys/wait.h>

using namespace crdeform;

namespace {

std::string error_of(const std::string& text)
{
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

RunConfig small_config()
{
  RunConfig c;
  c.degree = 2;
  c.order = 1;
  c.samples = 3;
  return c;
}

struct Process
{
  int code = -1;
  std::string out;
};

Process run_cli(const std::string& args)
{
  Process p;
  const std::string cmd = std::string(CRDEFORM_CLI_PATH) + " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return p;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) p.out.append(buf, n);
  const int st = pclose(f);
  p.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return p;
}

}  // namespace

TEST(Config, ParsesAndDefaultsTheRest)
{
  const RunConfig c = parse_config("degree=4\norder=3\nseed=7");
  EXPECT_EQ(c.degree, 4);
  EXPECT_EQ(c.order, 3);
  EXPECT_EQ(c.seed, 7u);
  const RunConfig d;
  EXPECT_EQ(c.samples, d.samples);
  EXPECT_EQ(c.kernel_threshold, 1e-9);
  EXPECT_EQ(c.identity_tolerance, 1e-8);
  EXPECT_EQ(c.majorant_b, 1);
  EXPECT_EQ(c.majorant_c, 1);
  EXPECT_EQ(c.kuranishi_params, 2);
  EXPECT_EQ(d.degree, 6);
  EXPECT_EQ(d.order, 3);
  EXPECT_EQ(d.samples, 50);
  EXPECT_EQ(d.seed, 42u);
}

TEST(Config, CommentsWhitespaceRationalsAndRepeatedChecks)
{
  const RunConfig c = parse_config("# header\n  degree = 8   # trailing\n\nmajorant_b=3/2\ncheck=hodge\ncheck=rumin.diagram\n");
  EXPECT_EQ(c.degree, 8);
  EXPECT_EQ(c.majorant_b, mpq_class(3, 2));
  EXPECT_EQ(c.checks, (std::vector<std::string>{"hodge", "rumin.diagram"}));
}

TEST(Config, ErrorsNameTheLine)
{
  EXPECT_EQ(error_of("degree=4\ndegree=5\n"), "cfg:2: duplicate key 'degree' (first set on line 1)");
  EXPECT_EQ(error_of("\nfoo=1\n"), "cfg:2: unknown key 'foo'");
  EXPECT_EQ(error_of("degree=4\n\nnonsense\n"), "cfg:3: malformed line, expected key=value");
  EXPECT_EQ(error_of("order=two\n"), "cfg:1: order: expected an integer, got 'two'");
  EXPECT_EQ(error_of("majorant_c=0.5\n"), "cfg:1: majorant_c: expected a rational like 3 or 3/2, got '0.5'");
  EXPECT_EQ(error_of("=3\n"), "cfg:1: missing key before '='");
}

TEST(Config, InvariantsAreValidated)
{
  EXPECT_EQ(error_of("seed=1\ndegree=0\n"), "cfg:2: degree must be at least 2");
  EXPECT_EQ(error_of("order=0\n"), "cfg:1: order must be at least 1");
  EXPECT_EQ(error_of("identity_tolerance=-1e-3\n"), "cfg:1: identity_tolerance must be positive");
  EXPECT_EQ(error_of("format=xml\n"), "cfg:1: format must be json or csv");
  EXPECT_THROW(load_config("/nonexistent/crdeform.cfg"), ConfigError);
}

TEST(Runner, FilterMatching)
{
  EXPECT_TRUE(filter_matches("hodge", "hodge.kernel"));
  EXPECT_TRUE(filter_matches("hodge.kernel", "hodge.kernel"));
  EXPECT_FALSE(filter_matches("hodge.kern", "hodge.kernel"));
  EXPECT_FALSE(filter_matches("hodge.kernel", "hodge.kernel_cross_check"));
}

TEST(Runner, EveryCheckIdIsUniqueAndOwnedByACommand)
{
  std::set<std::string> ids;
  for (const auto& s : check_registry()) {
    EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_NE(std::find(command_names().begin(), command_names().end(), s.group), command_names().end());
    EXPECT_NE(s.group, "all");
  }
}

TEST(Runner, RejectsBadCommandsAndFilters)
{
  RunConfig c = small_config();
  EXPECT_THROW(run("verify-everything", c), ConfigError);
  c.checks = {"kuranishi.family"};
  EXPECT_THROW(run("hodge", c), ConfigError);
  c.degree = 0;
  c.checks.clear();
  EXPECT_THROW(run("hodge", c), ConfigError);
}

TEST(Runner, SmallestTruncationCompletes)
{
  const auto rep = run("all", small_config());
  EXPECT_TRUE(rep.complete);
  EXPECT_EQ(rep.checks.size(), check_registry().size());
  EXPECT_GT(rep.count(CheckStatus::Diagnostic), 0);
  EXPECT_EQ(exit_code(rep), 0) << emit_report(rep, "json");
}

TEST(Runner, VerifyComplexPassesAtDefaults)
{
  const auto rep = run("verify-complex", RunConfig{});
  for (const auto& c : rep.checks) EXPECT_EQ(c.status, CheckStatus::Pass) << c.id;
  EXPECT_EQ(exit_code(rep), 0);
}

TEST(Runner, FilteredSamplesDoNotDependOnOtherChecks)
{
  RunConfig c = small_config();
  const auto all = run("hodge", c);
  c.checks = {"hodge.decomposition"};
  const auto one = run("hodge", c);
  ASSERT_EQ(one.checks.size(), 1u);
  const auto it = std::find_if(all.checks.begin(), all.checks.end(), [](const auto& r) { return r.id == "hodge.decomposition"; });
  ASSERT_NE(it, all.checks.end());
  EXPECT_EQ(*it, one.checks[0]);
}

TEST(Report, JsonRoundTripAndDeterminism)
{
  RunConfig c = small_config();
  c.checks = {"hodge", "kuranishi.majorant"};
  const auto a = run("all", c), b = run("all", c);
  const std::string ja = emit_report(a, "json");
  EXPECT_EQ(ja, emit_report(b, "json"));
  const auto back = report_from_json(ojson::parse(ja));
  EXPECT_EQ(back, a);
  EXPECT_EQ(emit_report(back, "json"), ja);
}

TEST(Report, FixedKeyOrder)
{
  const auto j = to_json(run("rumin-check", [] {
    RunConfig c = small_config();
    c.checks = {"rumin.KM_closed"};
    return c;
  }()));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"tool", "version", "command", "config", "checks", "summary"}));
  keys.clear();
  for (auto it = j["checks"][0].begin(); it != j["checks"][0].end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "status", "measured", "tolerance", "truncation", "note"}));
}

TEST(Report, PartialReportIsValidAndExitsThree)
{
  VerificationReport rep;
  rep.command = "hodge";
  rep.checks.push_back({"hodge.kernel", CheckStatus::Pass, {{"harmonic_dim", 1}}, ojson::object(), ojson::object(), ""});
  rep.complete = false;
  rep.error = "hodge.decomposition: eigen-solver failure";
  EXPECT_EQ(exit_code(rep), 3);
  const auto j = ojson::parse(emit_report(rep, "json"));
  EXPECT_FALSE(j["summary"]["complete"].get<bool>());
  EXPECT_EQ(report_from_json(j), rep);
  rep.complete = true;
  rep.error.clear();
  rep.checks[0].status = CheckStatus::Fail;
  EXPECT_EQ(exit_code(rep), 1);
}

TEST(Report, CsvHasOneRowPerCheck)
{
  RunConfig c = small_config();
  c.checks = {"rumin"};
  const auto rep = run("rumin-check", c);
  const std::string csv = emit_report(rep, "csv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), rep.checks.size() + 1);
  EXPECT_EQ(csv.rfind("check_id,status,", 0), 0u);
  EXPECT_NE(csv.find("rumin.diagram,pass,\"{\"\"P1_D_mismatches\"\":0"), std::string::npos);
}

TEST(Cli, ExitCodesAndOutput)
{
  const std::string cfg = testing::TempDir() + "crdeform_cli_bad.cfg";
  std::ofstream(cfg) << "degree=4\n# fine\nbogus line\n";
  auto p = run_cli("all --config " + cfg);
  EXPECT_EQ(p.code, 2);
  EXPECT_NE(p.out.find(cfg + ":3: malformed line"), std::string::npos) << p.out;

  p = run_cli("verify-estimate --degree 0");
  EXPECT_EQ(p.code, 2);
  EXPECT_EQ(p.out.find('{'), std::string::npos) << "no report body on a config error";

  p = run_cli("rumin-check --check rumin.KM_closed --format csv");
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("rumin.KM_closed,pass"), std::string::npos);

  const std::string out = testing::TempDir() + "crdeform_cli_out.json";
  p = run_cli("kuranishi --degree 2 --order 1 --samples 2 --check kuranishi.family --out " + out);
  EXPECT_EQ(p.code, 0) << p.out;
  std::ifstream f(out);
  const auto j = ojson::parse(f);
  EXPECT_EQ(j["checks"][0]["id"], "kuranishi.family");
}
