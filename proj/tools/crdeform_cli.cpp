// Command-line front end: crdeform <command> [options]

#include "crdeform/runner.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace crdeform;

namespace {

int write_output(const std::string& bytes, const std::string& path)
{
  if (path.empty()) {
    std::cout << bytes;
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << bytes)) {
    std::cerr << "crdeform: cannot write " << path << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Numerical and symbolic verification suites for CR deformation theory on the Heisenberg group"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string command, config_path, format, out;
  std::optional<int> degree, order, samples;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> check_filters;

  app.add_option("command", command, "verify-complex | verify-estimate | hodge | kuranishi | rumin-check | all")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--degree", degree, "truncation degree N");
  app.add_option("--order", order, "series order M");
  app.add_option("--samples", samples, "random samples per check");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--check", check_filters, "only run checks with this id or id prefix (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (degree) cfg.degree = *degree;
    if (order) cfg.order = *order;
    if (samples) cfg.samples = *samples;
    if (seed) cfg.seed = *seed;
    if (!format.empty()) cfg.format = format;
    if (!out.empty()) cfg.out = out;
    for (const auto& c : check_filters) cfg.checks.push_back(c);
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "crdeform: " << e.what() << "\n";
    return 2;
  }

  VerificationReport rep;
  try {
    rep = run(command, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "crdeform: " << e.what() << "\n";
    return 2;
  }
  if (!rep.complete) std::cerr << "crdeform: numerical failure in " << rep.error << "\n";
  if (const int rc = write_output(emit_report(rep, cfg.format), cfg.out)) return rc;
  return exit_code(rep);
}
