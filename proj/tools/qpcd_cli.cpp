// qpcd: command line front end for the sweeps and the enumeration oracle.
//
//   qpcd sweep-field   --config cfg.toml --out trace.csv --format csv
//   qpcd sweep-gate    --config cfg.toml --set bias.values_uV=[10,100]
//   qpcd oracle-check  --seed 7 --draws 1000 --max-n 14
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical or model error.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "qpcd/config.hpp"
#include "qpcd/errors.hpp"
#include "qpcd/experiments.hpp"
#include "qpcd/oracle.hpp"
#include "qpcd/output.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct SweepArgs {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::vector<std::string> overrides;
  int threads = 1;
};

int run_sweep_command(const SweepArgs& args, qpcd::SweepAxis axis) {
  auto overrides = args.overrides;
  overrides.insert(overrides.begin(), "sweep.axis=" + std::string(qpcd::to_string(axis)));
  const auto format = qpcd::parse_output_format(args.format);
  const auto cfg = qpcd::load_config(args.config, overrides);
  const auto result = qpcd::run_sweep(cfg, {args.threads});
  if (args.out.empty() || args.out == "-") {
    std::cout << qpcd::render(result, format);
  } else {
    qpcd::emit(result, format, args.out);
  }
  return 0;
}

void add_sweep_options(CLI::App* cmd, SweepArgs& args) {
  cmd->add_option("--config", args.config, "TOML config (or JSON output to replay)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "output path, '-' or empty for stdout");
  cmd->add_option("--format", args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--set", args.overrides, "override section.key=value (repeatable)");
  cmd->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled dephasing in an AB interferometer with a QPC which-path detector"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  struct {
    const char* name;
    const char* help;
    qpcd::SweepAxis axis;
  } const sweeps[] = {
      {"sweep-field", "collector current versus magnetic field", qpcd::SweepAxis::field},
      {"sweep-plunger", "dot conductance and sawtooth detector trace", qpcd::SweepAxis::plunger},
      {"sweep-gate", "visibility versus QPC gate voltage", qpcd::SweepAxis::qpc_gate},
      {"sweep-bias", "visibility versus detector bias", qpcd::SweepAxis::bias},
  };
  std::vector<std::pair<CLI::App*, qpcd::SweepAxis>> sweep_cmds;
  for (const auto& s : sweeps) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_sweep_options(cmd, sweep_args);
    sweep_cmds.emplace_back(cmd, s.axis);
  }

  std::uint64_t seed = 20240611;
  int draws = 1000;
  int max_n = 14;
  double tolerance = 1e-10;
  int threads = 1;
  auto* oracle = app.add_subcommand("oracle-check", "brute-force branch enumeration check");
  oracle->add_option("--seed", seed, "random seed");
  oracle->add_option("--draws", draws, "random pair pairs")->check(CLI::PositiveNumber);
  oracle->add_option("--max-n", max_n, "largest probe count (<= 20)")->check(CLI::Range(1, 20));
  oracle->add_option("--tolerance", tolerance, "max absolute deviation");
  oracle->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, axis] : sweep_cmds) {
      if (cmd->parsed()) return run_sweep_command(sweep_args, axis);
    }
    if (oracle->parsed()) {
      const auto report = qpcd::run_oracle_check(seed, draws, max_n, tolerance, threads);
      std::cout << "seed=" << report.seed << " draws=" << report.draws
                << " max_n=" << report.max_n
                << " max_abs_deviation=" << qpcd::format_double(report.max_abs_deviation)
                << " tolerance=" << qpcd::format_double(report.tolerance) << " "
                << (report.passed ? "PASS" : "FAIL") << "\n";
      return report.passed ? 0 : exit_numerical;
    }
  } catch (const qpcd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const qpcd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
  return 0;
}
