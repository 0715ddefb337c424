// risd2d command line: run figure sweeps, solve the joint design, run the oracle suite.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "risd2d/experiment/runner.hpp"

namespace {

namespace ex = risd2d::experiment;

enum Exit : int { kOk = 0, kUsage = 2, kDomain = 3, kNumeric = 4, kIo = 5, kValidation = 6 };

int exit_code_for(const std::string& category) {
  if (category == "config" || category == "mode") return kUsage;
  if (category == "domain" || category == "constraint") return kDomain;
  if (category == "numeric") return kNumeric;
  if (category == "io") return kIo;
  return kNumeric;
}

struct Overrides {
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

ex::ExperimentConfig load(const std::string& path, const Overrides& ov) {
  auto c = ex::load_config(path);
  // Overrides go through the normalized view too, so the hash tracks them.
  if (ov.trials) c.normalized["trials"] = c.trials = *ov.trials;
  if (ov.seed) c.normalized["seed"] = c.seed = *ov.seed;
  if (ov.out) c.output_dir = *ov.out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted underlay D2D toolkit"};
  app.require_subcommand(1);
  Overrides ov;
  std::uint64_t trials = 0, seed = 0;
  std::string out;
  auto* o_trials = app.add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::Range(1000ULL, 1ULL << 40));
  auto* o_seed = app.add_option("--seed", seed, "base seed");
  auto* o_out = app.add_option("--out", out, "output directory");

  std::string config_path, experiment;
  auto* run = app.add_subcommand("run", "run a named experiment");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("experiment", experiment, "fig3 fig4 fig5a fig5b fig6 fig7 fig8a fig8b fig9 fig10 custom")->required();

  auto* opt = app.add_subcommand("optimize", "joint placement and power");
  opt->add_option("config", config_path, "configuration file")->required();

  auto* val = app.add_subcommand("validate", "oracle suite");
  val->add_option("config", config_path, "configuration file")->required();

  for (auto* sub : {run, opt, val}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (*o_trials) ov.trials = trials;
  if (*o_seed) ov.seed = seed;
  if (*o_out) ov.out = out;

  try {
    const auto cfg = load(config_path, ov);
    ex::RunOptions ro;
    ro.out_dir = cfg.output_dir;
    if (*opt) {
      const auto report = ex::optimize_report(cfg);
      std::cout << report.dump(2) << '\n';
      return kOk;
    }
    const auto r = ex::run_experiment(cfg, *val ? std::string("validate") : experiment, ro);
    for (const auto& f : r.outputs) std::cout << ro.out_dir << '/' << f << '\n';
    if (!r.passed) {
      std::cerr << "error: category=validation message=one or more oracle checks failed\n";
      return kValidation;
    }
    return kOk;
  } catch (const risd2d::Error& e) {
    std::cerr << "error: category=" << e.category() << " message=" << e.what() << '\n';
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: category=internal message=" << e.what() << '\n';
    return kNumeric;
  }
}
