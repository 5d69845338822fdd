// Command line front end. Subcommands:
//   simulate    one propagation run from a config (or a previous manifest)
//   sweep       parameter sweep from the config's sweep block
//   afc-design  closed-form comb design for a target optical depth
//   slowlight   time-domain energy audit of a hole scenario
//   validate    check a config and list every problem
//
// Exit codes: 0 success, 1 simulation refusal or numerical failure, 2 usage
// or config validation error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lightstore/lightstore.hpp"

namespace {

struct GlobalFlags {
  std::string out_dir;
  bool force = false;
  unsigned threads = 1;
  bool quiet = false;
};

std::string resolve_out_dir(const GlobalFlags& flags) {
  if (!flags.out_dir.empty()) return flags.out_dir;
  if (const char* env = std::getenv("LIGHTSTORE_OUT"); env && *env) return env;
  return "out";
}

void report(const GlobalFlags& flags, const lightstore::RunSummary& summary) {
  if (flags.quiet) return;
  for (const auto& note : summary.notes) std::cout << note << '\n';
  for (const auto& file : summary.files) std::cout << "wrote " << file << '\n';
}

std::string parent_dir(const std::string& config_path) {
  return std::filesystem::path(config_path).parent_path().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectrally tailored absorber simulator"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--out", flags.out_dir,
                 "output directory (default: $LIGHTSTORE_OUT, then ./out)");
  app.add_flag("--force", flags.force, "overwrite a non-empty output directory");
  app.add_option("--threads", flags.threads, "worker threads for sweeps")
      ->check(CLI::Range(1u, 64u));
  app.add_flag("--quiet", flags.quiet, "suppress result lines");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  simulate->add_option("config", config_path, "scenario JSON file")->required();

  auto* sweep = app.add_subcommand("sweep", "run the scenario's sweep block");
  sweep->add_option("config", config_path, "scenario JSON file with a sweep block")
      ->required();

  double design_alphaL = 0.0, design_period_us = 0.0;
  auto* afc_design = app.add_subcommand("afc-design", "closed-form comb design");
  afc_design->add_option("--alphaL", design_alphaL, "background optical depth")
      ->required()
      ->check(CLI::PositiveNumber);
  afc_design
      ->add_option("--period-us", design_period_us, "comb period (storage time), us")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* slowlight = app.add_subcommand("slowlight", "energy audit of a hole scenario");
  slowlight->add_option("config", config_path, "scenario JSON file")->required();

  auto* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", config_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(afc_design)) {
      const auto design =
          lightstore::design_comb(design_alphaL, lightstore::us_to_s(design_period_us));
      std::printf("alphaL          %.6g\n", design.alphaL);
      std::printf("optimal_finesse %.6g\n", design.finesse);
      std::printf("tooth_hwhm_mhz  %.6g\n", lightstore::angular_to_mhz(design.gamma_peak()));
      std::printf("gamma_T         %.6g\n", design.gamma_T());
      std::printf("eta_max         %.6g\n", design.predicted_eta);
      return 0;
    }

    nlohmann::json doc;
    try {
      doc = lightstore::load_config_file(config_path);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "config parse error: " << e.what() << '\n';
      return 2;
    }

    if (app.got_subcommand(validate)) {
      const auto issues = lightstore::validate_config(doc);
      if (issues.empty()) {
        if (!flags.quiet) std::cout << "ok\n";
        return 0;
      }
      for (const auto& issue : issues)
        std::cerr << issue.field << ": " << issue.message << '\n';
      return 2;
    }

    lightstore::ScenarioConfig config;
    try {
      config = lightstore::parse_config(doc);
    } catch (const std::invalid_argument& e) {
      std::cerr << e.what() << '\n';
      return 2;
    }

    const std::string out_dir = resolve_out_dir(flags);
    const std::string base_dir = parent_dir(config_path);
    if (app.got_subcommand(simulate)) {
      report(flags, lightstore::run_scenario(config, out_dir, flags.force, base_dir));
    } else if (app.got_subcommand(sweep)) {
      report(flags,
             lightstore::run_sweep(config, out_dir, flags.force, flags.threads, base_dir));
    } else if (app.got_subcommand(slowlight)) {
      report(flags, lightstore::run_energy_audit(config, out_dir, flags.force, base_dir));
    }
    return 0;
  } catch (const lightstore::SimulationError& e) {
    std::cerr << "simulation refused: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
