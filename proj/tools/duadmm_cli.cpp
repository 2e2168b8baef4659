#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "duadmm/experiment.hpp"
#include "duadmm/io.hpp"

namespace {

using duadmm::cli::ExperimentConfig;

// Long flag names double as config-file keys.
const char* const kValueFlags[] = {
    "image", "phantom", "mask",   "rate",       "noise",         "solver",   "mu",       "lambda",
    "sigma0", "tau",    "rho",    "tol-relerr", "tol-rlne",      "max-iter", "seed",     "step4-anchor",
    "rlne-denominator", "magnitude-metrics",    "normalized-eta-d", "psnr-scale", "refresh", "out", "trace",
};

struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
};

void add_experiment_flags(CLI::App* app, FlagSet& flags) {
  for (const char* name : kValueFlags) {
    const std::string key = name;
    flags.options[key] = app->add_option("--" + key, flags.values[key]);
  }
  flags.options["image"]->description("grayscale PGM ground truth (simulate, benchmark)");
  flags.options["phantom"]->description("Shepp-Logan phantom size, e.g. 256x256");
  flags.options["mask"]->description("radial | cartesian | random2d");
  flags.options["rate"]->description("target sampling rate in (0, 1]");
  flags.options["noise"]->description("complex Gaussian noise level per component");
  flags.options["solver"]->description("sgs-admm | sgs-admm-g");
  flags.options["tol-relerr"]->description("stop when the KKT RelErr falls below this (<= 0 disables)");
  flags.options["tol-rlne"]->description("stop when RLNE against ground truth falls below this (<= 0 disables)");
  flags.options["seed"]->description("seed for random masks and noise");
  flags.options["step4-anchor"]->description("derived | printed");
  flags.options["out"]->description("output directory");
  flags.options["image"]->excludes(flags.options["phantom"]);
  app->add_option("--config", flags.config_file, "key=value settings file; command-line flags override it");
}

ExperimentConfig build_config(const FlagSet& flags, bool default_phantom) {
  ExperimentConfig cfg;
  if (default_phantom) cfg.phantom = duadmm::GridShape{256, 256};
  if (!flags.config_file.empty()) {
    const auto bytes = duadmm::io::read_file(flags.config_file);
    duadmm::cli::apply_settings(cfg, duadmm::cli::parse_settings(std::string(bytes.begin(), bytes.end())));
  }
  for (const char* name : kValueFlags) {
    if (flags.options.at(name)->count() > 0) duadmm::cli::apply_setting(cfg, name, flags.values.at(name));
  }
  return cfg;
}

void print_summary(const duadmm::SolveReport& r, const duadmm::QualityReport* q) {
  std::printf("iterations %zu (%s), RelErr %.3e, time %.2f s", r.trace.size(), duadmm::to_string(r.reason).c_str(),
              r.residuals.relerr, r.wall_time_s);
  if (q) std::printf(", RLNE %.4e, PSNR %.2f dB", q->rlne, q->psnr_log);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed-sensing MRI reconstruction with TV + wavelet regularization (dual sGS-ADMM)"};
  app.require_subcommand(1);

  FlagSet sim_flags, rec_flags, bench_flags;
  CLI::App* sim = app.add_subcommand("simulate", "reconstruct from simulated undersampled k-space");
  add_experiment_flags(sim, sim_flags);

  CLI::App* rec = app.add_subcommand("reconstruct", "reconstruct from a k-space file (no ground truth)");
  std::string kspace_file, mask_file;
  rec->add_option("--kspace", kspace_file, "DKSP k-space file")->required();
  rec->add_option("--mask-file", mask_file, "PGM mask replacing the embedded one (nonzero = sampled)");
  add_experiment_flags(rec, rec_flags);

  CLI::App* bench = app.add_subcommand("benchmark", "run a suite of simulations and tabulate them");
  std::string suite_file, table = "iterations";
  bench->add_option("--suite", suite_file, "one run per line of key=value tokens")->required();
  bench->add_option("--table", table, "iterations (Iter, PSNR, CPU) | quality (RLNE, PSNR, RelErr)")
      ->check(CLI::IsMember({"iterations", "quality"}));
  add_experiment_flags(bench, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return duadmm::cli::exit_config;
  }

  try {
    if (*sim) {
      const ExperimentConfig cfg = build_config(sim_flags, sim_flags.options["image"]->count() == 0);
      const auto res = duadmm::cli::cmd_simulate(cfg);
      print_summary(res.report, &res.quality);
    } else if (*rec) {
      ExperimentConfig cfg = build_config(rec_flags, false);
      std::optional<std::filesystem::path> mask;
      if (!mask_file.empty()) mask = mask_file;
      const auto report = duadmm::cli::cmd_reconstruct(kspace_file, mask, cfg);
      print_summary(report, nullptr);
    } else if (*bench) {
      const ExperimentConfig cfg = build_config(bench_flags, bench_flags.options["image"]->count() == 0);
      const auto shape =
          table == "quality" ? duadmm::cli::TableShape::quality : duadmm::cli::TableShape::iterations;
      const auto rows = duadmm::cli::cmd_benchmark(suite_file, shape, cfg);
      std::size_t failed = 0;
      for (const auto& r : rows) {
        if (!r.ok) {
          ++failed;
          std::fprintf(stderr, "%s: %s\n", r.name.c_str(), r.error.c_str());
        }
      }
      std::printf("%zu runs, %zu failed; table written to %s\n", rows.size(), failed,
                  (cfg.out_dir / "table.csv").string().c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return duadmm::cli::exit_code_for(e);
  }
  return duadmm::cli::exit_ok;
}
