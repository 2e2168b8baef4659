#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duadmm/data.hpp"
#include "duadmm/metrics.hpp"
#include "duadmm/model.hpp"
#include "duadmm/solvers.hpp"

namespace duadmm::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_parse = 3,
  exit_divergence = 4,
  exit_io = 5,
  exit_dimension = 6,
};

/// Maps the library error hierarchy onto process exit codes.
int exit_code_for(const std::exception& e);

struct ExperimentConfig {
  std::optional<std::filesystem::path> image_path;
  std::optional<GridShape> phantom;
  MaskSpec mask;
  NoiseSpec noise;
  SolverConfig solver;
  SolverKind kind = SolverKind::sgs_admm;
  std::filesystem::path out_dir = "out";
  bool write_trace = true;
  bool write_mask = true;
  bool write_kspace = true;

  /// Exactly one image source; solver parameters in range.
  void validate() const;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Applies one `key=value` setting; keys are the long flag names without dashes.
/// Throws ParameterError for unknown keys or malformed values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
void apply_settings(ExperimentConfig& config, const Settings& settings);

/// Parses `key=value` lines; '#' starts a comment, blank lines are ignored.
Settings parse_settings(const std::string& text);

/// "256x256" -> {256, 256}.
GridShape parse_grid(const std::string& text);

/// Ground truth of a simulation: loaded image or phantom, normalized to [0, 1].
Image load_truth(const ExperimentConfig& config);

/// b = K u plus complex Gaussian noise.
KSpaceData simulate_kspace(const Image& truth, const SamplingMask& mask, const NoiseSpec& noise);

struct SimulationResult {
  Image truth;
  KSpaceData kspace;
  SolveReport report;
  QualityReport quality;
};

/// Simulation only; no files are written.
SimulationResult simulate(const ExperimentConfig& config);

/// Simulation plus artifacts in `out_dir`: recon.pgm, trace.csv, mask.pgm, kspace.dksp, summary.json.
SimulationResult cmd_simulate(const ExperimentConfig& config);

/// Reconstruction from a k-space file (and optionally a separate mask image that
/// replaces the embedded mask). Stops on RelErr or the iteration cap only.
SolveReport cmd_reconstruct(const std::filesystem::path& kspace_file,
                            const std::optional<std::filesystem::path>& mask_file, const ExperimentConfig& config);

enum class TableShape { iterations, quality };  // Iter/PSNR/CPU or RLNE/PSNR/RelErr

struct BenchmarkRow {
  std::string name;
  ExperimentConfig config;
  bool ok = false;
  bool converged = false;
  std::string error;
  int iterations = 0;
  double psnr = 0.0;
  double rlne = 0.0;
  double relerr = 0.0;
  double cpu_s = 0.0;
};

/// One tuple per non-empty line of whitespace-separated key=value tokens
/// (plus an optional name=...), on top of `defaults`.
std::vector<BenchmarkRow> parse_suite(const std::string& text, const ExperimentConfig& defaults);

/// Runs every tuple; failures are recorded per row. Parallel across tuples,
/// capped by DUADMM_THREADS when set.
void run_suite(std::vector<BenchmarkRow>& rows);

/// CSV table; cells of non-converged or failed runs hold "-".
std::string format_table(const std::vector<BenchmarkRow>& rows, TableShape shape);

/// Parses, runs and writes `out_dir/table.csv`. Returns the rows for inspection.
std::vector<BenchmarkRow> cmd_benchmark(const std::filesystem::path& suite_file, TableShape shape,
                                        const ExperimentConfig& defaults);

}  // namespace duadmm::cli
