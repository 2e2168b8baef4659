#include "duadmm/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "duadmm/io.hpp"
#include "duadmm/operators.hpp"

namespace duadmm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw ParameterError("'" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw ParameterError("'" + key + "' expects an unsigned integer, got '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const std::uint64_t v = to_u64(key, value);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ParameterError("'" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ParameterError("'" + key + "' expects a boolean, got '" + value + "'");
}

// Noise is drawn from a stream independent of the mask stream.
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ULL;

std::string number_cell(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string sci_cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double active_tolerance(const SolverConfig& s) { return s.tol_rlne > 0.0 ? s.tol_rlne : s.tol_relerr; }

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return exit_parse;
  if (dynamic_cast<const DivergenceError*>(&e)) return exit_divergence;
  if (dynamic_cast<const IoError*>(&e)) return exit_io;
  if (dynamic_cast<const DimensionError*>(&e)) return exit_dimension;
  return exit_config;
}

void ExperimentConfig::validate() const {
  if (image_path.has_value() == phantom.has_value()) {
    throw ParameterError("exactly one image source (--image or --phantom) is required");
  }
  if (phantom && (phantom->rows < 16 || phantom->cols < 16)) {
    throw ParameterError("phantom grid must be at least 16x16");
  }
  if (!(mask.target_rate > 0.0 && mask.target_rate <= 1.0)) throw ParameterError("rate must lie in (0, 1]");
  if (!(noise.stddev >= 0.0)) throw ParameterError("noise level must be nonnegative");
  solver.validate();
}

GridShape parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ParameterError("grid '" + text + "' must look like 256x256");
  const std::string r = text.substr(0, x), c = text.substr(x + 1);
  return GridShape{static_cast<std::size_t>(to_u64("phantom", r)), static_cast<std::size_t>(to_u64("phantom", c))};
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  SolverConfig& s = cfg.solver;
  if (key == "image") {
    cfg.image_path = value;
    cfg.phantom.reset();
  } else if (key == "phantom") {
    cfg.phantom = parse_grid(value);
    cfg.image_path.reset();
  } else if (key == "mask") {
    cfg.mask.kind = parse_mask_kind(value);
  } else if (key == "rate") {
    cfg.mask.target_rate = to_double(key, value);
  } else if (key == "noise") {
    cfg.noise.stddev = to_double(key, value);
  } else if (key == "solver") {
    cfg.kind = parse_solver_kind(value);
  } else if (key == "mu") {
    s.mu = to_double(key, value);
  } else if (key == "lambda") {
    s.lambda_detail = to_double(key, value);
  } else if (key == "sigma0") {
    s.sigma0 = to_double(key, value);
  } else if (key == "tau") {
    s.tau = to_double(key, value);
  } else if (key == "rho") {
    s.rho = to_double(key, value);
  } else if (key == "tol-relerr") {
    s.tol_relerr = to_double(key, value);
  } else if (key == "tol-rlne") {
    s.tol_rlne = to_double(key, value);
  } else if (key == "max-iter") {
    s.max_iter = to_int(key, value);
  } else if (key == "seed") {
    cfg.mask.seed = to_u64(key, value);
    cfg.noise.seed = cfg.mask.seed ^ kNoiseStream;
  } else if (key == "step4-anchor") {
    if (value == "derived") {
      s.step4_anchor = Step4Anchor::derived;
    } else if (value == "printed") {
      s.step4_anchor = Step4Anchor::printed;
    } else {
      throw ParameterError("step4-anchor must be derived or printed");
    }
  } else if (key == "rlne-denominator") {
    if (value == "reconstruction") {
      s.rlne_denominator = RlneDenominator::reconstruction;
    } else if (value == "truth") {
      s.rlne_denominator = RlneDenominator::truth;
    } else {
      throw ParameterError("rlne-denominator must be reconstruction or truth");
    }
  } else if (key == "magnitude-metrics") {
    s.magnitude_metrics = to_bool(key, value);
  } else if (key == "normalized-eta-d") {
    s.normalized_eta_d = to_bool(key, value);
  } else if (key == "psnr-scale") {
    s.psnr_scale = to_double(key, value);
  } else if (key == "refresh") {
    s.refresh_interval = to_int(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "trace") {
    cfg.write_trace = to_bool(key, value);
  } else {
    throw ParameterError("unknown setting '" + key + "'");
  }
}

void apply_settings(ExperimentConfig& config, const Settings& settings) {
  for (const auto& [k, v] : settings) apply_setting(config, k, v);
}

Settings parse_settings(const std::string& text) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

Image load_truth(const ExperimentConfig& config) {
  if (config.image_path) return normalize_unit(io::load_image(*config.image_path));
  if (!config.phantom) throw ParameterError("no image source configured");
  return normalize_unit(shepp_logan(config.phantom->rows, config.phantom->cols));
}

KSpaceData simulate_kspace(const Image& truth, const SamplingMask& mask, const NoiseSpec& noise) {
  if (truth.shape() != mask.shape()) throw DimensionError("image and mask shapes differ");
  const OperatorEnsemble ops(mask);
  KSpaceData clean{mask, ops.apply_fourier(truth.vec())};
  return add_noise(clean, noise);
}

SimulationResult simulate(const ExperimentConfig& config) {
  config.validate();
  SimulationResult out;
  out.truth = load_truth(config);
  MaskSpec ms = config.mask;
  ms.grid = out.truth.shape();
  const SamplingMask mask = make_mask(ms);
  out.kspace = simulate_kspace(out.truth, mask, config.noise);

  const OperatorEnsemble ops(mask, config.solver.lambda_detail);
  const Problem problem{ops, out.kspace.samples, &out.truth};
  out.report = run(config.kind, problem, config.solver);

  MetricOptions mopts;
  mopts.denominator = config.solver.rlne_denominator;
  mopts.magnitude = config.solver.magnitude_metrics;
  mopts.intensity_scale = config.solver.psnr_scale;
  out.quality = quality(out.truth, out.report.reconstruction, mopts);
  return out;
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

RVector mask_pixels(const SamplingMask& mask) {
  RVector px(mask.bits().size());
  std::transform(mask.bits().begin(), mask.bits().end(), px.begin(), [](std::uint8_t b) { return b ? 1.0 : 0.0; });
  return px;
}

void write_reconstruction(const ExperimentConfig& config, const SolveReport& report) {
  io::write_pgm(config.out_dir / "recon.pgm", report.reconstruction.shape(),
                report.reconstruction.magnitude_row_major(), 16);
  if (config.write_trace) io::write_file(config.out_dir / "trace.csv", io::format_trace(report.trace));
}

nlohmann::json solver_summary(const ExperimentConfig& config, const SolveReport& report, std::size_t p,
                              GridShape grid) {
  nlohmann::json j;
  j["solver"] = to_string(config.kind);
  j["rows"] = grid.rows;
  j["cols"] = grid.cols;
  j["samples"] = p;
  j["sampling_rate"] = static_cast<double>(p) / static_cast<double>(grid.size());
  j["iterations"] = report.trace.size();
  j["termination"] = to_string(report.reason);
  j["relerr"] = report.residuals.relerr;
  j["eta_p"] = report.residuals.eta_p;
  j["eta_d"] = report.residuals.eta_d;
  j["wall_time_s"] = report.wall_time_s;
  return j;
}

}  // namespace

SimulationResult cmd_simulate(const ExperimentConfig& config) {
  SimulationResult res = simulate(config);
  ensure_dir(config.out_dir);
  write_reconstruction(config, res.report);
  if (config.write_mask) {
    io::write_pgm(config.out_dir / "mask.pgm", res.kspace.mask.shape(), mask_pixels(res.kspace.mask), 8);
  }
  if (config.write_kspace) io::write_kspace(config.out_dir / "kspace.dksp", res.kspace);

  nlohmann::json j = solver_summary(config, res.report, res.kspace.mask.count(), res.truth.shape());
  j["mask"] = to_string(config.mask.kind);
  j["noise"] = config.noise.stddev;
  j["seed"] = config.mask.seed;
  // JSON has no infinity; exact recovery is reported as null.
  auto put = [&](const char* key, double v) { j[key] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  put("rlne", res.quality.rlne);
  put("psnr", res.quality.psnr_log);
  put("psnr_standard", res.quality.psnr_standard);
  io::write_file(config.out_dir / "summary.json", j.dump(2) + "\n");
  return res;
}

SolveReport cmd_reconstruct(const std::filesystem::path& kspace_file,
                            const std::optional<std::filesystem::path>& mask_file, const ExperimentConfig& config) {
  config.solver.validate();
  KSpaceData data = io::read_kspace(kspace_file);
  if (mask_file) {
    const io::GrayImage g = io::read_pgm(*mask_file);
    if (!(g.shape == data.mask.shape())) {
      throw DimensionError("mask image is " + std::to_string(g.shape.rows) + "x" + std::to_string(g.shape.cols) +
                           " but the k-space grid is " + std::to_string(data.mask.shape().rows) + "x" +
                           std::to_string(data.mask.shape().cols));
    }
    std::vector<std::uint8_t> bits(g.pixels.size());
    std::transform(g.pixels.begin(), g.pixels.end(), bits.begin(), [](double v) { return v > 0.0 ? 1 : 0; });
    SamplingMask mask(g.shape, std::move(bits));
    if (mask.count() != data.samples.size()) {
      throw DimensionError("mask selects " + std::to_string(mask.count()) + " samples but the k-space file holds " +
                           std::to_string(data.samples.size()));
    }
    data.mask = std::move(mask);
  }
  SolverConfig sc = config.solver;
  sc.tol_rlne = 0.0;
  const OperatorEnsemble ops(data.mask, sc.lambda_detail);
  SolveReport report = run(config.kind, Problem{ops, data.samples, nullptr}, sc);

  ensure_dir(config.out_dir);
  write_reconstruction(config, report);
  const nlohmann::json j = solver_summary(config, report, data.samples.size(), data.mask.shape());
  io::write_file(config.out_dir / "summary.json", j.dump(2) + "\n");
  return report;
}

std::vector<BenchmarkRow> parse_suite(const std::string& text, const ExperimentConfig& defaults) {
  std::vector<BenchmarkRow> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    BenchmarkRow row;
    row.config = defaults;
    bool any = false;
    while (tokens >> tok) {
      any = true;
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        throw ParameterError("suite line " + std::to_string(lineno) + ": token '" + tok + "' is not key=value");
      }
      const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "name") {
        row.name = value;
        continue;
      }
      try {
        apply_setting(row.config, key, value);
      } catch (const ParameterError& e) {
        throw ParameterError("suite line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (!any) continue;
    if (row.name.empty()) row.name = "run" + std::to_string(rows.size() + 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

void run_suite(std::vector<BenchmarkRow>& rows) {
  const long n = static_cast<long>(rows.size());
  if (n == 0) return;
  int threads = omp_get_max_threads();
  if (const char* cap = std::getenv("DUADMM_THREADS")) {
    const int c = std::atoi(cap);
    if (c > 0) threads = std::min(threads, c);
  }
  threads = static_cast<int>(std::min<long>(threads, n));

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long k = 0; k < n; ++k) {
    BenchmarkRow& row = rows[static_cast<std::size_t>(k)];
    try {
      const SimulationResult res = simulate(row.config);
      const SolverConfig& s = row.config.solver;
      row.ok = true;
      row.iterations = static_cast<int>(res.report.trace.size());
      row.converged = res.report.reason != Termination::max_iterations ||
                      (s.tol_rlne <= 0.0 && s.tol_relerr <= 0.0);
      row.psnr = res.quality.psnr_log;
      row.rlne = res.quality.rlne;
      row.relerr = res.report.residuals.relerr;
      row.cpu_s = res.report.wall_time_s;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  }
}

std::string format_table(const std::vector<BenchmarkRow>& rows, TableShape shape) {
  std::string out = "name,solver,mask,rate,noise,tol,";
  out += shape == TableShape::iterations ? "Iter,PSNR,CPU,status\n" : "RLNE,PSNR,RelErr,status\n";
  for (const BenchmarkRow& r : rows) {
    const ExperimentConfig& c = r.config;
    out += csv_escape(r.name) + ',' + to_string(c.kind) + ',' + to_string(c.mask.kind) + ',' +
           number_cell(c.mask.target_rate, 4) + ',' + number_cell(c.noise.stddev, 4) + ',' +
           sci_cell(active_tolerance(c.solver)) + ',';
    const bool filled = r.ok && (shape == TableShape::quality || r.converged);
    if (!filled) {
      out += "-,-,-,";
    } else if (shape == TableShape::iterations) {
      out += std::to_string(r.iterations) + ',' + number_cell(r.psnr, 1) + ',' + number_cell(r.cpu_s, 2) + ',';
    } else {
      out += number_cell(r.rlne, 4) + ',' + number_cell(r.psnr, 1) + ',' + sci_cell(r.relerr) + ',';
    }
    out += r.ok ? (r.converged ? "converged" : "not-converged") : csv_escape("error: " + r.error);
    out += '\n';
  }
  return out;
}

std::vector<BenchmarkRow> cmd_benchmark(const std::filesystem::path& suite_file, TableShape shape,
                                        const ExperimentConfig& defaults) {
  const auto bytes = io::read_file(suite_file);
  std::vector<BenchmarkRow> rows = parse_suite(std::string(bytes.begin(), bytes.end()), defaults);
  run_suite(rows);
  ensure_dir(defaults.out_dir);
  io::write_file(defaults.out_dir / "table.csv", format_table(rows, shape));
  return rows;
}

}  // namespace duadmm::cli
