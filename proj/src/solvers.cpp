#include "duadmm/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "duadmm/metrics.hpp"

namespace duadmm {

std::string to_string(SolverKind kind) {
  return kind == SolverKind::sgs_admm ? "sgs-admm" : "sgs-admm-g";
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "sgs-admm") return SolverKind::sgs_admm;
  if (name == "sgs-admm-g") return SolverKind::sgs_admm_g;
  throw ParameterError("unknown solver '" + name + "' (expected sgs-admm or sgs-admm-g)");
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::relerr_tolerance: return "relerr-tolerance";
    case Termination::rlne_tolerance: return "rlne-tolerance";
    case Termination::max_iterations: break;
  }
  return "max-iterations";
}

PenaltyState update_sigma(PenaltyState penalty, double eta_p, double eta_d, const SigmaSchedule& s) {
  if (eta_p < 0.0 || eta_d < 0.0) throw ParameterError("residuals must be nonnegative");
  double ratio;
  if (eta_d == 0.0) {
    if (eta_p == 0.0) return penalty;
    ratio = std::numeric_limits<double>::infinity();
  } else {
    ratio = eta_p / eta_d;
  }
  if (ratio <= s.low_ratio) {
    penalty.sigma = std::min(s.grow * penalty.sigma, s.cap);
  } else if (ratio >= s.high_ratio) {
    penalty.sigma = std::max(s.shrink * penalty.sigma, s.floor);
  }
  return penalty;
}

KktResiduals kkt_residuals(const DualState& state, const OperatorEnsemble& ops, std::span<const Complex> b,
                           const SolverConfig& config, std::optional<std::span<const Complex>> dual_residual) {
  require_length(state.x1, 2 * ops.d(), "kkt x1");
  require_length(state.x2, ops.q(), "kkt x2");
  require_length(state.x3, ops.p(), "kkt x3");
  require_length(state.u, ops.d(), "kkt u");
  require_length(b, ops.p(), "kkt b");
  const auto& k = ops.kernels();
  KktResiduals r;

  const double b_norm = std::sqrt(k.squared_norm(b));
  const CVector ku = ops.apply_fourier(state.u);
  r.eta_p = std::sqrt(k.squared_distance(ku, b)) / (1.0 + b_norm);

  if (dual_residual) {
    require_length(*dual_residual, ops.d(), "kkt dual residual");
    r.eta_d = std::sqrt(k.squared_norm(*dual_residual));
  } else {
    r.eta_d = std::sqrt(k.squared_norm(ops.dual_residual(state)));
  }
  if (config.normalized_eta_d) r.eta_d /= 1.0 + b_norm;

  {
    CVector bu = ops.apply_grad(state.u);
    CVector shifted(bu.size());
    k.axpby(1.0, state.x1, 1.0, bu, shifted);
    k.project_group_l2(shifted, config.mu, shifted);
    r.eta_1 = std::sqrt(k.squared_distance(state.x1, shifted)) /
              (1.0 + std::sqrt(k.squared_norm(state.x1)) + std::sqrt(k.squared_norm(bu)));
  }
  {
    CVector wu = ops.apply_wavelet(state.u);
    CVector shifted(wu.size());
    k.axpby(1.0, state.x2, 1.0, wu, shifted);
    k.project_box_linf(shifted, ops.lambda(), shifted);
    r.eta_2 = std::sqrt(k.squared_distance(state.x2, shifted)) /
              (1.0 + std::sqrt(k.squared_norm(state.x2)) + std::sqrt(k.squared_norm(wu)));
  }
  r.relerr = std::max({r.eta_p, r.eta_d, r.eta_1, r.eta_2});
  return r;
}

SolverWorkspace::SolverWorkspace(const OperatorEnsemble& ops)
    : bt_x1(ops.d()),
      wt_x2(ops.d()),
      kt_x3(ops.d()),
      residual(ops.d()),
      tmp_d(ops.d()),
      tmp_d2(ops.d()),
      tmp_d3(ops.d()),
      tmp_2d(2 * ops.d()),
      tmp_4d(ops.q()),
      tmp_p(ops.p()),
      tmp_p2(ops.p()) {}

void SolverWorkspace::refresh(const DualState& state, const OperatorEnsemble& ops) {
  ops.adjoint_grad(state.x1, bt_x1);
  ops.adjoint_wavelet(state.x2, wt_x2);
  ops.adjoint_fourier(state.x3, kt_x3);
}

namespace {

void check_dims(const DualState& s, const OperatorEnsemble& ops, std::span<const Complex> b) {
  require_length(s.x1, 2 * ops.d(), "state x1");
  require_length(s.x2, ops.q(), "state x2");
  require_length(s.x3, ops.p(), "state x3");
  require_length(s.u, ops.d(), "state u");
  require_length(b, ops.p(), "k-space data");
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive and finite");
}

// x3_next = x3_prox - (1/tau3) K(v) - b/(tau3 sigma), the closed-form x3 update.
void x3_update(const OperatorEnsemble& ops, std::span<const Complex> x3_prox, std::span<const Complex> v,
               std::span<const Complex> b, double tau3, double sigma, std::span<Complex> kv,
               std::span<Complex> out) {
  ops.apply_fourier(v, kv);
  ops.kernels().lincomb3(1.0, x3_prox, -1.0 / tau3, kv, -1.0 / (tau3 * sigma), b, out);
}

}  // namespace

void sgs_admm_step(DualState& s, SolverWorkspace& ws, const SolverConfig& cfg, const OperatorEnsemble& ops,
                   std::span<const Complex> b, double sigma) {
  check_dims(s, ops, b);
  check_sigma(sigma);
  const auto& k = ops.kernels();
  const double inv_sigma = 1.0 / sigma;
  CVector& v = ws.tmp_d;
  CVector& kt_x3_half = ws.tmp_d2;
  CVector& x3_half = ws.tmp_p;

  // Step 1: x1.
  k.sum3_plus_scaled(ws.bt_x1, ws.wt_x2, ws.kt_x3, -inv_sigma, s.u, v);
  ops.apply_grad(v, ws.tmp_2d);
  k.axpby(1.0, s.x1, -1.0 / cfg.tau1, ws.tmp_2d, s.x1);
  k.project_group_l2(s.x1, cfg.mu, s.x1);
  ops.adjoint_grad(s.x1, ws.bt_x1);

  // Step 2: half step on x3, anchored at x3^k.
  k.sum3_plus_scaled(ws.bt_x1, ws.wt_x2, ws.kt_x3, -inv_sigma, s.u, v);
  CVector& kv = ws.tmp_p2;
  x3_update(ops, s.x3, v, b, cfg.tau3, sigma, kv, x3_half);
  ops.adjoint_fourier(x3_half, kt_x3_half);

  // Step 3: x2.
  k.sum3_plus_scaled(ws.bt_x1, ws.wt_x2, kt_x3_half, -inv_sigma, s.u, v);
  ops.apply_wavelet(v, ws.tmp_4d);
  k.axpby(1.0, s.x2, -1.0 / cfg.tau2, ws.tmp_4d, s.x2);
  k.project_box_linf(s.x2, ops.lambda(), s.x2);
  ops.adjoint_wavelet(s.x2, ws.wt_x2);

  // Step 4: x3 from x3^k; the residual uses K^T x3^k (derived) or K^T x3^{k+1/2} (printed).
  const CVector& anchor = cfg.step4_anchor == Step4Anchor::derived ? ws.kt_x3 : kt_x3_half;
  k.sum3_plus_scaled(ws.bt_x1, ws.wt_x2, anchor, -inv_sigma, s.u, v);
  x3_update(ops, s.x3, v, b, cfg.tau3, sigma, kv, s.x3);
  ops.adjoint_fourier(s.x3, ws.kt_x3);

  // Step 5: multiplier.
  k.sum3_plus_scaled(ws.bt_x1, ws.wt_x2, ws.kt_x3, 0.0, s.u, ws.residual);
  k.axpby(1.0, s.u, -cfg.tau * sigma, ws.residual, s.u);
}

DualState sgs_admm_iterate(const DualState& state, const SolverConfig& config, const OperatorEnsemble& ops,
                           std::span<const Complex> b, double sigma) {
  check_dims(state, ops, b);
  DualState next = state;
  SolverWorkspace ws(ops);
  ws.refresh(next, ops);
  sgs_admm_step(next, ws, config, ops, b, sigma);
  if (!std::isfinite(ops.kernels().squared_norm(next.u) + ops.kernels().squared_norm(ws.residual))) {
    throw DivergenceError("sGS-ADMM iterate is not finite");
  }
  return next;
}

void sgs_admm_g_step(DualState& t, DualState& s, SolverWorkspace& ws, const SolverConfig& cfg,
                     const OperatorEnsemble& ops, std::span<const Complex> b, double sigma) {
  check_dims(t, ops, b);
  check_sigma(sigma);
  if (!(cfg.rho > 0.0 && cfg.rho < 2.0)) throw ParameterError("rho must lie in (0, 2)");
  if (s.x1.size() != t.x1.size() || s.x2.size() != t.x2.size() || s.x3.size() != t.x3.size() ||
      s.u.size() != t.u.size()) {
    s = DualState::zeros(ops.d(), ops.p());
  }
  const auto& k = ops.kernels();
  const double inv_sigma = 1.0 / sigma;
  CVector& v = ws.tmp_d;
  CVector& bt_x1_new = ws.tmp_d2;
  CVector& kt_x3_half = ws.tmp_d3;
  CVector& x3_half = ws.tmp_p;
  CVector& kv = ws.tmp_p2;

  // Step 1: x1 from the relaxed iterate.
  k.sum3_plus_scaled(ws.bt_x1, ws.wt_x2, ws.kt_x3, -inv_sigma, t.u, v);
  ops.apply_grad(v, ws.tmp_2d);
  k.axpby(1.0, t.x1, -1.0 / cfg.tau1, ws.tmp_2d, s.x1);
  k.project_group_l2(s.x1, cfg.mu, s.x1);
  ops.adjoint_grad(s.x1, bt_x1_new);

  // Step 2: multiplier, before the (x2, x3) block.
  k.sum3_plus_scaled(bt_x1_new, ws.wt_x2, ws.kt_x3, 0.0, t.u, v);
  k.axpby(1.0, t.u, -sigma, v, s.u);

  // Step 3: half step on x3.
  k.sum3_plus_scaled(bt_x1_new, ws.wt_x2, ws.kt_x3, -inv_sigma, s.u, v);
  x3_update(ops, t.x3, v, b, cfg.tau3, sigma, kv, x3_half);
  ops.adjoint_fourier(x3_half, kt_x3_half);

  // Step 4: x2.
  k.sum3_plus_scaled(bt_x1_new, ws.wt_x2, kt_x3_half, -inv_sigma, s.u, v);
  ops.apply_wavelet(v, ws.tmp_4d);
  k.axpby(1.0, t.x2, -1.0 / cfg.tau2, ws.tmp_4d, s.x2);
  k.project_box_linf(s.x2, ops.lambda(), s.x2);
  // tmp_d3 is free again after step 4.
  CVector& wt_x2_new = ws.tmp_d3;
  ops.adjoint_wavelet(s.x2, wt_x2_new);

  // Step 5: x3.
  k.sum3_plus_scaled(bt_x1_new, wt_x2_new, ws.kt_x3, -inv_sigma, s.u, v);
  x3_update(ops, t.x3, v, b, cfg.tau3, sigma, kv, s.x3);
  ops.adjoint_fourier(s.x3, ws.residual);  // K^T x3^{k+1} for the moment

  // Step 6: relaxation of all four blocks, and of the cached adjoints with them.
  const double rho = cfg.rho, keep = 1.0 - cfg.rho;
  k.axpby(keep, t.x1, rho, s.x1, t.x1);
  k.axpby(keep, t.x2, rho, s.x2, t.x2);
  k.axpby(keep, t.x3, rho, s.x3, t.x3);
  k.axpby(keep, t.u, rho, s.u, t.u);
  k.axpby(keep, ws.bt_x1, rho, bt_x1_new, ws.bt_x1);
  k.axpby(keep, ws.wt_x2, rho, wt_x2_new, ws.wt_x2);
  k.axpby(keep, ws.kt_x3, rho, ws.residual, ws.kt_x3);

  k.sum3_plus_scaled(bt_x1_new, wt_x2_new, ws.residual, 0.0, s.u, ws.residual);
}

RelaxedPair sgs_admm_g_iterate(const DualState& tilde, const SolverConfig& config, const OperatorEnsemble& ops,
                               std::span<const Complex> b, double sigma) {
  check_dims(tilde, ops, b);
  RelaxedPair out{DualState::zeros(ops.d(), ops.p()), tilde};
  SolverWorkspace ws(ops);
  ws.refresh(out.tilde, ops);
  sgs_admm_g_step(out.tilde, out.state, ws, config, ops, b, sigma);
  if (!std::isfinite(ops.kernels().squared_norm(out.state.u) + ops.kernels().squared_norm(ws.residual))) {
    throw DivergenceError("sGS-ADMM_G iterate is not finite");
  }
  return out;
}

SolveReport run(SolverKind kind, const Problem& problem, const SolverConfig& config) {
  config.validate();
  const OperatorEnsemble& ops = problem.ops;
  require_length(problem.b, ops.p(), "k-space data");
  if (problem.truth && problem.truth->shape() != ops.shape()) {
    throw DimensionError("ground truth shape does not match the operators");
  }
  using Clock = std::chrono::steady_clock;

  SolveReport report;
  report.state = DualState::zeros(ops.d(), ops.p());
  DualState tilde = report.state;
  SolverWorkspace ws(ops);
  PenaltyState penalty{config.sigma0};
  MetricOptions mopts;
  mopts.denominator = config.rlne_denominator;
  mopts.magnitude = config.magnitude_metrics;
  mopts.intensity_scale = config.psnr_scale;
  double elapsed = 0.0;

  for (int it = 1; it <= config.max_iter; ++it) {
    const auto t0 = Clock::now();
    const DualState& base = kind == SolverKind::sgs_admm ? report.state : tilde;
    if (it % config.refresh_interval == 1 || config.refresh_interval == 1) ws.refresh(base, ops);

    if (kind == SolverKind::sgs_admm) {
      sgs_admm_step(report.state, ws, config, ops, problem.b, penalty.sigma);
    } else {
      sgs_admm_g_step(tilde, report.state, ws, config, ops, problem.b, penalty.sigma);
    }
    const KktResiduals res =
        kkt_residuals(report.state, ops, problem.b, config, std::span<const Complex>(ws.residual));
    if (!std::isfinite(res.relerr)) {
      throw DivergenceError(to_string(kind) + " diverged at iteration " + std::to_string(it));
    }

    TraceRow row;
    row.iter = it;
    row.sigma = penalty.sigma;
    row.eta_p = res.eta_p;
    row.eta_d = res.eta_d;
    row.eta_1 = res.eta_1;
    row.eta_2 = res.eta_2;
    row.relerr = res.relerr;
    if (problem.truth) {
      std::span<const Complex> truth(problem.truth->vec());
      try {
        row.rlne = rlne(truth, report.state.u, mopts);
      } catch (const UndefinedMetricError&) {
        // zero reconstruction with the reconstruction-norm denominator: leave the field empty
      }
      row.psnr = psnr(truth, report.state.u, mopts);
    }
    penalty = update_sigma(penalty, res.eta_p, res.eta_d, config.schedule);
    elapsed += std::chrono::duration<double>(Clock::now() - t0).count();
    row.time_s = elapsed;
    report.trace.push_back(row);
    report.residuals = res;

    if (config.tol_relerr > 0.0 && res.relerr <= config.tol_relerr) {
      report.reason = Termination::relerr_tolerance;
      break;
    }
    if (row.rlne && config.tol_rlne > 0.0 && *row.rlne <= config.tol_rlne) {
      report.reason = Termination::rlne_tolerance;
      break;
    }
  }
  if (report.trace.empty()) {
    report.residuals = kkt_residuals(report.state, ops, problem.b, config);
  }
  report.wall_time_s = elapsed;
  report.reconstruction = Image(ops.shape(), report.state.u);
  return report;
}

}  // namespace duadmm
