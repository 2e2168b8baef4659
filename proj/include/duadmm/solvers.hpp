#pragma once

#include <optional>
#include <span>
#include <string>

#include "duadmm/model.hpp"
#include "duadmm/operators.hpp"

namespace duadmm {

enum class SolverKind { sgs_admm, sgs_admm_g };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& name);

struct PenaltyState {
  double sigma = 5e-3;
};

/// Balances primal and dual infeasibility: grows sigma when eta_P/eta_D <= low_ratio,
/// shrinks it when the ratio >= high_ratio. eta_D == 0 reads as an infinite ratio
/// unless eta_P is also zero, in which case sigma is kept.
PenaltyState update_sigma(PenaltyState penalty, double eta_p, double eta_d, const SigmaSchedule& schedule = {});

struct KktResiduals {
  double eta_p = 0.0;
  double eta_d = 0.0;
  double eta_1 = 0.0;
  double eta_2 = 0.0;
  double relerr = 0.0;
};

/// Relative KKT residuals of the dual model at `state`. `dual_residual`, when
/// given, must equal B^T x1 + W^T x2 + K^T x3 and saves three transforms.
KktResiduals kkt_residuals(const DualState& state, const OperatorEnsemble& ops, std::span<const Complex> b,
                           const SolverConfig& config = {},
                           std::optional<std::span<const Complex>> dual_residual = std::nullopt);

/// Scratch space plus cached adjoints B^T x1, W^T x2, K^T x3 of the iterate the
/// next step starts from (the relaxed iterate for the generalized scheme).
struct SolverWorkspace {
  explicit SolverWorkspace(const OperatorEnsemble& ops);

  /// Recomputes the cached adjoints of `state` from scratch.
  void refresh(const DualState& state, const OperatorEnsemble& ops);

  CVector bt_x1, wt_x2, kt_x3;
  CVector residual;  // dual residual of the most recent (unrelaxed) iterate
  CVector tmp_d, tmp_d2, tmp_d3, tmp_2d, tmp_4d, tmp_p, tmp_p2;
};

/// One sGS-ADMM sweep x1 -> x3 (half step) -> x2 -> x3 -> u, in place.
/// `ws` must hold the adjoints of `state` on entry and holds those of the result on exit.
void sgs_admm_step(DualState& state, SolverWorkspace& ws, const SolverConfig& config, const OperatorEnsemble& ops,
                   std::span<const Complex> b, double sigma);

/// Stateless convenience wrapper around sgs_admm_step.
DualState sgs_admm_iterate(const DualState& state, const SolverConfig& config, const OperatorEnsemble& ops,
                           std::span<const Complex> b, double sigma);

/// One step of the relaxed (generalized) scheme. Reads the relaxed iterate `tilde`,
/// writes the fresh iterate into `state`, then relaxes `tilde` toward it by rho.
/// `ws` caches the adjoints of `tilde`.
void sgs_admm_g_step(DualState& tilde, DualState& state, SolverWorkspace& ws, const SolverConfig& config,
                     const OperatorEnsemble& ops, std::span<const Complex> b, double sigma);

struct RelaxedPair {
  DualState state;
  DualState tilde;
};

RelaxedPair sgs_admm_g_iterate(const DualState& tilde, const SolverConfig& config, const OperatorEnsemble& ops,
                               std::span<const Complex> b, double sigma);

enum class Termination { relerr_tolerance, rlne_tolerance, max_iterations };

std::string to_string(Termination reason);

struct Problem {
  const OperatorEnsemble& ops;
  std::span<const Complex> b;
  const Image* truth = nullptr;  // simulation mode when present
};

struct SolveReport {
  DualState state;
  Image reconstruction;
  IterationTrace trace;
  Termination reason = Termination::max_iterations;
  KktResiduals residuals;  // of the final state
  double wall_time_s = 0.0;
};

/// Runs a solver from the all-zero state until RelErr <= tol_relerr, RLNE <= tol_rlne
/// (ground truth only) or max_iter iterations.
SolveReport run(SolverKind kind, const Problem& problem, const SolverConfig& config);

}  // namespace duadmm
