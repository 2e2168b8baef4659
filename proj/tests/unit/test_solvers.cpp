#include <doctest.h>

#include <limits>

#include "dense.hpp"
#include "duadmm/data.hpp"
#include "duadmm/metrics.hpp"
#include "duadmm/operators.hpp"
#include "duadmm/proximal.hpp"
#include "duadmm/solvers.hpp"
#include "helpers.hpp"

using namespace duadmm;

namespace {

struct Fixture {
  GridShape g{5, 4};
  SamplingMask mask;
  CVector b;
  DualState s;
  Fixture(std::uint64_t seed, double rate = 0.5) {
    std::mt19937_64 gen(seed);
    mask = test::random_mask(g, rate, gen);
    b = test::random_vector(mask.count(), gen);
    s = DualState::zeros(g.size(), mask.count());
    s.x1 = test::random_vector(2 * g.size(), gen);
    s.x2 = test::random_vector(4 * g.size(), gen, 0.3);
    s.x3 = test::random_vector(mask.count(), gen);
    s.u = test::random_vector(g.size(), gen, 5.0);
  }
};

double state_diff(const DualState& lib, const oracle::DenseState& ref) {
  double m = 0.0;
  m = std::max(m, test::rel_diff(lib.x1, oracle::from_eigen(ref.x1)));
  m = std::max(m, test::rel_diff(lib.x2, oracle::from_eigen(ref.x2)));
  m = std::max(m, test::rel_diff(lib.x3, oracle::from_eigen(ref.x3)));
  m = std::max(m, test::rel_diff(lib.u, oracle::from_eigen(ref.u)));
  return m;
}

}  // namespace

TEST_CASE("penalty schedule: grow, shrink and keep branches") {
  const SigmaSchedule sch;
  CHECK(update_sigma({5e-3}, 0.1, 1.0).sigma == 1.25 * 5e-3);
  CHECK(update_sigma({5e-3}, 0.1, 1.0).sigma == doctest::Approx(6.25e-3));
  CHECK(update_sigma({5e-3}, 0.2, 1.0).sigma == 1.25 * 5e-3);  // boundary belongs to the grow branch
  CHECK(update_sigma({9e-3}, 1e-3, 1.0).sigma == 1e-2);       // capped
  CHECK(update_sigma({1e-2}, 1e-3, 1.0).sigma == 1e-2);
  CHECK(update_sigma({5e-3}, 10.0, 1.0).sigma == 0.8 * 5e-3);
  CHECK(update_sigma({5e-3}, 5.0, 1.0).sigma == 0.8 * 5e-3);  // boundary belongs to the shrink branch
  CHECK(update_sigma({1.1e-5}, 10.0, 1.0).sigma == 1e-5);     // floored
  CHECK(update_sigma({1e-5}, 10.0, 1.0).sigma == 1e-5);
  CHECK(update_sigma({5e-3}, 1.0, 1.0).sigma == 5e-3);
  CHECK(update_sigma({5e-3}, 4.99, 1.0).sigma == 5e-3);
  CHECK(update_sigma({5e-3}, 0.21, 1.0).sigma == 5e-3);
  CHECK(update_sigma({5e-3}, 1.0, 0.0).sigma == 0.8 * 5e-3);  // eta_D = 0 reads as an infinite ratio
  CHECK(update_sigma({5e-3}, 0.0, 0.0).sigma == 5e-3);
  CHECK(update_sigma({5e-3}, 0.0, 1.0, sch).sigma == 1.25 * 5e-3);
}

TEST_CASE("one sGS-ADMM iterate matches the dense transcription") {
  for (std::uint64_t seed : {1, 2, 3}) {
    Fixture f(seed);
    const oracle::DenseProblem P = oracle::make_dense_problem(f.mask, f.b, 3.0, 0.5);
    for (Step4Anchor anchor : {Step4Anchor::derived, Step4Anchor::printed}) {
      for (ExecPolicy policy : {ExecPolicy::serial, ExecPolicy::parallel}) {
        SolverConfig c;
        c.step4_anchor = anchor;
        const OperatorEnsemble ops(f.mask, 0.5, policy);
        const DualState next = sgs_admm_iterate(f.s, c, ops, f.b, 0.37);
        CHECK(state_diff(next, oracle::sgs_step(P, oracle::to_dense(f.s), c, 0.37)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("one relaxed iterate matches the dense transcription") {
  Fixture f(4);
  const oracle::DenseProblem P = oracle::make_dense_problem(f.mask, f.b, 3.0, 0.5);
  const SolverConfig c;
  const OperatorEnsemble ops(f.mask);
  const RelaxedPair lib = sgs_admm_g_iterate(f.s, c, ops, f.b, 0.21);
  const auto [fresh, relaxed] = oracle::sgs_g_step(P, oracle::to_dense(f.s), c, 0.21);
  CHECK(state_diff(lib.state, fresh) <= 1e-12);
  CHECK(state_diff(lib.tilde, relaxed) <= 1e-12);
}

TEST_CASE("cached adjoints stay consistent over several in-place steps") {
  Fixture f(5);
  const oracle::DenseProblem P = oracle::make_dense_problem(f.mask, f.b, 3.0, 0.5);
  const SolverConfig c;
  const OperatorEnsemble ops(f.mask);

  DualState s = f.s;
  SolverWorkspace ws(ops);
  ws.refresh(s, ops);
  oracle::DenseState ds = oracle::to_dense(f.s);
  for (int k = 0; k < 6; ++k) {
    sgs_admm_step(s, ws, c, ops, f.b, 0.05 * (k + 1));
    ds = oracle::sgs_step(P, ds, c, 0.05 * (k + 1));
  }
  CHECK(state_diff(s, ds) <= 1e-11);

  DualState t = f.s, fresh;
  SolverWorkspace wg(ops);
  wg.refresh(t, ops);
  oracle::DenseState dt = oracle::to_dense(f.s), dfresh;
  for (int k = 0; k < 6; ++k) {
    sgs_admm_g_step(t, fresh, wg, c, ops, f.b, 0.05 * (k + 1));
    std::tie(dfresh, dt) = oracle::sgs_g_step(P, dt, c, 0.05 * (k + 1));
  }
  CHECK(state_diff(fresh, dfresh) <= 1e-11);
  CHECK(state_diff(t, dt) <= 1e-11);
  CHECK(test::rel_diff(wg.residual, ops.dual_residual(fresh)) <= 1e-11);
}

TEST_CASE("relaxation factor 1 leaves the fresh iterate unchanged") {
  Fixture f(6);
  SolverConfig c;
  c.rho = 1.0;
  const OperatorEnsemble ops(f.mask);
  const RelaxedPair r = sgs_admm_g_iterate(f.s, c, ops, f.b, 0.1);
  CHECK(test::max_abs_diff(r.tilde.x1, r.state.x1) == 0.0);
  CHECK(test::max_abs_diff(r.tilde.x2, r.state.x2) == 0.0);
  CHECK(test::max_abs_diff(r.tilde.x3, r.state.x3) == 0.0);
  CHECK(test::max_abs_diff(r.tilde.u, r.state.u) == 0.0);
}

TEST_CASE("zero data from the zero state stays at zero") {
  const SamplingMask mask = SamplingMask::full(GridShape{8, 8});
  const OperatorEnsemble ops(mask);
  const CVector b(mask.count());
  for (SolverKind kind : {SolverKind::sgs_admm, SolverKind::sgs_admm_g}) {
    SolverConfig c;
    c.max_iter = 10;
    c.tol_relerr = 0.0;
    const SolveReport r = run(kind, Problem{ops, b, nullptr}, c);
    CHECK(r.trace.size() == 10);
    CHECK(norm(r.state.u) == 0.0);
    CHECK(norm(r.state.x1) == 0.0);
    CHECK(r.residuals.relerr == 0.0);
  }
}

TEST_CASE("zero iterations returns the starting point") {
  const SamplingMask mask = SamplingMask::full(GridShape{4, 4});
  const OperatorEnsemble ops(mask);
  const CVector b(mask.count(), 1.0);
  SolverConfig c;
  c.max_iter = 0;
  const SolveReport r = run(SolverKind::sgs_admm, Problem{ops, b, nullptr}, c);
  CHECK(r.trace.empty());
  CHECK(r.reason == Termination::max_iterations);
  CHECK(norm(r.reconstruction.vec()) == 0.0);
  CHECK(r.residuals.eta_p == doctest::Approx(norm(b) / (1.0 + norm(b))));
}

TEST_CASE("KKT residuals at a manufactured point") {
  std::mt19937_64 gen(7);
  const GridShape g{6, 6};
  const SamplingMask mask = SamplingMask::full(g);
  const OperatorEnsemble ops(mask);
  DualState s = DualState::zeros(g.size(), mask.count());
  s.u = test::random_vector(g.size(), gen);
  const CVector b = ops.apply_fourier(s.u);
  const KktResiduals r = kkt_residuals(s, ops, b);
  CHECK(r.eta_p <= 1e-15);
  CHECK(r.eta_d == 0.0);

  const auto P = oracle::make_dense_problem(mask, b, 3.0, 0.5);
  const oracle::Vec bu = P.B * oracle::to_eigen(s.u), wu = P.W * oracle::to_eigen(s.u);
  const double e1 = oracle::project_group_l2(bu, 3.0).norm() / (1.0 + bu.norm());
  const double e2 = oracle::project_box(wu, P.lambda).norm() / (1.0 + wu.norm());
  CHECK(r.eta_1 == doctest::Approx(e1).epsilon(1e-12));
  CHECK(r.eta_2 == doctest::Approx(e2).epsilon(1e-12));
  CHECK(r.relerr == std::max({r.eta_p, r.eta_d, r.eta_1, r.eta_2}));

  SolverConfig normalized;
  normalized.normalized_eta_d = true;
  s.x3 = test::random_vector(mask.count(), gen);
  const double raw = kkt_residuals(s, ops, b).eta_d;
  CHECK(kkt_residuals(s, ops, b, normalized).eta_d == doctest::Approx(raw / (1.0 + norm(b))));
  CHECK(raw == doctest::Approx(norm(ops.adjoint_fourier(s.x3))));
}

TEST_CASE("trace rows record the sigma used and the residual maximum") {
  const Image truth = normalize_unit(shepp_logan(32, 32));
  const OperatorEnsemble ops(random_2d_mask({MaskKind::random_2d, 0.3, 1, GridShape{32, 32}}));
  const CVector b = ops.apply_fourier(truth.vec());
  SolverConfig c;
  c.max_iter = 30;
  c.tol_relerr = 0.0;
  c.tol_rlne = 0.0;
  const SolveReport r = run(SolverKind::sgs_admm, Problem{ops, b, &truth}, c);
  REQUIRE(r.trace.size() == 30);
  CHECK(r.trace.front().sigma == c.sigma0);
  PenaltyState pen{c.sigma0};
  for (const TraceRow& row : r.trace) {
    CHECK(row.sigma == pen.sigma);
    pen = update_sigma(pen, row.eta_p, row.eta_d);
    CHECK(row.relerr == std::max({row.eta_p, row.eta_d, row.eta_1, row.eta_2}));
    CHECK(row.rlne.has_value());
    CHECK(row.psnr.has_value());
  }
  CHECK(r.trace.back().time_s >= r.trace.front().time_s);
  CHECK(*r.trace.back().rlne == doctest::Approx(rlne(truth, r.reconstruction)));
}

TEST_CASE("periodic cache refresh does not change the trajectory beyond rounding") {
  const Image truth = normalize_unit(shepp_logan(32, 32));
  const OperatorEnsemble ops(random_2d_mask({MaskKind::random_2d, 0.3, 2, GridShape{32, 32}}));
  const CVector b = ops.apply_fourier(truth.vec());
  for (SolverKind kind : {SolverKind::sgs_admm, SolverKind::sgs_admm_g}) {
    SolverConfig every, rare;
    every.max_iter = rare.max_iter = 120;
    every.tol_relerr = rare.tol_relerr = 0.0;
    every.refresh_interval = 1;
    rare.refresh_interval = 1000;
    const SolveReport a = run(kind, Problem{ops, b, nullptr}, every);
    const SolveReport c = run(kind, Problem{ops, b, nullptr}, rare);
    CHECK(test::rel_diff(a.state.u, c.state.u) <= 1e-9);
  }
}

TEST_CASE("full noiseless sampling recovers the image quickly") {
  const Image truth = normalize_unit(shepp_logan(32, 32));
  const OperatorEnsemble ops(SamplingMask::full(truth.shape()));
  const CVector b = ops.apply_fourier(truth.vec());
  for (SolverKind kind : {SolverKind::sgs_admm, SolverKind::sgs_admm_g}) {
    SolverConfig c;
    c.max_iter = 50;
    c.tol_relerr = 0.0;
    c.tol_rlne = 1e-6;
    const SolveReport r = run(kind, Problem{ops, b, &truth}, c);
    CHECK(r.reason == Termination::rlne_tolerance);
    CHECK(rlne(truth, r.reconstruction) <= 1e-6);
  }
}

TEST_CASE("stopping rules") {
  const Image truth = normalize_unit(shepp_logan(32, 32));
  const OperatorEnsemble ops(random_2d_mask({MaskKind::random_2d, 0.4, 3, GridShape{32, 32}}));
  const CVector b = ops.apply_fourier(truth.vec());
  SolverConfig c;
  c.max_iter = 2000;
  c.tol_relerr = 1e-3;
  c.tol_rlne = 0.0;
  const SolveReport r = run(SolverKind::sgs_admm_g, Problem{ops, b, &truth}, c);
  CHECK(r.reason == Termination::relerr_tolerance);
  CHECK(r.trace.back().relerr <= 1e-3);
  CHECK(r.trace[r.trace.size() - 2].relerr > 1e-3);

  c.tol_relerr = 0.0;
  c.tol_rlne = 5e-2;  // the model's own error floor on this grid is about 2e-2
  const SolveReport q = run(SolverKind::sgs_admm, Problem{ops, b, &truth}, c);
  CHECK(q.reason == Termination::rlne_tolerance);
  CHECK(*q.trace.back().rlne <= 5e-2);
  CHECK(*q.trace[q.trace.size() - 2].rlne > 5e-2);

  // Without ground truth the RLNE rule cannot fire.
  c.max_iter = 40;
  const SolveReport n = run(SolverKind::sgs_admm, Problem{ops, b, nullptr}, c);
  CHECK(n.reason == Termination::max_iterations);
  CHECK_FALSE(n.trace.back().rlne.has_value());
}

TEST_CASE("invalid inputs and divergence are reported") {
  Fixture f(8);
  const OperatorEnsemble ops(f.mask);
  SolverConfig c;
  CHECK_THROWS_AS(sgs_admm_iterate(f.s, c, ops, f.b, 0.0), ParameterError);
  CHECK_THROWS_AS(sgs_admm_iterate(f.s, c, ops, CVector(f.b.size() + 1), 0.1), DimensionError);
  CVector nan_b = f.b;
  nan_b[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sgs_admm_iterate(f.s, c, ops, nan_b, 0.1), DivergenceError);
  CHECK_THROWS_AS(run(SolverKind::sgs_admm, Problem{ops, nan_b, nullptr}, c), DivergenceError);
  c.tau = 2.0;
  CHECK_THROWS_AS(run(SolverKind::sgs_admm, Problem{ops, f.b, nullptr}, c), ParameterError);
  CHECK(parse_solver_kind("sgs-admm-g") == SolverKind::sgs_admm_g);
  CHECK(to_string(SolverKind::sgs_admm) == "sgs-admm");
  CHECK_THROWS_AS(parse_solver_kind("admm"), ParameterError);
}
