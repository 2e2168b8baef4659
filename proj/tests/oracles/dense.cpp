#include "dense.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace duadmm::oracle {

Vec to_eigen(const CVector& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

CVector from_eigen(const Vec& v) { return CVector(v.data(), v.data() + v.size()); }

RMat realify(const Mat& a) {
  const auto m = a.rows(), n = a.cols();
  RMat out(2 * m, 2 * n);
  out.topLeftCorner(m, n) = a.real();
  out.topRightCorner(m, n) = -a.imag();
  out.bottomLeftCorner(m, n) = a.imag();
  out.bottomRightCorner(m, n) = a.real();
  return out;
}

RVec realify(const Vec& v) {
  RVec out(2 * v.size());
  out << v.real(), v.imag();
  return out;
}

Vec complexify(const RVec& v) {
  const auto n = v.size() / 2;
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = Complex(v(i), v(n + i));
  return out;
}

namespace {
Eigen::Index lin(GridShape g, std::size_t i, std::size_t j) {
  return static_cast<Eigen::Index>((i % g.rows) + (j % g.cols) * g.rows);
}
}  // namespace

Mat grad_matrix(GridShape g) {
  const auto d = static_cast<Eigen::Index>(g.size());
  Mat B = Mat::Zero(2 * d, d);
  for (std::size_t j = 0; j < g.cols; ++j) {
    for (std::size_t i = 0; i < g.rows; ++i) {
      const auto row = lin(g, i, j);
      B(row, lin(g, i + 1, j)) += 1.0;
      B(row, lin(g, i, j)) -= 1.0;
      B(d + row, lin(g, i, j + 1)) += 1.0;
      B(d + row, lin(g, i, j)) -= 1.0;
    }
  }
  return B;
}

Mat haar_matrix(GridShape g) {
  const auto d = static_cast<Eigen::Index>(g.size());
  Mat W = Mat::Zero(4 * d, d);
  // Sign of (self, below, right, diagonal) in each band.
  const double sign[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  for (std::size_t j = 0; j < g.cols; ++j) {
    for (std::size_t i = 0; i < g.rows; ++i) {
      const Eigen::Index cols[4] = {lin(g, i, j), lin(g, i + 1, j), lin(g, i, j + 1), lin(g, i + 1, j + 1)};
      for (int band = 0; band < 4; ++band) {
        for (int t = 0; t < 4; ++t) W(band * d + lin(g, i, j), cols[t]) += sign[band][t] / 4.0;
      }
    }
  }
  return W;
}

Mat fourier_matrix(const SamplingMask& mask) {
  const GridShape g = mask.shape();
  const auto d = static_cast<Eigen::Index>(g.size());
  Mat K(static_cast<Eigen::Index>(mask.count()), d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  Eigen::Index row = 0;
  for (std::size_t r = 0; r < g.rows; ++r) {
    for (std::size_t c = 0; c < g.cols; ++c) {
      if (!mask.selected(r, c)) continue;
      const double fr = static_cast<double>(r) - static_cast<double>(g.rows / 2);
      const double fc = static_cast<double>(c) - static_cast<double>(g.cols / 2);
      for (std::size_t j = 0; j < g.cols; ++j) {
        for (std::size_t i = 0; i < g.rows; ++i) {
          const double phase = -2.0 * std::numbers::pi *
                               (fr * static_cast<double>(i) / static_cast<double>(g.rows) +
                                fc * static_cast<double>(j) / static_cast<double>(g.cols));
          K(row, lin(g, i, j)) = scale * std::polar(1.0, phase);
        }
      }
      ++row;
    }
  }
  return K;
}

Vec project_group_l2(const Vec& y, double mu) {
  const auto d = y.size() / 2;
  Vec out = y;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double r = std::sqrt(std::norm(y(i)) + std::norm(y(d + i)));
    if (r > mu) {
      out(i) *= mu / r;
      out(d + i) *= mu / r;
    }
  }
  return out;
}

Vec project_box(const Vec& y, const RVector& radii) {
  Vec out = y;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double lam = radii[static_cast<std::size_t>(i)];
    const double m = std::abs(y(i));
    if (m > lam) out(i) = lam == 0.0 ? Complex(0.0) : y(i) * (lam / m);
  }
  return out;
}

RVector wavelet_weights(std::size_t d, double lambda_detail) {
  RVector w(4 * d, lambda_detail);
  for (std::size_t i = 0; i < d; ++i) w[i] = 0.0;
  return w;
}

DenseProblem make_dense_problem(const SamplingMask& mask, const CVector& b, double mu, double lambda_detail) {
  DenseProblem P;
  P.B = grad_matrix(mask.shape());
  P.W = haar_matrix(mask.shape());
  P.K = fourier_matrix(mask);
  P.b = to_eigen(b);
  P.lambda = wavelet_weights(mask.shape().size(), lambda_detail);
  P.mu = mu;
  return P;
}

DenseState to_dense(const DualState& s) { return {to_eigen(s.x1), to_eigen(s.x2), to_eigen(s.x3), to_eigen(s.u)}; }

DenseState sgs_step(const DenseProblem& P, const DenseState& s, const SolverConfig& c, double sigma) {
  const Mat Bt = P.B.adjoint(), Wt = P.W.adjoint(), Kt = P.K.adjoint();
  DenseState n;
  Vec v = Bt * s.x1 + Wt * s.x2 + Kt * s.x3 - s.u / sigma;
  n.x1 = project_group_l2(s.x1 - P.B * v / c.tau1, P.mu);

  v = Bt * n.x1 + Wt * s.x2 + Kt * s.x3 - s.u / sigma;
  const Vec x3h = s.x3 - P.K * v / c.tau3 - P.b / (c.tau3 * sigma);

  v = Bt * n.x1 + Wt * s.x2 + Kt * x3h - s.u / sigma;
  n.x2 = project_box(s.x2 - P.W * v / c.tau2, P.lambda);

  const Vec& anchor = c.step4_anchor == Step4Anchor::derived ? s.x3 : x3h;
  v = Bt * n.x1 + Wt * n.x2 + Kt * anchor - s.u / sigma;
  n.x3 = s.x3 - P.K * v / c.tau3 - P.b / (c.tau3 * sigma);

  n.u = s.u - c.tau * sigma * (Bt * n.x1 + Wt * n.x2 + Kt * n.x3);
  return n;
}

std::pair<DenseState, DenseState> sgs_g_step(const DenseProblem& P, const DenseState& t, const SolverConfig& c,
                                             double sigma) {
  const Mat Bt = P.B.adjoint(), Wt = P.W.adjoint(), Kt = P.K.adjoint();
  DenseState n;
  Vec v = Bt * t.x1 + Wt * t.x2 + Kt * t.x3 - t.u / sigma;
  n.x1 = project_group_l2(t.x1 - P.B * v / c.tau1, P.mu);
  n.u = t.u - sigma * (Bt * n.x1 + Wt * t.x2 + Kt * t.x3);

  v = Bt * n.x1 + Wt * t.x2 + Kt * t.x3 - n.u / sigma;
  const Vec x3h = t.x3 - P.K * v / c.tau3 - P.b / (c.tau3 * sigma);

  v = Bt * n.x1 + Wt * t.x2 + Kt * x3h - n.u / sigma;
  n.x2 = project_box(t.x2 - P.W * v / c.tau2, P.lambda);

  v = Bt * n.x1 + Wt * n.x2 + Kt * t.x3 - n.u / sigma;
  n.x3 = t.x3 - P.K * v / c.tau3 - P.b / (c.tau3 * sigma);

  DenseState r;
  r.x1 = t.x1 + c.rho * (n.x1 - t.x1);
  r.x2 = t.x2 + c.rho * (n.x2 - t.x2);
  r.x3 = t.x3 + c.rho * (n.x3 - t.x3);
  r.u = t.u + c.rho * (n.u - t.u);
  return {n, r};
}

namespace {

RMat block_proximal(const DenseProblem& P, double tau2, double tau3, const Mat& g1) {
  const auto q = P.W.rows(), p = P.K.rows();
  const Mat S2 = tau2 * Mat::Identity(q, q) - P.W * P.W.adjoint();
  const Mat S3 = tau3 * Mat::Identity(p, p) - P.K * P.K.adjoint();
  const RMat top = realify(Mat(S2 + g1));
  const RMat bottom = realify(S3);
  RMat G = RMat::Zero(top.rows() + bottom.rows(), top.cols() + bottom.cols());
  G.topLeftCorner(top.rows(), top.cols()) = top;
  G.bottomRightCorner(bottom.rows(), bottom.cols()) = bottom;
  return G;
}

}  // namespace

RMat sgs_block_proximal(const DenseProblem& P, double tau2, double tau3) {
  const Mat g1 = P.W * P.K.adjoint() * P.K * P.W.adjoint() / tau3;
  return block_proximal(P, tau2, tau3, g1);
}

RMat sgs_block_proximal_unscaled(const DenseProblem& P, double tau2, double tau3) {
  const Mat kkt = P.K * P.K.adjoint();
  const Mat g1 = P.W * P.K.adjoint() * kkt.inverse() * P.K * P.W.adjoint();
  return block_proximal(P, tau2, tau3, g1);
}

std::pair<Vec, Vec> joint_block_minimizer(const DenseProblem& P, const RMat& G, const Vec& x1, const Vec& x2k,
                                          const Vec& x3k, const Vec& u, double sigma) {
  if (P.B.cols() > 64) throw std::invalid_argument("joint_block_minimizer: grid too large for the dense oracle");
  const auto q = P.W.rows(), p = P.K.rows();
  // z = (Re x2, Im x2, Re x3, Im x3); M z = realify(W^T x2 + K^T x3).
  const RMat Wt = realify(Mat(P.W.adjoint())), Kt = realify(Mat(P.K.adjoint()));
  RMat M(Wt.rows(), Wt.cols() + Kt.cols());
  M << Wt, Kt;
  const RVec c = realify(Vec(P.B.adjoint() * x1));
  const RVec ur = realify(u);
  RVec lin_term = RVec::Zero(M.cols());
  lin_term.tail(2 * p) = realify(P.b);
  lin_term -= M.transpose() * ur;
  lin_term += sigma * M.transpose() * c;

  RVec zk(M.cols());
  zk << realify(x2k), realify(x3k);
  const RMat H = sigma * (M.transpose() * M + G);
  const RVec h = lin_term - sigma * G * zk;  // gradient = H z + h

  Eigen::SelfAdjointEigenSolver<RMat> eig(H);
  const double L = eig.eigenvalues().maxCoeff(), m = eig.eigenvalues().minCoeff();
  if (!(m > 0.0)) throw std::runtime_error("joint block problem is not strongly convex");
  const double beta = (std::sqrt(L) - std::sqrt(m)) / (std::sqrt(L) + std::sqrt(m));

  auto project = [&](RVec z) {
    for (Eigen::Index i = 0; i < q; ++i) {
      const double lam = P.lambda[static_cast<std::size_t>(i)];
      const double r = std::hypot(z(i), z(q + i));
      if (r > lam) {
        const double s = lam == 0.0 ? 0.0 : lam / r;
        z(i) *= s;
        z(q + i) *= s;
      }
    }
    return z;
  };

  RVec z = project(zk), y = z;
  for (int it = 0; it < 200000; ++it) {
    const RVec next = project(y - (H * y + h) / L);
    const double change = (next - z).norm();
    y = next + beta * (next - z);
    z = next;
    if (change <= 1e-15 * (1.0 + z.norm())) break;
  }
  return {complexify(z.head(2 * q)), complexify(z.tail(2 * p))};
}

double power_iteration(const RMat& a, int iterations, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  RVec v(a.cols());
  for (auto& x : v) x = n(gen);
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    RVec w = a * v;
    lambda = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  return lambda;
}

double smallest_eigenvalue(const RMat& symmetric) {
  Eigen::SelfAdjointEigenSolver<RMat> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace duadmm::oracle
