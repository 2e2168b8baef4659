#include "duadmm/operators.hpp"

#include <algorithm>
#include <cmath>

namespace duadmm {

namespace {
CVector& scratch(std::size_t n) {
  thread_local CVector buf;
  buf.resize(n);
  return buf;
}
}  // namespace

OperatorEnsemble::OperatorEnsemble(SamplingMask mask, double lambda_detail, ExecPolicy policy)
    : mask_(std::move(mask)), policy_(policy), kernels_(&kernel_table(policy)) {
  const GridShape s = mask_.shape();
  if (s.rows < 2 || s.cols < 2) throw DimensionError("operators need a grid of at least 2x2");
  if (lambda_detail < 0.0) throw ParameterError("wavelet weights must be nonnegative");
  const std::size_t d = s.size();
  lambda_.assign(4 * d, lambda_detail);
  std::fill(lambda_.begin(), lambda_.begin() + static_cast<std::ptrdiff_t>(d), 0.0);

  offsets_.reserve(mask_.count());
  for (std::size_t loc : mask_.locations()) {
    const std::size_t r = loc / s.cols, c = loc % s.cols;
    const std::size_t kr = (r + s.rows - s.rows / 2) % s.rows;
    const std::size_t kc = (c + s.cols - s.cols / 2) % s.cols;
    offsets_.push_back(kr + kc * s.rows);
  }
  fft_ = std::make_shared<const UnitaryFft2d>(s);
}

void OperatorEnsemble::apply_grad(std::span<const Complex> u, std::span<Complex> out) const {
  require_length(u, d(), "apply_grad input");
  require_length(out, 2 * d(), "apply_grad output");
  kernels_->grad(shape(), u, out);
}

void OperatorEnsemble::adjoint_grad(std::span<const Complex> x1, std::span<Complex> out) const {
  require_length(x1, 2 * d(), "adjoint_grad input");
  require_length(out, d(), "adjoint_grad output");
  kernels_->grad_adjoint(shape(), x1, out);
}

void OperatorEnsemble::apply_wavelet(std::span<const Complex> u, std::span<Complex> out) const {
  require_length(u, d(), "apply_wavelet input");
  require_length(out, q(), "apply_wavelet output");
  kernels_->haar(shape(), u, out);
}

void OperatorEnsemble::adjoint_wavelet(std::span<const Complex> x2, std::span<Complex> out) const {
  require_length(x2, q(), "adjoint_wavelet input");
  require_length(out, d(), "adjoint_wavelet output");
  kernels_->haar_adjoint(shape(), x2, out);
}

void OperatorEnsemble::apply_fourier(std::span<const Complex> u, std::span<Complex> out) const {
  require_length(u, d(), "apply_fourier input");
  require_length(out, p(), "apply_fourier output");
  CVector& buf = scratch(d());
  fft_->forward(u, buf);
  for (std::size_t k = 0; k < offsets_.size(); ++k) out[k] = buf[offsets_[k]];
}

void OperatorEnsemble::adjoint_fourier(std::span<const Complex> x3, std::span<Complex> out) const {
  require_length(x3, p(), "adjoint_fourier input");
  require_length(out, d(), "adjoint_fourier output");
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t k = 0; k < offsets_.size(); ++k) out[offsets_[k]] = x3[k];
  fft_->inverse(out, out);
}

CVector OperatorEnsemble::apply_grad(std::span<const Complex> u) const {
  CVector out(2 * d());
  apply_grad(u, out);
  return out;
}

CVector OperatorEnsemble::adjoint_grad(std::span<const Complex> x1) const {
  CVector out(d());
  adjoint_grad(x1, out);
  return out;
}

CVector OperatorEnsemble::apply_wavelet(std::span<const Complex> u) const {
  CVector out(q());
  apply_wavelet(u, out);
  return out;
}

CVector OperatorEnsemble::adjoint_wavelet(std::span<const Complex> x2) const {
  CVector out(d());
  adjoint_wavelet(x2, out);
  return out;
}

CVector OperatorEnsemble::apply_fourier(std::span<const Complex> u) const {
  CVector out(p());
  apply_fourier(u, out);
  return out;
}

CVector OperatorEnsemble::adjoint_fourier(std::span<const Complex> x3) const {
  CVector out(d());
  adjoint_fourier(x3, out);
  return out;
}

CVector OperatorEnsemble::dual_residual(const DualState& state) const {
  require_length(state.x1, 2 * d(), "dual_residual x1");
  require_length(state.x2, q(), "dual_residual x2");
  require_length(state.x3, p(), "dual_residual x3");
  const CVector a = adjoint_grad(state.x1);
  const CVector b = adjoint_wavelet(state.x2);
  const CVector c = adjoint_fourier(state.x3);
  CVector out(d());
  const CVector zero(d());
  kernels_->sum3_plus_scaled(a, b, c, 0.0, zero, out);
  return out;
}

double total_variation(const OperatorEnsemble& ops, std::span<const Complex> u) {
  const CVector g = ops.apply_grad(u);
  const std::size_t d = ops.d();
  double tv = 0.0;
  for (std::size_t k = 0; k < d; ++k) tv += std::sqrt(std::norm(g[k]) + std::norm(g[d + k]));
  return tv;
}

}  // namespace duadmm
