#pragma once

#include <memory>
#include <span>
#include <vector>

#include "duadmm/fourier.hpp"
#include "duadmm/kernels.hpp"
#include "duadmm/model.hpp"

namespace duadmm {

/// The three linear maps of the model and their adjoints, matrix-free:
///   B: periodic forward differences, C^d -> C^{2d}
///   W: one-level undecimated Haar frame (W^T W = I), C^d -> C^{4d}
///   K: unitary 2-D DFT restricted to the mask, C^d -> C^p (K K^T = I)
/// Also holds the wavelet weights lambda (0 on the LL band).
class OperatorEnsemble {
 public:
  explicit OperatorEnsemble(SamplingMask mask, double lambda_detail = 0.5,
                            ExecPolicy policy = ExecPolicy::parallel);

  GridShape shape() const { return mask_.shape(); }
  std::size_t d() const { return mask_.shape().size(); }
  std::size_t p() const { return mask_.count(); }
  std::size_t q() const { return 4 * d(); }
  const SamplingMask& mask() const { return mask_; }
  std::span<const double> lambda() const { return lambda_; }
  ExecPolicy policy() const { return policy_; }
  const KernelTable& kernels() const { return *kernels_; }

  /// Column-major FFT-buffer offset of every mask sample, in sample order.
  const std::vector<std::size_t>& sample_offsets() const { return offsets_; }

  void apply_grad(std::span<const Complex> u, std::span<Complex> out) const;
  void adjoint_grad(std::span<const Complex> x1, std::span<Complex> out) const;
  void apply_wavelet(std::span<const Complex> u, std::span<Complex> out) const;
  void adjoint_wavelet(std::span<const Complex> x2, std::span<Complex> out) const;
  void apply_fourier(std::span<const Complex> u, std::span<Complex> out) const;
  void adjoint_fourier(std::span<const Complex> x3, std::span<Complex> out) const;

  CVector apply_grad(std::span<const Complex> u) const;
  CVector adjoint_grad(std::span<const Complex> x1) const;
  CVector apply_wavelet(std::span<const Complex> u) const;
  CVector adjoint_wavelet(std::span<const Complex> x2) const;
  CVector apply_fourier(std::span<const Complex> u) const;
  CVector adjoint_fourier(std::span<const Complex> x3) const;

  /// B^T x1 + W^T x2 + K^T x3.
  CVector dual_residual(const DualState& state) const;

 private:
  SamplingMask mask_;
  RVector lambda_;
  ExecPolicy policy_;
  const KernelTable* kernels_;
  std::vector<std::size_t> offsets_;
  std::shared_ptr<const UnitaryFft2d> fft_;
};

/// Isotropic TV: sum over pixels of the modulus of the gradient pair.
double total_variation(const OperatorEnsemble& ops, std::span<const Complex> u);

}  // namespace duadmm
