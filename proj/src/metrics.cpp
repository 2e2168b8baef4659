#include "duadmm/metrics.hpp"

#include <cmath>
#include <limits>

#include "duadmm/kernels.hpp"

namespace duadmm {

namespace {

struct Norms {
  double error;
  double truth;
  double recon;
};

Norms norms(std::span<const Complex> truth, std::span<const Complex> recon, bool magnitude) {
  if (truth.size() != recon.size()) throw DimensionError("metric inputs differ in length");
  const auto& k = kernel_table(ExecPolicy::parallel);
  if (!magnitude) {
    return {std::sqrt(k.squared_distance(truth, recon)), std::sqrt(k.squared_norm(truth)),
            std::sqrt(k.squared_norm(recon))};
  }
  double e = 0.0, t = 0.0, r = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double a = std::abs(truth[i]), b = std::abs(recon[i]);
    e += (a - b) * (a - b);
    t += a * a;
    r += b * b;
  }
  return {std::sqrt(e), std::sqrt(t), std::sqrt(r)};
}

double psnr_ratio(std::span<const Complex> truth, std::span<const Complex> recon, const MetricOptions& opts) {
  const double err = norms(truth, recon, opts.magnitude).error * opts.intensity_scale;
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 255.0 * std::sqrt(static_cast<double>(truth.size())) / err;
}

}  // namespace

double rlne(std::span<const Complex> truth, std::span<const Complex> recon, const MetricOptions& opts) {
  const Norms n = norms(truth, recon, opts.magnitude);
  const double denom = opts.denominator == RlneDenominator::reconstruction ? n.recon : n.truth;
  if (denom == 0.0) throw UndefinedMetricError("RLNE undefined: reference image has zero norm");
  return n.error / denom;
}

double rlne(const Image& truth, const Image& recon, const MetricOptions& opts) {
  if (truth.shape() != recon.shape()) throw DimensionError("metric images differ in shape");
  return rlne(std::span<const Complex>(truth.vec()), std::span<const Complex>(recon.vec()), opts);
}

double psnr(std::span<const Complex> truth, std::span<const Complex> recon, const MetricOptions& opts) {
  return 10.0 * std::log10(psnr_ratio(truth, recon, opts));
}

double psnr(const Image& truth, const Image& recon, const MetricOptions& opts) {
  if (truth.shape() != recon.shape()) throw DimensionError("metric images differ in shape");
  return psnr(std::span<const Complex>(truth.vec()), std::span<const Complex>(recon.vec()), opts);
}

double psnr_standard(std::span<const Complex> truth, std::span<const Complex> recon, const MetricOptions& opts) {
  return 20.0 * std::log10(psnr_ratio(truth, recon, opts));
}

QualityReport quality(const Image& truth, const Image& recon, const MetricOptions& opts) {
  if (truth.shape() != recon.shape()) throw DimensionError("metric images differ in shape");
  std::span<const Complex> t(truth.vec()), r(recon.vec());
  return {psnr(t, r, opts), psnr_standard(t, r, opts), rlne(t, r, opts)};
}

}  // namespace duadmm
