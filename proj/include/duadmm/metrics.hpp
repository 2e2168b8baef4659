#pragma once

#include <span>

#include "duadmm/model.hpp"

namespace duadmm {

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

struct MetricOptions {
  RlneDenominator denominator = RlneDenominator::reconstruction;
  bool magnitude = false;       // compare |truth| and |recon| instead of complex values
  double intensity_scale = 1.0; // multiply both images before PSNR (255 puts [0,1] data on 8-bit scale)
};

struct QualityReport {
  double psnr_log = 0.0;     // 10 log10(255 sqrt(d) / ||truth - recon||)
  double psnr_standard = 0.0;  // 20 log10 of the same ratio
  double rlne = 0.0;
};

// ||truth - recon|| / ||recon|| (or / ||truth|| with RlneDenominator::truth).
double rlne(std::span<const Complex> truth, std::span<const Complex> recon, const MetricOptions& opts = {});
double rlne(const Image& truth, const Image& recon, const MetricOptions& opts = {});

// +infinity on exact recovery.
double psnr(std::span<const Complex> truth, std::span<const Complex> recon, const MetricOptions& opts = {});
double psnr(const Image& truth, const Image& recon, const MetricOptions& opts = {});
double psnr_standard(std::span<const Complex> truth, std::span<const Complex> recon,
                     const MetricOptions& opts = {});

QualityReport quality(const Image& truth, const Image& recon, const MetricOptions& opts = {});

}  // namespace duadmm
