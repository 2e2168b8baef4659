#include "duadmm/model.hpp"

#include <cmath>

#include "duadmm/kernels.hpp"

namespace duadmm {

ParseError::ParseError(const std::string& what, std::size_t byte_offset)
    : Error(what + " (at byte " + std::to_string(byte_offset) + ")"), offset_(byte_offset) {}

Image::Image(GridShape shape) : Image(shape, CVector(shape.size())) {}

Image::Image(GridShape shape, CVector values) : shape_(shape), values_(std::move(values)) {
  if (shape.rows < 2 || shape.cols < 2) {
    throw DimensionError("image must be at least 2x2");
  }
  if (values_.size() != shape.size()) {
    throw DimensionError("image value count " + std::to_string(values_.size()) +
                         " does not match " + std::to_string(shape.rows) + "x" +
                         std::to_string(shape.cols));
  }
}

Image Image::from_row_major(GridShape shape, std::span<const double> pixels) {
  if (pixels.size() != shape.size()) {
    throw DimensionError("pixel count does not match image shape");
  }
  Image img(shape);
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      img.at(r, c) = pixels[r * shape.cols + c];
    }
  }
  return img;
}

RVector Image::magnitude_row_major() const {
  RVector out(size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) {
      out[r * cols() + c] = std::abs(at(r, c));
    }
  }
  return out;
}

SamplingMask::SamplingMask(GridShape shape, std::vector<std::uint8_t> selected_row_major)
    : shape_(shape), bits_(std::move(selected_row_major)) {
  if (bits_.size() != shape.size()) {
    throw DimensionError("mask size does not match its shape");
  }
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] != 0) {
      bits_[k] = 1;
      locations_.push_back(k);
    }
  }
  if (locations_.empty()) {
    throw ParameterError("sampling mask selects no k-space locations");
  }
}

SamplingMask SamplingMask::full(GridShape shape) {
  return SamplingMask(shape, std::vector<std::uint8_t>(shape.size(), 1));
}

DualState DualState::zeros(std::size_t d, std::size_t p) {
  return DualState{CVector(2 * d), CVector(4 * d), CVector(p), CVector(d)};
}

void SolverConfig::validate() const {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(lambda_detail >= 0.0)) fail("wavelet weight must be nonnegative");
  if (!(sigma0 > 0.0)) fail("sigma0 must be positive");
  if (!(tau > 0.0 && tau < golden)) fail("tau must lie in (0, (1+sqrt 5)/2)");
  if (!(rho > 0.0 && rho < 2.0)) fail("rho must lie in (0, 2)");
  if (!(tau1 >= 8.0)) fail("tau1 must be at least 8");
  if (!(tau2 >= 1.0)) fail("tau2 must be at least 1");
  if (!(tau3 >= 1.0)) fail("tau3 must be at least 1");
  if (max_iter < 0) fail("max-iter must be nonnegative");
  if (!(psnr_scale > 0.0)) fail("PSNR intensity scale must be positive");
  if (refresh_interval < 1) fail("refresh interval must be at least 1");
  const auto& s = schedule;
  if (!(s.floor > 0.0 && s.floor <= s.cap)) fail("sigma floor/cap are inconsistent");
  if (!(s.grow >= 1.0 && s.shrink > 0.0 && s.shrink <= 1.0)) fail("sigma grow/shrink factors are invalid");
  if (!(s.low_ratio > 0.0 && s.low_ratio < s.high_ratio)) fail("sigma ratio thresholds are invalid");
}

void require_length(std::span<const Complex> v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
  }
}

double inner(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) {
    throw DimensionError("inner: length mismatch " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  return kernels::parallel::inner(x, y);
}

double norm(std::span<const Complex> x) { return std::sqrt(kernels::parallel::squared_norm(x)); }

}  // namespace duadmm
