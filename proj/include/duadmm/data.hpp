#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "duadmm/model.hpp"

namespace duadmm {

enum class MaskKind { pseudo_radial, cartesian, random_2d };

std::string to_string(MaskKind kind);
MaskKind parse_mask_kind(const std::string& name);  // radial | cartesian | random2d

struct MaskSpec {
  MaskKind kind = MaskKind::pseudo_radial;
  double target_rate = 0.065;
  std::uint64_t seed = 0;
  GridShape grid{256, 256};
};

struct NoiseSpec {
  double stddev = 0.0;  // per real/imaginary component
  std::uint64_t seed = 0;
};

struct Ellipse {
  double intensity;
  double semi_x;   // semi-axis along x (horizontal)
  double semi_y;   // semi-axis along y (vertical, pointing up)
  double center_x;
  double center_y;
  double angle_deg;

  bool contains(double x, double y) const;
};

/// The ten ellipses of the modified (high-contrast) Shepp-Logan head phantom.
const std::array<Ellipse, 10>& shepp_logan_ellipses();

/// Pixel-center coordinates on [-1, 1]^2: x grows with the column, y shrinks with the row.
double pixel_x(std::size_t col, std::size_t cols);
double pixel_y(std::size_t row, std::size_t rows);

/// Real phantom with values in [0, 1]; needs at least 16x16 pixels.
Image shepp_logan(std::size_t rows, std::size_t cols);

/// Straight spokes through the k-space center; the spoke count is the smallest
/// whose achieved rate reaches the target.
SamplingMask pseudo_radial_mask(const MaskSpec& spec);

/// Fully sampled phase-encode rows: a central band plus Gaussian-weighted random rows.
SamplingMask cartesian_mask(const MaskSpec& spec);

/// Variable-density random points, weight (1 + distance from center)^-2, exact count.
SamplingMask random_2d_mask(const MaskSpec& spec);

SamplingMask make_mask(const MaskSpec& spec);

/// Adds i.i.d. complex Gaussian noise stddev*(g + i h) to every sample.
KSpaceData add_noise(const KSpaceData& kspace, const NoiseSpec& spec);

/// Scales a real nonnegative image so its largest magnitude is 1.
Image normalize_unit(const Image& image);

}  // namespace duadmm
