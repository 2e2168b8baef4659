#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace duadmm {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

// Error classes. The CLI maps each one to its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset);
  std::size_t byte_offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct GridShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const GridShape&) const = default;
};

/// Complex d1 x d2 image stored column-major: value (i, j) lives at i + j*rows.
class Image {
 public:
  Image() = default;
  explicit Image(GridShape shape);
  Image(GridShape shape, CVector values);

  /// Builds an image from row-major real data (the natural order of image files).
  static Image from_row_major(GridShape shape, std::span<const double> pixels);

  GridShape shape() const { return shape_; }
  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  std::size_t size() const { return values_.size(); }

  Complex& at(std::size_t i, std::size_t j) { return values_[i + j * shape_.rows]; }
  const Complex& at(std::size_t i, std::size_t j) const { return values_[i + j * shape_.rows]; }

  const CVector& vec() const { return values_; }
  CVector& vec() { return values_; }

  /// Pixel magnitudes in row-major order.
  RVector magnitude_row_major() const;

 private:
  GridShape shape_;
  CVector values_;
};

/// Binary k-space selection in display (centered) coordinates: the DC
/// frequency sits at (rows/2, cols/2). Samples are ordered by a row-major scan.
class SamplingMask {
 public:
  SamplingMask() = default;
  SamplingMask(GridShape shape, std::vector<std::uint8_t> selected_row_major);

  static SamplingMask full(GridShape shape);

  GridShape shape() const { return shape_; }
  bool selected(std::size_t r, std::size_t c) const { return bits_[r * shape_.cols + c] != 0; }
  std::size_t count() const { return locations_.size(); }
  double rate() const { return static_cast<double>(count()) / static_cast<double>(shape_.size()); }

  /// Row-major linear locations (r*cols + c) of the selected entries, ascending.
  const std::vector<std::size_t>& locations() const { return locations_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const SamplingMask& other) const {
    return shape_ == other.shape_ && bits_ == other.bits_;
  }

 private:
  GridShape shape_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::size_t> locations_;
};

struct KSpaceData {
  SamplingMask mask;
  CVector samples;
};

/// Full solver iterate: x1 (2d), x2 (4d), x3 (p) and the multiplier u (d).
struct DualState {
  CVector x1;
  CVector x2;
  CVector x3;
  CVector u;

  static DualState zeros(std::size_t d, std::size_t p);
};

enum class Step4Anchor { derived, printed };
enum class RlneDenominator { reconstruction, truth };

struct SigmaSchedule {
  double grow = 1.25;
  double shrink = 0.8;
  double cap = 1e-2;
  double floor = 1e-5;
  double low_ratio = 0.2;
  double high_ratio = 5.0;
};

struct SolverConfig {
  double mu = 3.0;
  double lambda_detail = 0.5;  // wavelet weight on the three detail bands; LL is unweighted
  double sigma0 = 5e-3;
  double tau = 1.618;
  double rho = 1.4;
  double tau1 = 8.0;
  double tau2 = 10.0 / 9.0;
  double tau3 = 10.0 / 9.0;
  double tol_relerr = 1e-4;  // <= 0 disables
  double tol_rlne = 5e-3;    // <= 0 disables; only active with ground truth
  int max_iter = 300;
  SigmaSchedule schedule{};
  Step4Anchor step4_anchor = Step4Anchor::derived;
  int refresh_interval = 50;
  bool normalized_eta_d = false;
  bool magnitude_metrics = false;
  RlneDenominator rlne_denominator = RlneDenominator::reconstruction;
  double psnr_scale = 1.0;  // intensity multiplier applied before PSNR (255 for 8-bit scale)

  /// Throws ParameterError when any parameter is outside its admissible range.
  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double sigma = 0.0;
  std::optional<double> psnr;
  std::optional<double> rlne;
  double eta_p = 0.0;
  double eta_d = 0.0;
  double eta_1 = 0.0;
  double eta_2 = 0.0;
  double relerr = 0.0;
  double time_s = 0.0;
};

using IterationTrace = std::vector<TraceRow>;

// Real inner product on the complexified space: Re(sum conj(x_i) y_i).
double inner(std::span<const Complex> x, std::span<const Complex> y);
double norm(std::span<const Complex> x);

void require_length(std::span<const Complex> v, std::size_t expected, const char* what);

}  // namespace duadmm
