#pragma once

#include <memory>
#include <span>

#include "duadmm/model.hpp"

namespace duadmm {

/// Unitary 2-D DFT (scale 1/sqrt(d) both ways) on column-major grids.
/// Backed by FFTW; execution is safe from several threads at once.
class UnitaryFft2d {
 public:
  explicit UnitaryFft2d(GridShape shape);
  ~UnitaryFft2d();
  UnitaryFft2d(UnitaryFft2d&&) noexcept;
  UnitaryFft2d& operator=(UnitaryFft2d&&) noexcept;
  UnitaryFft2d(const UnitaryFft2d&) = delete;
  UnitaryFft2d& operator=(const UnitaryFft2d&) = delete;

  GridShape shape() const { return shape_; }

  // out may alias in.
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  struct Plans;
  GridShape shape_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace duadmm
