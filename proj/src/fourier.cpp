#include "duadmm/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace duadmm {

namespace {
// The FFTW planner is not reentrant; plan creation and destruction share this lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct UnitaryFft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double scale = 1.0;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

UnitaryFft2d::UnitaryFft2d(GridShape shape) : shape_(shape), plans_(std::make_unique<Plans>()) {
  if (shape.rows < 1 || shape.cols < 1) throw DimensionError("empty FFT grid");
  CVector scratch(shape.size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  // Column-major rows x cols is row-major cols x rows to FFTW.
  const int n0 = static_cast<int>(shape.cols), n1 = static_cast<int>(shape.rows);
  {
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->inverse = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (!plans_->forward || !plans_->inverse) throw Error("FFTW planning failed");
  plans_->scale = 1.0 / std::sqrt(static_cast<double>(shape.size()));
}

UnitaryFft2d::~UnitaryFft2d() = default;
UnitaryFft2d::UnitaryFft2d(UnitaryFft2d&&) noexcept = default;
UnitaryFft2d& UnitaryFft2d::operator=(UnitaryFft2d&&) noexcept = default;

static void run_plan(fftw_plan plan, double scale, std::span<const Complex> in, std::span<Complex> out) {
  if (out.data() != in.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, buf, buf);
  for (Complex& z : out) z *= scale;
}

void UnitaryFft2d::forward(std::span<const Complex> in, std::span<Complex> out) const {
  require_length(in, shape_.size(), "fft forward input");
  require_length(out, shape_.size(), "fft forward output");
  run_plan(plans_->forward, plans_->scale, in, out);
}

void UnitaryFft2d::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  require_length(in, shape_.size(), "fft inverse input");
  require_length(out, shape_.size(), "fft inverse output");
  run_plan(plans_->inverse, plans_->scale, in, out);
}

}  // namespace duadmm
