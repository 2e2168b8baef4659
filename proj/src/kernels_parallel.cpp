#include <cmath>
#include <vector>

#include <omp.h>

#include "duadmm/kernels.hpp"

namespace duadmm::kernels::parallel {

namespace {

// Don't spin up a team for vectors this short.
constexpr std::size_t kMinParallel = 8192;

template <class ChunkSum>
double chunked_reduce(std::size_t n, ChunkSum&& chunk_sum) {
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * kReductionChunk;
    const std::size_t hi = std::min(n, lo + kReductionChunk);
    partial[c] = chunk_sum(lo, hi);
  }
  double acc = 0.0;
  for (double v : partial) acc += v;
  return acc;
}

}  // namespace

void grad(GridShape shape, std::span<const Complex> u, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
#pragma omp parallel for schedule(static) if (d >= kMinParallel)
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j1 = (j + 1 == n) ? 0 : j + 1;
    const Complex* col = &u[j * m];
    const Complex* next = &u[j1 * m];
    Complex* vert = &out[j * m];
    Complex* horz = &out[d + j * m];
    for (std::size_t i = 0; i + 1 < m; ++i) {
      vert[i] = col[i + 1] - col[i];
      horz[i] = next[i] - col[i];
    }
    vert[m - 1] = col[0] - col[m - 1];
    horz[m - 1] = next[m - 1] - col[m - 1];
  }
}

void grad_adjoint(GridShape shape, std::span<const Complex> x, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
#pragma omp parallel for schedule(static) if (d >= kMinParallel)
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j == 0) ? n - 1 : j - 1;
    const Complex* vert = &x[j * m];
    const Complex* horz = &x[d + j * m];
    const Complex* horz_prev = &x[d + jm * m];
    Complex* o = &out[j * m];
    o[0] = vert[m - 1] - vert[0] + horz_prev[0] - horz[0];
    for (std::size_t i = 1; i < m; ++i) {
      o[i] = vert[i - 1] - vert[i] + horz_prev[i] - horz[i];
    }
  }
}

void haar(GridShape shape, std::span<const Complex> u, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
#pragma omp parallel for schedule(static) if (d >= kMinParallel)
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j1 = (j + 1 == n) ? 0 : j + 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t i1 = (i + 1 == m) ? 0 : i + 1;
      const Complex a = u[i + j * m], b = u[i1 + j * m];
      const Complex c = u[i + j1 * m], e = u[i1 + j1 * m];
      const std::size_t k = i + j * m;
      out[k] = 0.25 * (a + b + c + e);
      out[d + k] = 0.25 * (a + b - c - e);
      out[2 * d + k] = 0.25 * (a - b + c - e);
      out[3 * d + k] = 0.25 * (a - b - c + e);
    }
  }
}

void haar_adjoint(GridShape shape, std::span<const Complex> x, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
#pragma omp parallel for schedule(static) if (d >= kMinParallel)
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j == 0) ? n - 1 : j - 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t im = (i == 0) ? m - 1 : i - 1;
      const std::size_t k00 = i + j * m, k10 = im + j * m, k01 = i + jm * m, k11 = im + jm * m;
      Complex acc = x[k00] + x[d + k00] + x[2 * d + k00] + x[3 * d + k00];
      acc += x[k10] + x[d + k10] - x[2 * d + k10] - x[3 * d + k10];
      acc += x[k01] - x[d + k01] + x[2 * d + k01] - x[3 * d + k01];
      acc += x[k11] - x[d + k11] - x[2 * d + k11] + x[3 * d + k11];
      out[k00] = 0.25 * acc;
    }
  }
}

void project_group_l2(std::span<const Complex> y, double radius, std::span<Complex> out) {
  const std::size_t d = y.size() / 2;
#pragma omp parallel for schedule(static) if (d >= kMinParallel)
  for (std::size_t k = 0; k < d; ++k) {
    const Complex a = y[k], b = y[d + k];
    const double r = std::sqrt(std::norm(a) + std::norm(b));
    if (r > radius) {
      const double s = radius / r;
      out[k] = a * s;
      out[d + k] = b * s;
    } else {
      out[k] = a;
      out[d + k] = b;
    }
  }
}

void project_box_linf(std::span<const Complex> y, std::span<const double> radii, std::span<Complex> out) {
  const std::size_t n = y.size();
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(y[k]);
    out[k] = (a > radii[k]) ? y[k] * (radii[k] / a) : y[k];
  }
}

void axpby(double a, std::span<const Complex> x, double b, std::span<const Complex> y, std::span<Complex> out) {
  const std::size_t n = x.size();
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::size_t k = 0; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

void lincomb3(double a, std::span<const Complex> x, double b, std::span<const Complex> y, double c,
              std::span<const Complex> z, std::span<Complex> out) {
  const std::size_t n = x.size();
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::size_t k = 0; k < n; ++k) out[k] = a * x[k] + b * y[k] + c * z[k];
}

void sum3_plus_scaled(std::span<const Complex> a, std::span<const Complex> b, std::span<const Complex> c,
                      double s, std::span<const Complex> v, std::span<Complex> out) {
  const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + b[k] + c[k] + s * v[k];
}

double squared_norm(std::span<const Complex> x) {
  return chunked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += std::norm(x[k]);
    return acc;
  });
}

double squared_distance(std::span<const Complex> x, std::span<const Complex> y) {
  return chunked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += std::norm(x[k] - y[k]);
    return acc;
  });
}

double inner(std::span<const Complex> x, std::span<const Complex> y) {
  return chunked_reduce(x.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      acc += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    }
    return acc;
  });
}

}  // namespace duadmm::kernels::parallel

namespace duadmm {

namespace {

#define DUADMM_TABLE(ns)                                                                             \
  KernelTable {                                                                                      \
    &ns::grad, &ns::grad_adjoint, &ns::haar, &ns::haar_adjoint, &ns::project_group_l2,               \
        &ns::project_box_linf, &ns::axpby, &ns::lincomb3, &ns::sum3_plus_scaled, &ns::squared_norm, \
        &ns::squared_distance, &ns::inner                                                            \
  }

const KernelTable kSerialTable = DUADMM_TABLE(kernels::serial);
const KernelTable kParallelTable = DUADMM_TABLE(kernels::parallel);

#undef DUADMM_TABLE

}  // namespace

const KernelTable& kernel_table(ExecPolicy policy) {
  return policy == ExecPolicy::serial ? kSerialTable : kParallelTable;
}

}  // namespace duadmm
