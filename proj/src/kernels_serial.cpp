#include <cmath>

#include "duadmm/kernels.hpp"

namespace duadmm::kernels::serial {

void grad(GridShape shape, std::span<const Complex> u, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j1 = (j + 1 == n) ? 0 : j + 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t i1 = (i + 1 == m) ? 0 : i + 1;
      const Complex here = u[i + j * m];
      out[i + j * m] = u[i1 + j * m] - here;
      out[d + i + j * m] = u[i + j1 * m] - here;
    }
  }
}

void grad_adjoint(GridShape shape, std::span<const Complex> x, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j == 0) ? n - 1 : j - 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t im = (i == 0) ? m - 1 : i - 1;
      out[i + j * m] = x[im + j * m] - x[i + j * m] + x[d + i + jm * m] - x[d + i + j * m];
    }
  }
}

void haar(GridShape shape, std::span<const Complex> u, std::span<Complex> out) {
  const std::size_t m = shape.rows, n = shape.cols, d = shape.size();
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
  auto band = [&](std::size_t s, std::size_t i, std::size_t j) { return x[s * d + i + j * m]; };
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j == 0) ? n - 1 : j - 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t im = (i == 0) ? m - 1 : i - 1;
      Complex acc = band(0, i, j) + band(1, i, j) + band(2, i, j) + band(3, i, j);
      acc += band(0, im, j) + band(1, im, j) - band(2, im, j) - band(3, im, j);
      acc += band(0, i, jm) - band(1, i, jm) + band(2, i, jm) - band(3, i, jm);
      acc += band(0, im, jm) - band(1, im, jm) - band(2, im, jm) + band(3, im, jm);
      out[i + j * m] = 0.25 * acc;
    }
  }
}

void project_group_l2(std::span<const Complex> y, double radius, std::span<Complex> out) {
  const std::size_t d = y.size() / 2;
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
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double a = std::abs(y[k]);
    out[k] = (a > radii[k]) ? y[k] * (radii[k] / a) : y[k];
  }
}

void axpby(double a, std::span<const Complex> x, double b, std::span<const Complex> y, std::span<Complex> out) {
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = a * x[k] + b * y[k];
}

void lincomb3(double a, std::span<const Complex> x, double b, std::span<const Complex> y, double c,
              std::span<const Complex> z, std::span<Complex> out) {
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = a * x[k] + b * y[k] + c * z[k];
}

void sum3_plus_scaled(std::span<const Complex> a, std::span<const Complex> b, std::span<const Complex> c,
                      double s, std::span<const Complex> v, std::span<Complex> out) {
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k] + c[k] + s * v[k];
}

double squared_norm(std::span<const Complex> x) {
  double acc = 0.0;
  for (const Complex& z : x) acc += std::norm(z);
  return acc;
}

double squared_distance(std::span<const Complex> x, std::span<const Complex> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::norm(x[k] - y[k]);
  return acc;
}

double inner(std::span<const Complex> x, std::span<const Complex> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    acc += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
  }
  return acc;
}

}  // namespace duadmm::kernels::serial
