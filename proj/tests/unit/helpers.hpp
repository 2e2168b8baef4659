#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "duadmm/model.hpp"

namespace duadmm::test {

inline CVector random_vector(std::size_t n, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CVector v(n);
  for (auto& z : v) z = Complex(g(gen), g(gen));
  return v;
}

inline SamplingMask random_mask(GridShape shape, double rate, std::mt19937_64& gen) {
  std::bernoulli_distribution pick(rate);
  std::vector<std::uint8_t> bits(shape.size());
  for (auto& b : bits) b = pick(gen) ? 1 : 0;
  bits[(shape.rows / 2) * shape.cols + shape.cols / 2] = 1;
  return SamplingMask(shape, bits);
}

inline double rel_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace duadmm::test
