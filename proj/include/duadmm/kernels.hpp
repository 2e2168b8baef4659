#pragma once

// Data-parallel inner loops. Every kernel exists twice with identical
// signatures: a plain serial reference and an OpenMP version. Tests hold the
// two against each other; the solver picks one through KernelTable.
//
// Layouts: images are column-major (i + j*rows). Gradients are [vertical;
// horizontal], each of length d. Wavelet coefficients are [LL; LH; HL; HH]
// where the first letter names the filter along rows (vertical direction).
//
// Element-wise kernels allow out to alias an input of the same length.

#include <span>

#include "duadmm/model.hpp"

namespace duadmm {

enum class ExecPolicy { serial, parallel };

#define DUADMM_KERNEL_DECLS                                                                     \
  void grad(GridShape shape, std::span<const Complex> u, std::span<Complex> out);               \
  void grad_adjoint(GridShape shape, std::span<const Complex> x, std::span<Complex> out);       \
  void haar(GridShape shape, std::span<const Complex> u, std::span<Complex> out);               \
  void haar_adjoint(GridShape shape, std::span<const Complex> x, std::span<Complex> out);       \
  void project_group_l2(std::span<const Complex> y, double radius, std::span<Complex> out);     \
  void project_box_linf(std::span<const Complex> y, std::span<const double> radii,              \
                        std::span<Complex> out);                                                \
  void axpby(double a, std::span<const Complex> x, double b, std::span<const Complex> y,        \
             std::span<Complex> out);                                                           \
  void lincomb3(double a, std::span<const Complex> x, double b, std::span<const Complex> y,     \
                double c, std::span<const Complex> z, std::span<Complex> out);                  \
  void sum3_plus_scaled(std::span<const Complex> a, std::span<const Complex> b,                 \
                        std::span<const Complex> c, double s, std::span<const Complex> v,       \
                        std::span<Complex> out);                                                \
  double squared_norm(std::span<const Complex> x);                                              \
  double squared_distance(std::span<const Complex> x, std::span<const Complex> y);              \
  double inner(std::span<const Complex> x, std::span<const Complex> y);

namespace kernels {
namespace serial {
DUADMM_KERNEL_DECLS
}  // namespace serial

namespace parallel {
DUADMM_KERNEL_DECLS

// Reductions are summed over fixed-size chunks and then combined in chunk
// order, so the result does not depend on the thread count.
inline constexpr std::size_t kReductionChunk = 4096;
}  // namespace parallel
}  // namespace kernels

#undef DUADMM_KERNEL_DECLS

struct KernelTable {
  void (*grad)(GridShape, std::span<const Complex>, std::span<Complex>);
  void (*grad_adjoint)(GridShape, std::span<const Complex>, std::span<Complex>);
  void (*haar)(GridShape, std::span<const Complex>, std::span<Complex>);
  void (*haar_adjoint)(GridShape, std::span<const Complex>, std::span<Complex>);
  void (*project_group_l2)(std::span<const Complex>, double, std::span<Complex>);
  void (*project_box_linf)(std::span<const Complex>, std::span<const double>, std::span<Complex>);
  void (*axpby)(double, std::span<const Complex>, double, std::span<const Complex>, std::span<Complex>);
  void (*lincomb3)(double, std::span<const Complex>, double, std::span<const Complex>, double,
                   std::span<const Complex>, std::span<Complex>);
  void (*sum3_plus_scaled)(std::span<const Complex>, std::span<const Complex>, std::span<const Complex>,
                           double, std::span<const Complex>, std::span<Complex>);
  double (*squared_norm)(std::span<const Complex>);
  double (*squared_distance)(std::span<const Complex>, std::span<const Complex>);
  double (*inner)(std::span<const Complex>, std::span<const Complex>);
};

const KernelTable& kernel_table(ExecPolicy policy);

}  // namespace duadmm
