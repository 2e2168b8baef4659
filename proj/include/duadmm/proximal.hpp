#pragma once

#include <span>

#include "duadmm/kernels.hpp"
#include "duadmm/model.hpp"

namespace duadmm {

// Projection onto {y in C^{2d} : |(y_i, y_{d+i})| <= mu for every i}.
// Groups pair entry i with entry d+i. Throws ParameterError unless mu > 0.
CVector project_group_l2(std::span<const Complex> y, double mu, ExecPolicy policy = ExecPolicy::parallel);
void project_group_l2(std::span<const Complex> y, double mu, std::span<Complex> out,
                      ExecPolicy policy = ExecPolicy::parallel);

// Projection onto {y : |y_i| <= lambda_i}: clamps the modulus, keeps the phase.
// A zero radius forces the entry to zero. Throws ParameterError on negative radii.
CVector project_box_linf(std::span<const Complex> y, std::span<const double> lambda,
                         ExecPolicy policy = ExecPolicy::parallel);
void project_box_linf(std::span<const Complex> y, std::span<const double> lambda, std::span<Complex> out,
                      ExecPolicy policy = ExecPolicy::parallel);

}  // namespace duadmm
