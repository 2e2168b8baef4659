#include "duadmm/proximal.hpp"

#include <algorithm>

namespace duadmm {

void project_group_l2(std::span<const Complex> y, double mu, std::span<Complex> out, ExecPolicy policy) {
  if (!(mu > 0.0)) throw ParameterError("group ball radius must be positive");
  if (y.size() % 2 != 0) throw DimensionError("group projection needs an even-length vector");
  require_length(out, y.size(), "project_group_l2 output");
  kernel_table(policy).project_group_l2(y, mu, out);
}

CVector project_group_l2(std::span<const Complex> y, double mu, ExecPolicy policy) {
  CVector out(y.size());
  project_group_l2(y, mu, out, policy);
  return out;
}

void project_box_linf(std::span<const Complex> y, std::span<const double> lambda, std::span<Complex> out,
                      ExecPolicy policy) {
  if (lambda.size() != y.size()) throw DimensionError("box radii length does not match input");
  require_length(out, y.size(), "project_box_linf output");
  if (std::any_of(lambda.begin(), lambda.end(), [](double r) { return !(r >= 0.0); })) {
    throw ParameterError("box radii must be nonnegative");
  }
  kernel_table(policy).project_box_linf(y, lambda, out);
}

CVector project_box_linf(std::span<const Complex> y, std::span<const double> lambda, ExecPolicy policy) {
  CVector out(y.size());
  project_box_linf(y, lambda, out, policy);
  return out;
}

}  // namespace duadmm
