#include <doctest.h>

#include "duadmm/kernels.hpp"
#include "helpers.hpp"

using namespace duadmm;

namespace {
const KernelTable& S = kernel_table(ExecPolicy::serial);
const KernelTable& P = kernel_table(ExecPolicy::parallel);
}  // namespace

TEST_CASE("parallel stencils match the serial reference bitwise") {
  std::mt19937_64 gen(11);
  for (GridShape g : {GridShape{128, 128}, GridShape{96, 200}, GridShape{3, 5}}) {
    const std::size_t d = g.size();
    const CVector u = test::random_vector(d, gen);
    const CVector x1 = test::random_vector(2 * d, gen);
    const CVector x2 = test::random_vector(4 * d, gen);
    CVector a(2 * d), b(2 * d), c(4 * d), e(4 * d), f(d), h(d);

    S.grad(g, u, a);
    P.grad(g, u, b);
    CHECK(a == b);
    S.grad_adjoint(g, x1, f);
    P.grad_adjoint(g, x1, h);
    CHECK(f == h);
    S.haar(g, u, c);
    P.haar(g, u, e);
    CHECK(c == e);
    S.haar_adjoint(g, x2, f);
    P.haar_adjoint(g, x2, h);
    CHECK(f == h);
  }
}

TEST_CASE("parallel projections and vector updates match bitwise") {
  std::mt19937_64 gen(12);
  const std::size_t n = 50000;
  const CVector y = test::random_vector(n, gen, 2.0), z = test::random_vector(n, gen), w = test::random_vector(n, gen);
  RVector radii(n);
  for (std::size_t i = 0; i < n; ++i) radii[i] = i % 3 == 0 ? 0.0 : 0.5;
  CVector a(n), b(n);

  S.project_group_l2(y, 1.3, a);
  P.project_group_l2(y, 1.3, b);
  CHECK(a == b);
  S.project_box_linf(y, radii, a);
  P.project_box_linf(y, radii, b);
  CHECK(a == b);
  S.axpby(0.3, y, -1.7, z, a);
  P.axpby(0.3, y, -1.7, z, b);
  CHECK(a == b);
  S.lincomb3(1.0, y, -0.9, z, 4.0, w, a);
  P.lincomb3(1.0, y, -0.9, z, 4.0, w, b);
  CHECK(a == b);
  S.sum3_plus_scaled(y, z, w, -200.0, y, a);
  P.sum3_plus_scaled(y, z, w, -200.0, y, b);
  CHECK(a == b);
}

TEST_CASE("parallel reductions agree with serial and are reproducible") {
  std::mt19937_64 gen(13);
  const std::size_t n = 70001;
  const CVector x = test::random_vector(n, gen), y = test::random_vector(n, gen);
  CHECK(P.squared_norm(x) == doctest::Approx(S.squared_norm(x)).epsilon(1e-13));
  CHECK(P.squared_distance(x, y) == doctest::Approx(S.squared_distance(x, y)).epsilon(1e-13));
  CHECK(P.inner(x, y) == doctest::Approx(S.inner(x, y)).epsilon(1e-10));
  const double first = P.inner(x, y);
  for (int k = 0; k < 5; ++k) CHECK(P.inner(x, y) == first);
}

TEST_CASE("in-place calls are allowed for elementwise kernels") {
  std::mt19937_64 gen(14);
  CVector v = test::random_vector(20000, gen, 3.0);
  CVector expect(v.size());
  S.project_group_l2(v, 1.0, expect);
  P.project_group_l2(v, 1.0, v);
  CHECK(v == expect);
}
