#include <doctest.h>

#include "duadmm/proximal.hpp"
#include "helpers.hpp"
#include "properties.hpp"

using namespace duadmm;

TEST_CASE("group projection on hand-picked pairs") {
  // d = 2: groups (y0, y2) and (y1, y3).
  const CVector y{{3.0, 0.0}, {0.3, 0.0}, {0.0, 4.0}, {0.0, 0.4}};
  const CVector p = project_group_l2(y, 1.0);
  CHECK(p[0].real() == doctest::Approx(0.6));
  CHECK(p[2].imag() == doctest::Approx(0.8));
  CHECK(p[1] == y[1]);  // |(0.3, 0.4i)| = 0.5 <= 1 is untouched
  CHECK(p[3] == y[3]);
}

TEST_CASE("box projection keeps the phase and zeroes unit-free entries") {
  const CVector y{{3.0, 4.0}, {0.1, -0.1}, {-2.0, 0.0}};
  const RVector lam{1.0, 0.5, 0.0};
  const CVector p = project_box_linf(y, lam);
  CHECK(p[0].real() == doctest::Approx(0.6));
  CHECK(p[0].imag() == doctest::Approx(0.8));
  CHECK(p[1] == y[1]);
  CHECK(p[2] == Complex(0.0, 0.0));
}

TEST_CASE("projection properties over random points") {
  const auto group = oracle::measure_group_projection(1000, 21);
  CHECK(group.feasibility <= 1e-14);
  CHECK(group.idempotence <= 1e-14);
  CHECK(group.expansion <= 1e-12);
  CHECK(group.variational <= 1e-12);

  const auto box = oracle::measure_box_projection(1000, 22);
  CHECK(box.feasibility <= 1e-14);
  CHECK(box.idempotence <= 1e-14);
  CHECK(box.expansion <= 1e-12);
  CHECK(box.variational <= 1e-12);
  CHECK(box.zero_radius_exact);
}

TEST_CASE("serial and parallel projections agree") {
  std::mt19937_64 gen(23);
  const CVector y = test::random_vector(40000, gen, 2.0);
  RVector lam(40000, 0.5);
  CHECK(project_group_l2(y, 2.0, ExecPolicy::serial) == project_group_l2(y, 2.0, ExecPolicy::parallel));
  CHECK(project_box_linf(y, lam, ExecPolicy::serial) == project_box_linf(y, lam, ExecPolicy::parallel));
}

TEST_CASE("projection argument validation") {
  CVector odd(3), out(4);
  CHECK_THROWS_AS(project_group_l2(odd, 1.0), DimensionError);
  CHECK_THROWS_AS(project_group_l2(CVector(4), 0.0), ParameterError);
  CHECK_THROWS_AS(project_box_linf(CVector(2), RVector{1.0}), DimensionError);
  CHECK_THROWS_AS(project_box_linf(CVector(2), RVector{1.0, -1.0}), ParameterError);
  CHECK_THROWS_AS(project_group_l2(CVector(4), 1.0, std::span<Complex>(out.data(), 2)), DimensionError);
}
