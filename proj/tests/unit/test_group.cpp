#include <doctest.h>

#include <random>

#include "nilmult/group.hpp"

using namespace nilmult;

namespace {

std::mt19937_64 rng(42);

Vector3d random_vec(double bound) {
  std::uniform_real_distribution<double> u(-bound, bound);
  return {u(rng), u(rng), u(rng)};
}

Point random_point(double bound) { return {random_vec(bound), random_vec(bound)}; }

double gap(const Point &a, const Point &b) {
  return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.y - b.y).cwiseAbs().maxCoeff());
}

} // namespace

TEST_CASE("group law") {
  SUBCASE("product by hand") {
    const Point p{{1, 0, 0}, {0, 0, 0}}, q{{0, 1, 0}, {0, 0, 0}};
    const Point pq = multiply(p, q);
    CHECK(pq.x == Vector3d(1, 1, 0));
    CHECK(pq.y == Vector3d(0, 0, 0.5));
    CHECK(multiply(q, p).y == Vector3d(0, 0, -0.5));
  }
  SUBCASE("associativity on 1000 triples") {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const Point p = random_point(10), q = random_point(10), r = random_point(10);
      worst = std::max(worst, gap(multiply(multiply(p, q), r), multiply(p, multiply(q, r))));
    }
    CHECK(worst <= 1e-12);
  }
  SUBCASE("identity and inverse") {
    const Point p = random_point(5);
    CHECK(multiply(p, Point::identity()) == p);
    CHECK(gap(multiply(inverse(p), p), Point{}) <= 1e-15);
  }
}

TEST_CASE("dilations") {
  for (int i = 0; i < 100; ++i) {
    const Point p = random_point(4), q = random_point(4);
    const double t = std::exp(std::uniform_real_distribution<double>(-3, 3)(rng));
    CHECK(homogeneous_norm(dilate(t, p)) == doctest::Approx(t * homogeneous_norm(p)).epsilon(1e-12));
    CHECK(gap(dilate(t, multiply(p, q)), multiply(dilate(t, p), dilate(t, q))) <=
          1e-12 * std::max(1.0, t * t) * 50);
  }
  CHECK(homogeneous_norm(Point{{3, 4, 0}, {0, 0, 4}}) == doctest::Approx(7.0));
}

TEST_CASE("rotations act by automorphisms") {
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Matrix3d r = axis_rotation(random_vec(1), std::uniform_real_distribution<double>(-3, 3)(rng));
    REQUIRE(is_rotation(r));
    const Point p = random_point(10), q = random_point(10);
    worst = std::max(worst, gap(rotate(r, multiply(p, q)), multiply(rotate(r, p), rotate(r, q))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("improper or inexact matrices are rejected") {
  Matrix3d reflect = Matrix3d::Identity();
  reflect(0, 0) = -1;
  CHECK_FALSE(is_rotation(reflect));
  CHECK_THROWS_AS(rotate(reflect, Point{}), std::invalid_argument);
  Matrix3d sloppy = axis_rotation(Vector3d(Vector3d::UnitZ()), 0.3);
  sloppy(0, 1) += 1e-9;
  CHECK_THROWS_AS(rotate(sloppy, Point{}), std::invalid_argument);
}
