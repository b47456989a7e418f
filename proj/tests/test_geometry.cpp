#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pumptrack/geometry.hpp"

using namespace pumptrack;

namespace {

const TrackGeometry kGeom{};  // R=3, r=1, lambda=3

void check_vec(const Vec3& got, double x1, double x2, double x3, double tol = 1e-12) {
  CHECK(got.x1 == doctest::Approx(x1).epsilon(0.0).scale(1.0));
  CHECK(std::abs(got.x1 - x1) < tol);
  CHECK(std::abs(got.x2 - x2) < tol);
  CHECK(std::abs(got.x3 - x3) < tol);
}

// Central finite difference of a position path, the independent check for
// the closed-form velocities.
template <typename PosFn>
Vec3 fd_velocity(PosFn pos, double t, double eps = 1e-6) {
  const Vec3 a = pos(t - eps);
  const Vec3 b = pos(t + eps);
  return (b - a) * (1.0 / (2.0 * eps));
}

double rel_err(const Vec3& got, const Vec3& want) {
  const double scale = std::max(1.0, norm(want));
  return norm(got - want) / scale;
}

}  // namespace

TEST_CASE("TrackGeometry invariants") {
  CHECK_NOTHROW(kGeom.validate());
  CHECK_THROWS_AS(TrackGeometry{1.0, 2.0, 3.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(TrackGeometry{3.0, -1.0, 3.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(TrackGeometry{3.0, 1.0, 0.5}.validate(), std::invalid_argument);
}

TEST_CASE("SurfaceCoord reduces theta into [0, 2pi)") {
  CHECK(SurfaceCoord(0.0, -pi / 2).theta == doctest::Approx(1.5 * pi));
  CHECK(SurfaceCoord(0.0, 2.0 * pi).theta == doctest::Approx(0.0));
  CHECK(SurfaceCoord(0.0, 7.0).theta == doctest::Approx(7.0 - 2.0 * pi));
}

TEST_CASE("path_theta values and range") {
  CHECK(path_theta(0.0) == doctest::Approx(pi / 2));
  CHECK(path_theta(pi / 2) == doctest::Approx(0.0));
  CHECK(path_theta(pi / 4) == doctest::Approx(pi / 4));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dphi(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double phi = dphi(rng);
    const double b = path_theta(phi);
    CHECK(b >= 0.0);
    CHECK(b <= pi / 2 + 1e-15);
    CHECK(path_theta(phi + pi) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("path_theta_prime values and consistency with path_theta") {
  CHECK(path_theta_prime(0.0) == doctest::Approx(0.0));
  CHECK(path_theta_prime(pi / 4) == doctest::Approx(-pi / 2));
  CHECK(path_theta_prime(pi / 2) == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  const double eps = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double phi = dphi(rng);
    const double fd = (path_theta(phi + eps) - path_theta(phi - eps)) / (2.0 * eps);
    CHECK(path_theta_prime(phi) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("surface_point pins the torus chart") {
  check_vec(surface_point(kGeom, {0.0, pi / 2}), 3.0, 0.0, 0.0);
  check_vec(surface_point(kGeom, {0.0, 0.0}), 4.0, 0.0, 1.0);
  check_vec(surface_point(kGeom, {pi / 2, 0.0}), 0.0, 10.0, 1.0, 1e-11);
}

TEST_CASE("bike_position sits on the path") {
  check_vec(bike_position(kGeom, 0.0), 3.0, 0.0, 0.0);
  check_vec(bike_position(kGeom, pi / 2), 0.0, 10.0, 1.0, 1e-11);
  check_vec(bike_position(kGeom, pi), -3.0, 0.0, 0.0, 1e-11);

  // Same chart, same point: bike_position is surface_point at (phi, b(phi)).
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double phi = dphi(rng);
    const Vec3 a = bike_position(kGeom, phi);
    const Vec3 b = surface_point_at(kGeom, phi, path_theta(phi));
    CHECK(norm(a - b) <= 1e-15);
  }
}

TEST_CASE("rider_position offsets the bike by exactly l") {
  check_vec(rider_position(kGeom, 0.0, 0.5), 3.0, 0.0, 0.5);
  check_vec(rider_position(kGeom, pi / 2, 0.5), 0.0, 9.5, 1.0, 1e-11);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  std::uniform_real_distribution<double> dl(0.05, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double phi = dphi(rng);
    const double l = dl(rng);
    const double dist = norm(rider_position(kGeom, phi, l) - bike_position(kGeom, phi));
    CHECK(std::abs(dist - l) <= 1e-12 * std::max(1.0, l));
  }
}

TEST_CASE("bike_velocity: start speed and linearity in phidot") {
  const Vec3 v0 = bike_velocity(kGeom, 0.0, pi / 3);
  check_vec(v0, 0.0, 3.0 * pi, 0.0, 1e-12);
  CHECK(norm(v0) == doctest::Approx(9.4248).epsilon(1e-4));

  check_vec(bike_velocity(kGeom, 1.234, 0.0), 0.0, 0.0, 0.0);

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  std::uniform_real_distribution<double> drate(-3.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const double phi = dphi(rng), rate = drate(rng);
    const Vec3 v1 = bike_velocity(kGeom, phi, rate);
    const Vec3 v2 = bike_velocity(kGeom, phi, 2.0 * rate);
    CHECK(norm(v2 - v1 * 2.0) <= 1e-12 * std::max(1.0, norm(v1)));
  }
}

TEST_CASE("bike_velocity matches finite differences of bike_position") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  std::uniform_real_distribution<double> drate(-3.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const double phi0 = dphi(rng), rate = drate(rng);
    const Vec3 v = bike_velocity(kGeom, phi0, rate);
    const Vec3 fd =
        fd_velocity([&](double t) { return bike_position(kGeom, phi0 + rate * t); }, 0.0);
    CHECK(rel_err(v, fd) < 1e-6);
  }
}

TEST_CASE("rider_velocity: pinned cases") {
  // At phi=0 the link is vertical, so the l-offset does not alter the
  // horizontal radius and the rider moves with the bike.
  check_vec(rider_velocity(kGeom, 0.0, pi / 3, 0.4368, 0.0), 0.0, 3.0 * pi, 0.0, 1e-12);
  // Pure link extension at phi=0 points along +z.
  check_vec(rider_velocity(kGeom, 0.0, 0.0, 0.4368, 1.0), 0.0, 0.0, 1.0);
}

TEST_CASE("rider_velocity matches finite differences of rider_position") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  std::uniform_real_distribution<double> drate(-3.0, 3.0);
  std::uniform_real_distribution<double> dl(0.1, 1.2);
  std::uniform_real_distribution<double> dldot(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const double phi0 = dphi(rng), rate = drate(rng);
    const double l0 = dl(rng), lrate = dldot(rng);
    const Vec3 v = rider_velocity(kGeom, phi0, rate, l0, lrate);
    const Vec3 fd = fd_velocity(
        [&](double t) { return rider_position(kGeom, phi0 + rate * t, l0 + lrate * t); },
        0.0);
    CHECK(rel_err(v, fd) < 1e-6);
  }
}

TEST_CASE("rider_velocity is jointly linear in (phidot, ldot)") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dphi(-10.0, 10.0);
  std::uniform_real_distribution<double> drate(-3.0, 3.0);
  std::uniform_real_distribution<double> dl(0.1, 1.2);
  for (int i = 0; i < 300; ++i) {
    const double phi = dphi(rng), l = dl(rng);
    const double a = drate(rng), b = drate(rng);
    const double c = drate(rng), d = drate(rng);
    const Vec3 vab = rider_velocity(kGeom, phi, a, l, b);
    const Vec3 vcd = rider_velocity(kGeom, phi, c, l, d);
    const Vec3 vsum = rider_velocity(kGeom, phi, a + c, l, b + d);
    CHECK(norm(vsum - (vab + vcd)) <= 1e-11 * std::max(1.0, norm(vsum)));
  }
}
