#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pumptrack/dynamics.hpp"

using namespace pumptrack;

namespace {

const TrackGeometry kGeom{};
const SystemParams kParams{};
const State kStart{0.0, pi / 3.0, 0.43681, 0.0};

struct RandomState {
  std::mt19937 rng{12345};
  std::uniform_real_distribution<double> dphi{0.0, 2.0 * pi};
  std::uniform_real_distribution<double> dl{0.278, 0.596};
  std::uniform_real_distribution<double> dphidot{-3.0, 3.0};
  std::uniform_real_distribution<double> dldot{-2.0, 2.0};
  std::uniform_real_distribution<double> du{-9.0, 31.0};
  std::uniform_real_distribution<double> dphiddot{-10.0, 10.0};

  State state() { return {dphi(rng), dphidot(rng), dl(rng), dldot(rng)}; }
};

// Coefficients recovered from the numeric Euler-Lagrange residual alone:
// the residual is M*phidd + F*phid^2 + Q*phid + P, so probing phidd and
// phid isolates each term without touching the closed forms.
EomCoefficients oracle_coefficients(const State& base, double u) {
  const auto res = [&](double phidot, double phiddot) {
    State s = base;
    s.phidot = phidot;
    return euler_lagrange_residual_numeric(kGeom, kParams, s, phiddot, Control{u});
  };
  EomCoefficients k;
  const double r00 = res(0.0, 0.0);
  k.M = res(0.0, 1.0) - r00;
  k.P = r00;
  const double rp = res(1.0, 0.0), rm = res(-1.0, 0.0);
  k.Q = 0.5 * (rp - rm);
  k.F = 0.5 * (rp + rm) - r00;
  return k;
}

}  // namespace

TEST_CASE("kinetic energy at the scenario start") {
  const double expect = 0.5 * (kParams.m_b + kParams.m_r) * (3.0 * pi) * (3.0 * pi);
  const double got = kinetic_energy(kGeom, kParams, kStart);
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  CHECK(got == doctest::Approx(4219.2).epsilon(1e-4));
}

TEST_CASE("kinetic energy: zero at rest, quadratic in the rates") {
  CHECK(kinetic_energy(kGeom, kParams, {1.1, 0.0, 0.5, 0.0}) == doctest::Approx(0.0));
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_real_distribution<double> dl(0.2, 0.8);
  for (int i = 0; i < 200; ++i) {
    const State s{d(rng), d(rng), dl(rng), d(rng)};
    State s2 = s;
    s2.phidot *= 2.0;
    s2.ldot *= 2.0;
    const double k1 = kinetic_energy(kGeom, kParams, s);
    const double k2 = kinetic_energy(kGeom, kParams, s2);
    CHECK(k2 == doctest::Approx(4.0 * k1).epsilon(1e-12));
  }
}

TEST_CASE("potential energy values") {
  const double u0 = potential_energy(kGeom, kParams, kStart);
  CHECK(u0 == doctest::Approx(kParams.g_grav * kParams.m_r * kStart.l).epsilon(1e-12));
  CHECK(u0 == doctest::Approx(342.7).epsilon(1e-3));

  const State apex{pi / 2, 0.3, 0.5, -0.4};
  const double ua = potential_energy(kGeom, kParams, apex);
  CHECK(ua == doctest::Approx(kParams.g_grav * (kParams.m_b + kParams.m_r)).epsilon(1e-12));
  CHECK(ua == doctest::Approx(931.6).epsilon(1e-3));

  // No dependence on the rates.
  State moved = apex;
  moved.phidot = 2.9;
  moved.ldot = -1.7;
  CHECK(potential_energy(kGeom, kParams, moved) == ua);
}

TEST_CASE("eom_coefficients at phi = 0") {
  const double lam_r = kGeom.lambda * kGeom.R;
  const auto k = eom_coefficients(kGeom, kParams, 0.0, 0.43681, 0.0, 0.0);
  CHECK(k.M ==
        doctest::Approx((kParams.m_b + kParams.m_r) * lam_r * lam_r).epsilon(1e-12));
  CHECK(k.M == doctest::Approx(7695.0).epsilon(1e-12));
  CHECK(k.Q == doctest::Approx(0.0));
  CHECK(k.P == doctest::Approx(0.0));

  // P stays zero at phi = 0 across the l range.
  for (double l : {0.28, 0.4, 0.59}) {
    CHECK(eom_coefficients(kGeom, kParams, 0.0, l, 0.0, 0.0).P == doctest::Approx(0.0));
  }
}

TEST_CASE("eom_coefficients rejects bad input") {
  CHECK_THROWS_AS(eom_coefficients(kGeom, kParams, 0.0, -0.1, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      eom_coefficients(kGeom, kParams, std::nan(""), 0.4, 0.0, 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(eom_coefficients(kGeom, kParams, 0.0, 0.4,
                                   std::numeric_limits<double>::infinity(), 0.0),
                  std::invalid_argument);
}

TEST_CASE("closed forms match the Euler-Lagrange oracle on random states") {
  RandomState gen;
  for (int i = 0; i < 1000; ++i) {
    const State s = gen.state();
    const double u = gen.du(gen.rng);
    const double phiddot = gen.dphiddot(gen.rng);
    const StateRates sdot{s.phidot, phiddot, s.ldot, u};
    const double closed = implicit_residual(kGeom, kParams, sdot, s, Control{u});
    const double oracle = euler_lagrange_residual_numeric(kGeom, kParams, s, phiddot,
                                                          Control{u});
    CHECK(std::abs(oracle - closed) / std::max(1.0, std::abs(closed)) < 1e-4);
  }
}

TEST_CASE("per-coefficient agreement with the oracle") {
  RandomState gen;
  for (int i = 0; i < 50; ++i) {
    const State s = gen.state();
    const double u = gen.du(gen.rng);
    const auto closed = eom_coefficients(kGeom, kParams, s.phi, s.l, s.ldot, u);
    const auto probed = oracle_coefficients(s, u);
    CHECK(std::abs(closed.M - probed.M) / std::max(1.0, std::abs(closed.M)) < 1e-4);
    CHECK(std::abs(closed.F - probed.F) / std::max(1.0, std::abs(closed.F)) < 1e-4);
    CHECK(std::abs(closed.Q - probed.Q) / std::max(1.0, std::abs(closed.Q)) < 1e-4);
    CHECK(std::abs(closed.P - probed.P) / std::max(1.0, std::abs(closed.P)) < 1e-4);
  }
}

TEST_CASE("oracle equilibrium consistency") {
  for (double l : {0.3, 0.43681, 0.55}) {
    const State s{0.0, 0.0, l, 0.0};
    const double r = euler_lagrange_residual_numeric(kGeom, kParams, s, 0.0, Control{0.0});
    CHECK(std::abs(r) < 1e-6);
  }
}

TEST_CASE("structural properties of the coefficients") {
  RandomState gen;
  for (int i = 0; i < 200; ++i) {
    const State s = gen.state();
    const double u = gen.du(gen.rng);

    // Q carries a factor ldot.
    const auto k_rest = eom_coefficients(kGeom, kParams, s.phi, s.l, 0.0, u);
    CHECK(k_rest.Q == doctest::Approx(0.0).epsilon(0.0).scale(1.0));

    // M and F ignore ldot and lddot.
    const auto ka = eom_coefficients(kGeom, kParams, s.phi, s.l, s.ldot, u);
    const auto kb = eom_coefficients(kGeom, kParams, s.phi, s.l, -1.3, u + 2.0);
    CHECK(ka.M == kb.M);
    CHECK(ka.F == kb.F);

    // Q ignores lddot.
    CHECK(ka.Q == eom_coefficients(kGeom, kParams, s.phi, s.l, s.ldot, u - 5.0).Q);

    // pi-periodicity in phi.
    const auto ks = eom_coefficients(kGeom, kParams, s.phi + pi, s.l, s.ldot, u);
    CHECK(ks.M == doctest::Approx(ka.M).epsilon(1e-9));
    CHECK(ks.F == doctest::Approx(ka.F).epsilon(1e-9));
    CHECK(ks.Q == doctest::Approx(ka.Q).epsilon(1e-9));
    CHECK(ks.P == doctest::Approx(ka.P).epsilon(1e-9));
  }
}

TEST_CASE("M stays positive over the operating grid") {
  for (int i = 0; i < 360; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double phi = 2.0 * pi * i / 360.0;
      const double l = 0.278 + (0.596 - 0.278) * j / 49.0;
      CHECK(eom_coefficients(kGeom, kParams, phi, l, 0.0, 0.0).M > 0.0);
    }
  }
}

TEST_CASE("explicit_rhs forms and equilibrium") {
  const State eq{0.0, 0.0, 0.4368, 0.0};
  const StateRates r = explicit_rhs(kGeom, kParams, eq, Control{0.0});
  CHECK(r.phidot == 0.0);
  CHECK(std::abs(r.phiddot) < 1e-12);
  CHECK(r.ldot == 0.0);
  CHECK(r.lddot == 0.0);

  RandomState gen;
  for (int i = 0; i < 200; ++i) {
    const State s = gen.state();
    const double u = gen.du(gen.rng);
    const StateRates rr = explicit_rhs(kGeom, kParams, s, Control{u});
    CHECK(rr.phidot == s.phidot);
    CHECK(rr.ldot == s.ldot);
    CHECK(rr.lddot == u);
    // The explicit form zeroes the implicit residual by construction.
    const double res = implicit_residual(kGeom, kParams, rr, s, Control{u});
    const auto k = eom_coefficients(kGeom, kParams, s.phi, s.l, s.ldot, u);
    CHECK(std::abs(res) < 1e-10 * std::max(1.0, std::abs(k.M * rr.phiddot)));
  }
}

TEST_CASE("explicit_rhs at the scenario start cross-checks the oracle") {
  const StateRates r = explicit_rhs(kGeom, kParams, kStart, Control{0.0});
  const auto k = eom_coefficients(kGeom, kParams, kStart.phi, kStart.l, 0.0, 0.0);
  CHECK(r.phiddot ==
        doctest::Approx(-k.F * kStart.phidot * kStart.phidot / k.M).epsilon(1e-12));
  const double oracle = euler_lagrange_residual_numeric(kGeom, kParams, kStart,
                                                        r.phiddot, Control{0.0});
  CHECK(std::abs(oracle) < 1e-4);
}
