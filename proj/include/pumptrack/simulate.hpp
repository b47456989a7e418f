#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pumptrack/dynamics.hpp"
#include "pumptrack/geometry.hpp"

namespace pumptrack {

/// Box limits on the link length and the link acceleration input.
struct Bounds {
  double l_min = 0.27803;
  double l_max = 0.59559;
  double u_min = -8.6648;
  double u_max = 30.1478;

  void validate() const {
    if (!(l_min < l_max) || !(u_min < u_max))
      throw std::invalid_argument("Bounds: require l_min < l_max and u_min < u_max");
  }
  bool contains_l(double l) const { return l >= l_min && l <= l_max; }
};

/// Full simulation setup. Defaults are the banked-curve scenario the
/// project ships with (see README).
struct Scenario {
  TrackGeometry geom{};
  SystemParams params{};
  double T = 5.0;   ///< horizon [s]
  double h = 0.01;  ///< integration step [s]
  State x0{0.0, pi / 3.0, 0.43681, 0.0};
  Bounds bounds{};
  std::array<double, 4> q{-65.0, -65.0, 0.0, 0.0};  ///< linear state cost weights

  /// Rollouts abort once l strays this far beyond the l-bounds.
  double corridor_margin = 0.05;
  /// coast_time_to gives up after coast_horizon_factor * T seconds.
  double coast_horizon_factor = 4.0;

  int steps() const;
  void validate() const;
};

/// Time-indexed result of a rollout. states has N+1 entries, controls N
/// (zero-order hold per step). The derived arrays are recomputable from
/// states and exist for export and analysis.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> controls;

  std::vector<Vec3> bike_pos;
  std::vector<double> bike_speed;
  std::vector<double> kinetic;
  std::vector<double> potential;

  /// Number of input samples that violated the u-bounds at rollout time.
  int control_bound_violations = 0;

  std::size_t samples() const { return states.size(); }
  /// CSV block: t,phi,phidot,l,ldot,u,xb1,xb2,xb3,vb_mag,K,U.
  void write_csv(std::ostream& os) const;
  void write_csv_file(const std::string& path) const;
};

struct corridor_escape_error : std::runtime_error {
  corridor_escape_error(int step, double l);
  int step;
  double l;
};

struct horizon_exceeded_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct phi_not_reached_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One classical fourth-order Runge-Kutta step with the input held
/// constant across the four stages.
template <typename T>
StateT<T> rk4_step_t(const TrackGeometry& geom, const SystemParams& par,
                     const StateT<T>& s, const T& u, double h) {
  const auto advance = [](const StateT<T>& x, const StateRatesT<T>& k, double a) {
    return StateT<T>{x.phi + a * k.phidot, x.phidot + a * k.phiddot, x.l + a * k.ldot,
                     x.ldot + a * k.lddot};
  };
  const StateRatesT<T> k1 = explicit_rhs_t(geom, par, s, u);
  const StateRatesT<T> k2 = explicit_rhs_t(geom, par, advance(s, k1, 0.5 * h), u);
  const StateRatesT<T> k3 = explicit_rhs_t(geom, par, advance(s, k2, 0.5 * h), u);
  const StateRatesT<T> k4 = explicit_rhs_t(geom, par, advance(s, k3, h), u);
  const double w = h / 6.0;
  return StateT<T>{
      s.phi + w * (k1.phidot + 2.0 * k2.phidot + 2.0 * k3.phidot + k4.phidot),
      s.phidot + w * (k1.phiddot + 2.0 * k2.phiddot + 2.0 * k3.phiddot + k4.phiddot),
      s.l + w * (k1.ldot + 2.0 * k2.ldot + 2.0 * k3.ldot + k4.ldot),
      s.ldot + w * (k1.lddot + 2.0 * k2.lddot + 2.0 * k3.lddot + k4.lddot)};
}

inline State rk4_step(const TrackGeometry& geom, const SystemParams& par, const State& s,
                      Control c, double h) {
  return rk4_step_t<double>(geom, par, s, c.u, h);
}

/// Integrate the scenario under the given piecewise-constant controls.
Trajectory rollout(const Scenario& sc, std::span<const double> controls);

/// Zero-input coast from the scenario start (l pinned at l_fixed, ldot=0)
/// until phi crosses phi_target; the crossing time is located by linear
/// interpolation inside the bracketing step.
double coast_time_to(const Scenario& sc, double phi_target, double l_fixed);

/// Bike speed at phi_b minus bike speed at phi_a, both interpolated at the
/// first crossing of the respective angle.
double speed_gain(const Trajectory& traj, double phi_a, double phi_b);

/// Max relative change of K+U along the trajectory, |E(t)-E(0)|/|E(0)|.
double energy_drift(const Trajectory& traj);

}  // namespace pumptrack
