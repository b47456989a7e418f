#include "pumptrack/simulate.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "pumptrack/csv.hpp"

namespace pumptrack {

int Scenario::steps() const {
  const double n = T / h;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("Scenario: T/h must be integral");
  return static_cast<int>(rounded);
}

void Scenario::validate() const {
  geom.validate();
  params.validate();
  bounds.validate();
  if (!(T > 0.0) || !(h > 0.0))
    throw std::invalid_argument("Scenario: require T > 0 and h > 0");
  steps();
  pumptrack::validate(x0);
  if (!bounds.contains_l(x0.l))
    throw std::invalid_argument("Scenario: x0.l outside [l_min, l_max]");
  if (!(corridor_margin >= 0.0))
    throw std::invalid_argument("Scenario: corridor_margin must be >= 0");
}

corridor_escape_error::corridor_escape_error(int step_, double l_)
    : std::runtime_error("rollout: l left the bound corridor at step " +
                         std::to_string(step_) + " (l = " + std::to_string(l_) + ")"),
      step(step_),
      l(l_) {}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t,phi,phidot,l,ldot,u,xb1,xb2,xb3,vb_mag,K,U\n";
  const std::size_t n = states.size();
  for (std::size_t k = 0; k < n; ++k) {
    const State& s = states[k];
    const double u = controls.empty() ? 0.0
                                      : controls[k < controls.size() ? k : controls.size() - 1];
    os << fmt15(times[k]) << ',' << fmt15(s.phi) << ',' << fmt15(s.phidot) << ','
       << fmt15(s.l) << ',' << fmt15(s.ldot) << ',' << fmt15(u) << ','
       << fmt15(bike_pos[k].x1) << ',' << fmt15(bike_pos[k].x2) << ','
       << fmt15(bike_pos[k].x3) << ',' << fmt15(bike_speed[k]) << ',' << fmt15(kinetic[k])
       << ',' << fmt15(potential[k]) << '\n';
  }
}

void Trajectory::write_csv_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(os);
}

namespace {

void push_derived(const Scenario& sc, const State& s, Trajectory& traj) {
  traj.bike_pos.push_back(bike_position(sc.geom, s.phi));
  traj.bike_speed.push_back(norm(bike_velocity(sc.geom, s.phi, s.phidot)));
  traj.kinetic.push_back(kinetic_energy(sc.geom, sc.params, s));
  traj.potential.push_back(potential_energy(sc.geom, sc.params, s));
}

}  // namespace

Trajectory rollout(const Scenario& sc, std::span<const double> controls) {
  sc.validate();
  const int n = sc.steps();
  if (static_cast<int>(controls.size()) != n)
    throw std::invalid_argument("rollout: expected " + std::to_string(n) +
                                " controls, got " + std::to_string(controls.size()));

  const double lo = sc.bounds.l_min - sc.corridor_margin;
  const double hi = sc.bounds.l_max + sc.corridor_margin;

  Trajectory traj;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.controls.assign(controls.begin(), controls.end());

  for (double u : controls)
    if (u < sc.bounds.u_min - 1e-12 || u > sc.bounds.u_max + 1e-12)
      ++traj.control_bound_violations;

  State s = sc.x0;
  traj.times.push_back(0.0);
  traj.states.push_back(s);
  push_derived(sc, s, traj);

  for (int k = 0; k < n; ++k) {
    s = rk4_step(sc.geom, sc.params, s, Control{controls[k]}, sc.h);
    if (s.l < lo || s.l > hi) throw corridor_escape_error(k + 1, s.l);
    traj.times.push_back((k + 1) * sc.h);  // index-multiplied, no accumulation
    traj.states.push_back(s);
    push_derived(sc, s, traj);
  }
  return traj;
}

double coast_time_to(const Scenario& sc, double phi_target, double l_fixed) {
  sc.validate();
  if (!(l_fixed > 0.0)) throw std::invalid_argument("coast_time_to: require l_fixed > 0");
  State s = sc.x0;
  s.l = l_fixed;
  s.ldot = 0.0;
  if (!(s.phidot > 0.0))
    throw std::invalid_argument("coast_time_to: require initial phidot > 0");
  if (phi_target < s.phi)
    throw std::invalid_argument("coast_time_to: target behind start");
  if (phi_target == s.phi) return 0.0;

  const double t_cap = sc.coast_horizon_factor * sc.T;
  const long max_steps = static_cast<long>(std::ceil(t_cap / sc.h));
  double phi_prev = s.phi;
  for (long k = 0; k < max_steps; ++k) {
    s = rk4_step(sc.geom, sc.params, s, Control{0.0}, sc.h);
    if (phi_prev < phi_target && s.phi >= phi_target) {
      const double frac = (phi_target - phi_prev) / (s.phi - phi_prev);
      return (k + frac) * sc.h;
    }
    phi_prev = s.phi;
  }
  throw horizon_exceeded_error("coast_time_to: phi did not reach target within " +
                               std::to_string(t_cap) + " s");
}

namespace {

// Bike speed at the first crossing of phi_x, linear in phi within the
// bracketing step. Exact-sample hits short-circuit.
double speed_at_phi(const Trajectory& traj, double phi_x) {
  const std::size_t n = traj.states.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (traj.states[k].phi == phi_x) return traj.bike_speed[k];
    if (k + 1 < n) {
      const double a = traj.states[k].phi, b = traj.states[k + 1].phi;
      if ((a < phi_x && phi_x < b) || (b < phi_x && phi_x < a)) {
        const double frac = (phi_x - a) / (b - a);
        return traj.bike_speed[k] + frac * (traj.bike_speed[k + 1] - traj.bike_speed[k]);
      }
    }
  }
  throw phi_not_reached_error("speed_gain: trajectory never crosses phi = " +
                              std::to_string(phi_x));
}

}  // namespace

double speed_gain(const Trajectory& traj, double phi_a, double phi_b) {
  if (traj.states.empty()) throw std::invalid_argument("speed_gain: empty trajectory");
  return speed_at_phi(traj, phi_b) - speed_at_phi(traj, phi_a);
}

double energy_drift(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  const double e0 = traj.kinetic[0] + traj.potential[0];
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.kinetic.size(); ++k) {
    const double e = traj.kinetic[k] + traj.potential[k];
    worst = std::max(worst, std::abs(e - e0));
  }
  return worst / std::max(1e-300, std::abs(e0));
}

}  // namespace pumptrack
