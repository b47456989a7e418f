#include "pumptrack/ocp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pumptrack/dual.hpp"

namespace pumptrack {

GradMode grad_mode_from_string(const std::string& s) {
  if (s == "adjoint") return GradMode::Adjoint;
  if (s == "fd") return GradMode::ForwardFD;
  throw std::invalid_argument("grad_mode: expected 'adjoint' or 'fd', got '" + s + "'");
}

std::string to_string(GradMode m) {
  return m == GradMode::Adjoint ? "adjoint" : "fd";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Plain state rollout, no derived signals. Returns false when l escapes
// the corridor (invalid candidate during a line search).
bool rollout_states(const Scenario& sc, std::span<const double> u,
                    std::vector<State>& xs) {
  const int n = static_cast<int>(u.size());
  const double lo = sc.bounds.l_min - sc.corridor_margin;
  const double hi = sc.bounds.l_max + sc.corridor_margin;
  xs.resize(n + 1);
  xs[0] = sc.x0;
  for (int k = 0; k < n; ++k) {
    xs[k + 1] = rk4_step(sc.geom, sc.params, xs[k], Control{u[k]}, sc.h);
    if (xs[k + 1].l < lo || xs[k + 1].l > hi) return false;
  }
  return true;
}

double quadrature_cost(const Scenario& sc, std::span<const double> u,
                       const std::vector<State>& xs) {
  const int n = static_cast<int>(u.size());
  double J = 0.0;
  for (int k = 0; k < n; ++k) {
    const State& x = xs[k];
    J += sc.h * (sc.q[0] * x.phi + sc.q[1] * x.phidot + sc.q[2] * x.l +
                 sc.q[3] * x.ldot + u[k] * u[k]);
  }
  return J;
}

// ---- augmented Lagrangian pieces ----------------------------------------

struct AlTerms {
  std::vector<double> mu_up, mu_lo;  // one multiplier per grid point
  double rho = 10.0;
};

// psi(g; mu, rho) for the inequality g <= 0.
double al_value(double g, double mu, double rho) {
  const double t = mu + rho * g;
  if (t <= 0.0) return -0.5 * mu * mu / rho;
  return 0.5 * (t * t - mu * mu) / rho;
}

double al_slope(double g, double mu, double rho) { return std::max(0.0, mu + rho * g); }

double max_violation(const Scenario& sc, const std::vector<State>& xs) {
  double v = 0.0;
  for (const State& x : xs) {
    v = std::max(v, x.l - sc.bounds.l_max);
    v = std::max(v, sc.bounds.l_min - x.l);
  }
  return std::max(v, 0.0);
}

struct MeritEval {
  double value = kInf;
  bool valid = false;
};

MeritEval merit_value(const Scenario& sc, std::span<const double> u, const AlTerms* al,
                      std::vector<State>& xs) {
  MeritEval me;
  try {
    if (!rollout_states(sc, u, xs)) return me;
  } catch (const singular_mass_error&) {
    return me;
  }
  double J = quadrature_cost(sc, u, xs);
  if (al) {
    const int n = static_cast<int>(u.size());
    for (int k = 0; k <= n; ++k) {
      J += al_value(xs[k].l - sc.bounds.l_max, al->mu_up[k], al->rho);
      J += al_value(sc.bounds.l_min - xs[k].l, al->mu_lo[k], al->rho);
    }
  }
  me.value = J;
  me.valid = true;
  return me;
}

// ---- adjoint gradient -----------------------------------------------------

// Jacobians of one RK4 step wrt (state, control), exact via five seeded
// forward-mode directions.
void step_jacobians(const Scenario& sc, const State& x, double u, double A[4][4],
                    double B[4]) {
  using D = Dual<5>;
  const StateT<D> xd{D::seeded(x.phi, 0), D::seeded(x.phidot, 1), D::seeded(x.l, 2),
                     D::seeded(x.ldot, 3)};
  const D ud = D::seeded(u, 4);
  const StateT<D> xn = rk4_step_t(sc.geom, sc.params, xd, ud, sc.h);
  const D* comp[4] = {&xn.phi, &xn.phidot, &xn.l, &xn.ldot};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) A[i][j] = comp[i]->d[j];
    B[i] = comp[i]->d[4];
  }
}

std::vector<double> merit_gradient_adjoint(const Scenario& sc, std::span<const double> u,
                                           const AlTerms* al,
                                           const std::vector<State>& xs) {
  const int n = static_cast<int>(u.size());
  std::vector<double> g(n, 0.0);

  const auto stage_grad = [&](int k) {
    std::array<double, 4> gx{};
    if (k < n) {
      gx = {sc.h * sc.q[0], sc.h * sc.q[1], sc.h * sc.q[2], sc.h * sc.q[3]};
    }
    if (al) {
      gx[2] += al_slope(xs[k].l - sc.bounds.l_max, al->mu_up[k], al->rho) -
               al_slope(sc.bounds.l_min - xs[k].l, al->mu_lo[k], al->rho);
    }
    return gx;
  };

  std::array<double, 4> lam = stage_grad(n);
  for (int k = n - 1; k >= 0; --k) {
    double A[4][4], B[4];
    step_jacobians(sc, xs[k], u[k], A, B);
    g[k] = 2.0 * u[k] * sc.h;
    for (int i = 0; i < 4; ++i) g[k] += B[i] * lam[i];
    std::array<double, 4> next = stage_grad(k);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) next[j] += A[i][j] * lam[i];
    lam = next;
  }
  return g;
}

// ---- projected-gradient inner solver --------------------------------------

struct SpgResult {
  int iterations = 0;
  double pg_norm = kInf;
  std::vector<double> merits;
};

// Monotone spectral projected gradient over the u-box. Accepted iterates
// strictly decrease the merit (Armijo on the projection-arc direction).
SpgResult spg_minimize(const Scenario& sc, std::vector<double>& u, const AlTerms* al,
                       double tol, int max_iters, bool record) {
  const int n = static_cast<int>(u.size());
  const double ulo = sc.bounds.u_min, uhi = sc.bounds.u_max;
  const auto clamp_u = [&](double v) { return std::clamp(v, ulo, uhi); };

  std::vector<State> xs, xs_try;
  MeritEval cur = merit_value(sc, u, al, xs);
  if (!cur.valid)
    throw std::logic_error("spg_minimize: starting point gives an invalid rollout");
  std::vector<double> grad = merit_gradient_adjoint(sc, u, al, xs);

  SpgResult res;
  if (record) res.merits.push_back(cur.value);

  double gmax = 0.0;
  for (double gi : grad) gmax = std::max(gmax, std::abs(gi));
  double alpha = gmax > 0.0 ? 1.0 / gmax : 1.0;

  std::vector<double> d(n), u_try(n), s_vec(n), y_vec(n);
  for (int it = 0; it < max_iters; ++it) {
    double pg = 0.0;
    for (int i = 0; i < n; ++i) pg = std::max(pg, std::abs(clamp_u(u[i] - grad[i]) - u[i]));
    res.pg_norm = pg;
    if (pg <= tol) break;

    double gd = 0.0;
    for (int i = 0; i < n; ++i) {
      d[i] = clamp_u(u[i] - alpha * grad[i]) - u[i];
      gd += grad[i] * d[i];
    }
    if (gd >= 0.0) {  // degenerate spectral step; fall back to steepest descent scale
      alpha = gmax > 0.0 ? 1.0 / gmax : 1.0;
      gd = 0.0;
      for (int i = 0; i < n; ++i) {
        d[i] = clamp_u(u[i] - alpha * grad[i]) - u[i];
        gd += grad[i] * d[i];
      }
      if (gd >= 0.0) break;
    }

    double t = 1.0;
    MeritEval trial;
    while (true) {
      for (int i = 0; i < n; ++i) u_try[i] = u[i] + t * d[i];
      trial = merit_value(sc, u_try, al, xs_try);
      if (trial.valid && trial.value <= cur.value + 1e-4 * t * gd) break;
      t *= 0.5;
      if (t < 1e-13) break;
    }
    if (!(trial.valid && trial.value < cur.value)) break;  // no acceptable step

    for (int i = 0; i < n; ++i) s_vec[i] = u_try[i] - u[i];
    u.swap(u_try);
    cur = trial;
    xs.swap(xs_try);

    std::vector<double> grad_new = merit_gradient_adjoint(sc, u, al, xs);
    double ss = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
      y_vec[i] = grad_new[i] - grad[i];
      ss += s_vec[i] * s_vec[i];
      sy += s_vec[i] * y_vec[i];
    }
    grad.swap(grad_new);
    gmax = 0.0;
    for (double gi : grad) gmax = std::max(gmax, std::abs(gi));
    alpha = sy > 1e-300 ? std::clamp(ss / sy, 1e-10, 1e10)
                        : std::min(1e10, alpha * 10.0);

    ++res.iterations;
    if (record) res.merits.push_back(cur.value);
  }
  return res;
}

}  // namespace

double objective(const Scenario& sc, std::span<const double> controls) {
  const Trajectory traj = rollout(sc, controls);
  double J = 0.0;
  const int n = static_cast<int>(controls.size());
  for (int k = 0; k < n; ++k) {
    const State& x = traj.states[k];
    J += sc.h * (sc.q[0] * x.phi + sc.q[1] * x.phidot + sc.q[2] * x.l +
                 sc.q[3] * x.ldot + controls[k] * controls[k]);
  }
  return J;
}

std::vector<double> gradient(const Scenario& sc, std::span<const double> controls,
                             GradMode mode) {
  sc.validate();
  if (static_cast<int>(controls.size()) != sc.steps())
    throw std::invalid_argument("gradient: control count does not match scenario");

  if (mode == GradMode::Adjoint) {
    std::vector<State> xs;
    if (!rollout_states(sc, controls, xs))
      throw corridor_escape_error(-1, kInf);
    return merit_gradient_adjoint(sc, controls, nullptr, xs);
  }

  // Forward finite differences on the plain objective.
  std::vector<double> u(controls.begin(), controls.end());
  const double j0 = objective(sc, u);
  std::vector<double> g(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double delta = 1e-7 * std::max(1.0, std::abs(u[k]));
    const double saved = u[k];
    u[k] += delta;
    g[k] = (objective(sc, u) - j0) / delta;
    u[k] = saved;
  }
  return g;
}

OcpSolution solve(const OcpProblem& problem) {
  const Scenario& sc = problem.scenario;
  const SolverOptions& opt = problem.options;
  sc.validate();
  const int n = sc.steps();

  std::vector<double> u(n, 0.0);
  AlTerms al;
  al.rho = opt.rho0;
  al.mu_up.assign(n + 1, 0.0);
  al.mu_lo.assign(n + 1, 0.0);

  OcpSolution sol;
  std::vector<State> xs;

  // Zero-control baseline; also the initial iterate. x0 is within bounds
  // (validated), so with ldot0 = 0 this is feasible; a nonzero ldot0 may
  // make even the baseline escape, which counts as an invalid start.
  if (!rollout_states(sc, u, xs))
    throw std::invalid_argument("solve: zero-control rollout leaves the l-corridor");
  double best_obj = quadrature_cost(sc, u, xs);
  std::vector<double> best_u = u;
  double best_viol = max_violation(sc, xs);

  double omega = 1e-2;
  double eta = 1e-2;
  bool converged = false;
  double viol = kInf;
  double pg_norm = kInf;
  int total_inner = 0;
  int outer = 0;

  for (; outer < opt.max_outer; ++outer) {
    SpgResult r = spg_minimize(sc, u, &al, std::max(omega, opt.grad_tol), opt.max_inner,
                               opt.record_history);
    total_inner += r.iterations;
    pg_norm = r.pg_norm;
    if (opt.record_history) sol.merit_history.push_back(std::move(r.merits));

    rollout_states(sc, u, xs);
    viol = max_violation(sc, xs);

    if (viol <= opt.feas_tol) {
      const double J = quadrature_cost(sc, u, xs);
      if (J < best_obj) {
        best_obj = J;
        best_u = u;
        best_viol = viol;
      }
    }

    if (viol <= opt.feas_tol && pg_norm <= opt.grad_tol) {
      converged = true;
      ++outer;
      break;
    }

    if (viol <= std::max(eta, opt.feas_tol)) {
      for (int k = 0; k <= n; ++k) {
        al.mu_up[k] = std::max(0.0, al.mu_up[k] + al.rho * (xs[k].l - sc.bounds.l_max));
        al.mu_lo[k] = std::max(0.0, al.mu_lo[k] + al.rho * (sc.bounds.l_min - xs[k].l));
      }
      eta = std::max(eta * 0.2, 0.1 * opt.feas_tol);
      omega = std::max(omega * 0.2, opt.grad_tol);
    } else {
      al.rho = std::min(al.rho * 10.0, opt.rho_max);
    }
  }

  // Return the last iterate unless a meaningfully better feasible one was
  // recorded (keeps the objective at or below the zero-control baseline).
  rollout_states(sc, u, xs);
  double final_obj = quadrature_cost(sc, u, xs);
  viol = max_violation(sc, xs);
  const bool swap_to_best =
      viol > opt.feas_tol || best_obj < final_obj - 1e-9 * std::abs(final_obj);
  if (swap_to_best) {
    u = best_u;
    rollout_states(sc, u, xs);
    final_obj = best_obj;
    viol = best_viol;
    converged = false;
  }

  sol.controls = u;
  sol.objective = final_obj;
  sol.constraint_violation = viol;
  sol.iterations = total_inner;
  sol.outer_iterations = outer;
  sol.converged = converged;

  // Assemble the reported trajectory from the final states directly; the
  // public rollout() would re-raise on a (non-converged) corridor escape.
  Trajectory& traj = sol.trajectory;
  traj.times.reserve(n + 1);
  traj.states = xs;
  traj.controls = u;
  for (int k = 0; k <= n; ++k) {
    traj.times.push_back(k * sc.h);
    const State& s = xs[k];
    traj.bike_pos.push_back(bike_position(sc.geom, s.phi));
    traj.bike_speed.push_back(norm(bike_velocity(sc.geom, s.phi, s.phidot)));
    traj.kinetic.push_back(kinetic_energy(sc.geom, sc.params, s));
    traj.potential.push_back(potential_energy(sc.geom, sc.params, s));
  }
  return sol;
}

}  // namespace pumptrack
