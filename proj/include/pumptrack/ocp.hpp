#pragma once

#include <span>
#include <string>
#include <vector>

#include "pumptrack/simulate.hpp"

namespace pumptrack {

enum class GradMode { Adjoint, ForwardFD };

GradMode grad_mode_from_string(const std::string& s);
std::string to_string(GradMode m);

struct SolverOptions {
  int max_outer = 30;      ///< augmented-Lagrangian outer iterations
  int max_inner = 800;     ///< projected-gradient iterations per outer pass
  double feas_tol = 1e-4;  ///< allowed l-bound violation [m]
  double grad_tol = 3e-6;  ///< projected-gradient sup-norm at convergence
  GradMode grad_mode = GradMode::Adjoint;
  double rho0 = 10.0;
  double rho_max = 1e8;
  bool record_history = false;  ///< keep per-iterate merit values (tests)
};

/// Direct single-shooting transcription: the decision variables are the N
/// held control values; l-bounds become inequality constraints on the
/// (linear) l-path and are handled by the augmented Lagrangian.
struct OcpProblem {
  Scenario scenario{};
  SolverOptions options{};

  int steps() const { return scenario.steps(); }
};

struct OcpSolution {
  std::vector<double> controls;
  Trajectory trajectory;
  double objective = 0.0;
  int iterations = 0;        ///< accepted inner iterations, all passes
  int outer_iterations = 0;
  bool converged = false;
  double constraint_violation = 0.0;  ///< max l-bound residual [m]

  /// Merit values of accepted iterates, one sequence per outer pass.
  /// Populated only when SolverOptions::record_history is set.
  std::vector<std::vector<double>> merit_history;
};

/// Rectangle-rule cost of the rolled-out trajectory:
///   sum_k (q^T x(t_k) + u_k^2) h,  k = 0..N-1.
double objective(const Scenario& sc, std::span<const double> controls);

/// Gradient of objective() with respect to the controls. Adjoint mode
/// differentiates the RK4 rollout exactly (forward-mode step Jacobians,
/// reverse accumulation); ForwardFD is a one-sided difference fallback.
std::vector<double> gradient(const Scenario& sc, std::span<const double> controls,
                             GradMode mode = GradMode::Adjoint);

OcpSolution solve(const OcpProblem& problem);

}  // namespace pumptrack
