#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pweight {

/// Maps a parameter vector to a residual vector. May throw DomainError (or
/// return non-finite values) for parameters outside its domain; the solver
/// treats that as a rejected step.
using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;

struct LmOptions {
  double lambda0 = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 10.0;
  double gradient_tolerance = 1e-10;
  int max_iterations = 200;
  double lambda_max = 1e16;
};

struct LmResult {
  std::vector<double> params;
  std::vector<double> residuals;
  double rss = 0.0;
  double initial_rss = 0.0;
  /// Accepted steps.
  int iterations = 0;
  bool converged = false;
  /// Infinity norm of J^T r at the returned parameters.
  double gradient_norm = 0.0;
  /// rss after each accepted step, starting with the initial value.
  std::vector<double> rss_history;
};

/// Forward-difference Jacobian with step max(1e-6, 1e-6 |theta_j|).
Eigen::MatrixXd forward_jacobian(const ResidualFn& fn, std::span<const double> params,
                                 std::span<const double> residuals_at_params);

/// Levenberg-Marquardt with Marquardt diagonal scaling:
///   (J^T J + lambda diag(J^T J)) step = -J^T r.
/// A step is accepted only if it lowers rss; lambda is divided by lambda_down
/// on acceptance and multiplied by lambda_up on rejection. Stops when
/// ||J^T r||_inf < gradient_tolerance (converged), after max_iterations, or
/// once lambda exceeds lambda_max.
///
/// Throws DomainError if the residuals at `init` are not finite.
LmResult lm_minimize(const ResidualFn& fn, std::span<const double> init,
                     const LmOptions& options = {});

}  // namespace pweight
