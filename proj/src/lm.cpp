#include "pweight/lm.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pweight/errors.hpp"

namespace pweight {
namespace {

std::optional<std::vector<double>> try_eval(const ResidualFn& fn, std::span<const double> params) {
  try {
    auto r = fn(params);
    for (double v : r) {
      if (!std::isfinite(v)) return std::nullopt;
    }
    return r;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

Eigen::MatrixXd forward_jacobian(const ResidualFn& fn, std::span<const double> params,
                                 std::span<const double> residuals_at_params) {
  const auto m = static_cast<Eigen::Index>(residuals_at_params.size());
  const auto n = static_cast<Eigen::Index>(params.size());
  Eigen::MatrixXd jac(m, n);
  std::vector<double> shifted(params.begin(), params.end());
  for (Eigen::Index j = 0; j < n; ++j) {
    const double base = params[j];
    double h = std::max(1e-6, 1e-6 * std::fabs(base));
    shifted[j] = base + h;
    auto r = try_eval(fn, shifted);
    if (!r) {
      // Domain boundary just above: difference backwards instead.
      h = -h;
      shifted[j] = base + h;
      r = try_eval(fn, shifted);
      if (!r) throw DomainError("forward_jacobian: residuals undefined around parameter " +
                                std::to_string(j));
    }
    h = shifted[j] - base;
    for (Eigen::Index i = 0; i < m; ++i) jac(i, j) = ((*r)[i] - residuals_at_params[i]) / h;
    shifted[j] = base;
  }
  return jac;
}

LmResult lm_minimize(const ResidualFn& fn, std::span<const double> init, const LmOptions& options) {
  LmResult out;
  out.params.assign(init.begin(), init.end());
  auto r0 = try_eval(fn, out.params);
  if (!r0) throw DomainError("lm_minimize: residuals are not finite at the initial parameters");
  out.residuals = std::move(*r0);
  out.rss = sum_squares(out.residuals);
  out.initial_rss = out.rss;
  out.rss_history.push_back(out.rss);

  const auto n = static_cast<Eigen::Index>(out.params.size());
  double lambda = options.lambda0;

  while (true) {
    const Eigen::MatrixXd jac = forward_jacobian(fn, out.params, out.residuals);
    const Eigen::VectorXd grad = jac.transpose() * as_vector(out.residuals);
    out.gradient_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (out.gradient_norm < options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    if (out.iterations >= options.max_iterations) break;

    const Eigen::MatrixXd normal = jac.transpose() * jac;
    Eigen::VectorXd scaling = normal.diagonal();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(scaling[j] > 0.0)) scaling[j] = 1.0;
    }

    bool accepted = false;
    while (lambda <= options.lambda_max) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal() += lambda * scaling;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
      Eigen::VectorXd step;
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) step = ldlt.solve(-grad);
      if (step.size() != n || !step.allFinite()) {
        lambda *= options.lambda_up;
        continue;
      }
      std::vector<double> trial(out.params);
      for (Eigen::Index j = 0; j < n; ++j) trial[j] += step[j];
      auto r = try_eval(fn, trial);
      if (r) {
        const double rss = sum_squares(*r);
        if (rss < out.rss) {
          out.params = std::move(trial);
          out.residuals = std::move(*r);
          out.rss = rss;
          out.rss_history.push_back(rss);
          ++out.iterations;
          lambda = std::max(lambda / options.lambda_down, 1e-300);
          accepted = true;
          break;
        }
      }
      lambda *= options.lambda_up;
    }
    if (!accepted) break;
  }
  return out;
}

}  // namespace pweight
