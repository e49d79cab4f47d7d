#include "pweight/fit.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "pweight/errors.hpp"

namespace pweight {
namespace {

struct Parameterization {
  ModelKind kind;
  bool use_log;

  bool is_log(std::size_t i) const { return use_log && param_is_positive(kind, i); }

  std::vector<double> to_internal(std::span<const double> natural) const {
    std::vector<double> out(natural.begin(), natural.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (is_log(i)) out[i] = std::log(out[i]);
    }
    return out;
  }

  std::vector<double> to_natural(std::span<const double> internal) const {
    std::vector<double> out(internal.begin(), internal.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (is_log(i)) out[i] = std::exp(out[i]);
    }
    return out;
  }
};

ResidualFn natural_residuals(ModelKind kind, const Dataset& data) {
  return [kind, &data](std::span<const double> params) {
    const auto model = WeightingModel::from_params(kind, params);
    std::vector<double> r(data.points.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = model(data.points[i].fp) - data.points[i].fw;
    return r;
  };
}

CdfMapCurve predicted_curve(const WeightingModel& model, std::size_t points, std::string& diagnostic) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  }
  try {
    return model_cdf_map(model, grid);
  } catch (const DomainError& e) {
    diagnostic += std::string(diagnostic.empty() ? "" : "; ") + e.what();
    CdfMapCurve curve;
    curve.do_label = "identity";
    curve.dm_label = model.describe();
    for (double fp : grid) curve.points.push_back({fp, model(fp)});
    return curve;
  }
}

}  // namespace

void Dataset::validate() const {
  if (points.size() < 2) throw InputError("dataset '" + label + "' needs at least 2 points");
  std::set<double> seen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.fp >= 0.0 && p.fp <= 1.0) || !(p.fw >= 0.0 && p.fw <= 1.0)) {
      throw InputError("dataset '" + label + "': point " + std::to_string(i) +
                       " lies outside [0,1]");
    }
    if (!seen.insert(p.fp).second) {
      throw InputError("dataset '" + label + "': duplicate fp value at point " + std::to_string(i));
    }
  }
}

std::vector<double> default_init(ModelKind kind) {
  switch (kind) {
    case ModelKind::TverskyKahneman: return {1.0};
    case ModelKind::Lattimore: return {1.0, 1.0};
    case ModelKind::GaussianMap: return {0.0, 1.0};
    case ModelKind::TMap: return {5.0, 0.0};
  }
  return {};
}

FitResult fit_model(ModelKind kind, const Dataset& data, std::optional<std::vector<double>> init,
                    const FitOptions& options) {
  data.validate();
  const std::size_t p = param_count(kind);
  const std::size_t n = data.points.size();
  if (n < p + 1) {
    throw InputError(std::string(model_id(kind)) + " needs at least " + std::to_string(p + 1) +
                     " points, dataset has " + std::to_string(n));
  }
  const std::vector<double> start = init.value_or(default_init(kind));
  // Validates arity and domain of the starting point.
  WeightingModel::from_params(kind, start);

  const Parameterization param{kind, options.log_reparameterize};
  const ResidualFn natural = natural_residuals(kind, data);
  const ResidualFn internal = [&](std::span<const double> theta) {
    return natural(param.to_natural(theta));
  };

  const LmResult lm = lm_minimize(internal, param.to_internal(start), options.lm);
  const std::vector<double> fitted = param.to_natural(lm.params);

  FitResult result{WeightingModel::from_params(kind, fitted), std::nullopt, lm.rss,
                   lm.initial_rss, lm.iterations, lm.converged, {}, {}};
  if (!lm.converged) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s with |J^T r|_inf = %.3g above tolerance %.3g",
                  lm.iterations >= options.lm.max_iterations ? "hit the iteration limit"
                                                             : "no step lowered rss further",
                  lm.gradient_norm, options.lm.gradient_tolerance);
    result.diagnostic = buf;
  }

  const Eigen::MatrixXd jac = forward_jacobian(natural, fitted, natural(fitted));
  const Eigen::MatrixXd normal = jac.transpose() * jac;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (eig.info() != Eigen::Success || !(largest > 0.0) || !(smallest > 1e-12 * largest)) {
    result.diagnostic += std::string(result.diagnostic.empty() ? "" : "; ") +
                         "Jacobian is rank deficient at the optimum; standard errors unavailable";
  } else {
    const double s2 = lm.rss / static_cast<double>(n - p);
    const Eigen::MatrixXd cov = s2 * normal.inverse();
    std::vector<double> se(p);
    for (std::size_t i = 0; i < p; ++i) {
      se[i] = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));
    }
    result.std_errors = std::move(se);
  }

  result.predicted = predicted_curve(result.model, std::max<std::size_t>(options.predicted_points, 2),
                                     result.diagnostic);
  result.predicted.do_label = data.label;
  return result;
}

std::vector<ModelFitOutcome> compare_fits(const Dataset& data, const FitOptions& options) {
  std::vector<ModelFitOutcome> out;
  for (ModelKind kind : kAllModelKinds) {
    ModelFitOutcome entry{kind, std::nullopt, {}};
    try {
      entry.result = fit_model(kind, data, std::nullopt, options);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace pweight
