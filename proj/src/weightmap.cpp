#include "pweight/weightmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pweight/errors.hpp"
#include "pweight/special.hpp"

namespace pweight {
namespace {

constexpr std::string_view kTkNames[] = {"gamma"};
constexpr std::string_view kLattimoreNames[] = {"delta", "gamma"};
constexpr std::string_view kGaussNames[] = {"mu", "sigma"};
constexpr std::string_view kTNames[] = {"nu", "mu"};

void require_unit(double fp, const char* who) {
  if (!(fp >= 0.0 && fp <= 1.0)) {
    throw DomainError(std::string(who) + ": fp must lie in [0,1], got " + std::to_string(fp));
  }
}

void require_strictly_increasing(std::span<const double> grid, const char* who) {
  if (grid.empty()) throw DomainError(std::string(who) + ": empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(who) + ": grid must be strictly increasing (index " +
                        std::to_string(i) + ")");
    }
  }
}

}  // namespace

std::string_view model_id(ModelKind kind) {
  switch (kind) {
    case ModelKind::TverskyKahneman: return "tk";
    case ModelKind::Lattimore: return "lattimore";
    case ModelKind::GaussianMap: return "gauss";
    case ModelKind::TMap: return "tmap";
  }
  return "?";
}

ModelKind parse_model_id(std::string_view id) {
  for (ModelKind kind : kAllModelKinds) {
    if (model_id(kind) == id) return kind;
  }
  throw DomainError("unknown model '" + std::string(id) +
                    "' (expected tk, lattimore, gauss or tmap)");
}

std::size_t param_count(ModelKind kind) { return kind == ModelKind::TverskyKahneman ? 1 : 2; }

std::span<const std::string_view> param_names(ModelKind kind) {
  switch (kind) {
    case ModelKind::TverskyKahneman: return kTkNames;
    case ModelKind::Lattimore: return kLattimoreNames;
    case ModelKind::GaussianMap: return kGaussNames;
    case ModelKind::TMap: return kTNames;
  }
  return {};
}

bool param_is_positive(ModelKind kind, std::size_t index) {
  switch (kind) {
    case ModelKind::TverskyKahneman:
    case ModelKind::Lattimore: return true;
    case ModelKind::GaussianMap: return index == 1;
    case ModelKind::TMap: return index == 0;
  }
  return false;
}

WeightingModel::WeightingModel(ModelKind kind, std::array<double, 2> params)
    : kind_(kind), params_(params) {
  validate();
}

WeightingModel WeightingModel::tversky_kahneman(double gamma) {
  return {ModelKind::TverskyKahneman, {gamma, 0.0}};
}
WeightingModel WeightingModel::lattimore(double delta, double gamma) {
  return {ModelKind::Lattimore, {delta, gamma}};
}
WeightingModel WeightingModel::gaussian_map(double mu, double sigma) {
  return {ModelKind::GaussianMap, {mu, sigma}};
}
WeightingModel WeightingModel::t_map(double nu, double mu) { return {ModelKind::TMap, {nu, mu}}; }

WeightingModel WeightingModel::from_params(ModelKind kind, std::span<const double> params) {
  if (params.size() != param_count(kind)) {
    throw DomainError(std::string(model_id(kind)) + " expects " +
                      std::to_string(param_count(kind)) + " parameter(s), got " +
                      std::to_string(params.size()));
  }
  std::array<double, 2> p{params[0], params.size() > 1 ? params[1] : 0.0};
  return {kind, p};
}

void WeightingModel::validate() const {
  const auto names = param_names(kind_);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double v = params_[i];
    if (!std::isfinite(v)) {
      throw DomainError(std::string(model_id(kind_)) + ": " + std::string(names[i]) +
                        " must be finite");
    }
    if (param_is_positive(kind_, i) && !(v > 0.0)) {
      throw DomainError(std::string(model_id(kind_)) + ": " + std::string(names[i]) +
                        " must be positive");
    }
  }
}

double WeightingModel::operator()(double fp) const {
  switch (kind_) {
    case ModelKind::TverskyKahneman: return tk_weight(fp, params_[0]);
    case ModelKind::Lattimore: return lattimore_weight(fp, params_[0], params_[1]);
    case ModelKind::GaussianMap: return pweight::gaussian_map(fp, params_[0], params_[1]);
    case ModelKind::TMap: return pweight::t_map(fp, params_[0], params_[1]);
  }
  return fp;
}

std::string WeightingModel::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << model_id(kind_) << "(";
  const auto names = param_names(kind_);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ",";
    os << names[i] << "=" << params_[i];
  }
  os << ")";
  return os.str();
}

double CdfMapCurve::fw_at(double fp) const {
  if (points.empty()) throw DegenerateInputError("fw_at: empty curve");
  if (fp <= points.front().fp) return points.front().fw;
  if (fp >= points.back().fp) return points.back().fw;
  const auto it = std::lower_bound(points.begin(), points.end(), fp,
                                   [](const CurvePoint& p, double v) { return p.fp < v; });
  const CurvePoint& hi = *it;
  const CurvePoint& lo = *(it - 1);
  const double t = (fp - lo.fp) / (hi.fp - lo.fp);
  return lo.fw + t * (hi.fw - lo.fw);
}

double CdfMapCurve::max_deviation() const {
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, std::fabs(p.fw - p.fp));
  return worst;
}

double tk_weight(double fp, double gamma) {
  require_unit(fp, "tk_weight");
  detail::require(gamma > 0.0, "tk_weight: gamma must be positive");
  if (fp == 0.0 || fp == 1.0) return fp;
  const double a = std::pow(fp, gamma);
  const double b = std::pow(1.0 - fp, gamma);
  return a / std::pow(a + b, 1.0 / gamma);
}

double lattimore_weight(double fp, double delta, double gamma) {
  require_unit(fp, "lattimore_weight");
  detail::require(delta > 0.0, "lattimore_weight: delta must be positive");
  detail::require(gamma > 0.0, "lattimore_weight: gamma must be positive");
  if (fp == 0.0 || fp == 1.0) return fp;
  const double a = delta * std::pow(fp, gamma);
  return a / (a + std::pow(1.0 - fp, gamma));
}

double gaussian_map(double fp, double mu, double sigma) {
  require_unit(fp, "gaussian_map");
  detail::require(std::isfinite(mu), "gaussian_map: mu must be finite");
  detail::require(sigma > 0.0, "gaussian_map: sigma must be positive");
  if (fp == 0.0 || fp == 1.0) return fp;
  return special::normal_cdf((special::normal_quantile(fp) - mu) / sigma);
}

double t_map(double fp, double nu, double mu) {
  require_unit(fp, "t_map");
  detail::require(nu > 0.0, "t_map: nu must be positive");
  detail::require(std::isfinite(mu), "t_map: mu must be finite");
  if (fp == 0.0 || fp == 1.0) return fp;
  return cdf(DistributionSpec{Family::StudentT, mu, 1.0, nu}, special::normal_quantile(fp));
}

double gaussian_pdf_map(double p, double alpha, double sigma) {
  detail::require(alpha > 0.0, "gaussian_pdf_map: alpha must be positive");
  detail::require(sigma > 0.0, "gaussian_pdf_map: sigma must be positive");
  const double two_pi_var = 2.0 * std::numbers::pi * sigma * sigma;
  const double p_max = 1.0 / std::sqrt(two_pi_var);
  detail::require(p > 0.0 && p <= p_max * (1.0 + 1e-12),
                  "gaussian_pdf_map: p must lie in (0, 1/sqrt(2 pi sigma^2)]");
  const double a2 = alpha * alpha;
  return std::pow(p, 1.0 / a2) * std::pow(two_pi_var, (1.0 - a2) / (2.0 * a2)) / alpha;
}

std::vector<double> default_x_grid(const DistributionSpec& do_spec,
                                   const DistributionSpec& dm_spec, std::size_t points) {
  do_spec.validate();
  dm_spec.validate();
  detail::require(points >= 2, "default_x_grid: need at least 2 points");
  const double center = 0.5 * (do_spec.location + dm_spec.location);
  const double half = 0.5 * std::fabs(do_spec.location - dm_spec.location) +
                      10.0 * std::max(do_spec.scale, dm_spec.scale);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<double> open_unit_grid(std::size_t points) {
  detail::require(points >= 1, "open_unit_grid: need at least 1 point");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i + 1) / static_cast<double>(points + 1);
  }
  return grid;
}

CdfMapCurve numeric_cdf_map(const DistributionSpec& do_spec, const DistributionSpec& dm_spec,
                            std::span<const double> grid) {
  do_spec.validate();
  dm_spec.validate();
  require_strictly_increasing(grid, "numeric_cdf_map");
  const double max_scale = std::max(do_spec.scale, dm_spec.scale);
  const double need_lo = std::min(do_spec.location, dm_spec.location) - 8.0 * max_scale;
  const double need_hi = std::max(do_spec.location, dm_spec.location) + 8.0 * max_scale;
  if (grid.front() > need_lo || grid.back() < need_hi) {
    throw DomainError("numeric_cdf_map: grid must span at least [" + std::to_string(need_lo) +
                      ", " + std::to_string(need_hi) + "]");
  }

  CdfMapCurve curve;
  curve.do_label = describe(do_spec);
  curve.dm_label = describe(dm_spec);
  curve.points.reserve(grid.size());
  for (double x : grid) {
    const double fp = cdf(do_spec, x);
    if (!curve.points.empty() && !(fp > curve.points.back().fp)) continue;
    curve.points.push_back({fp, cdf(dm_spec, x)});
  }
  return curve;
}

CdfMapCurve model_cdf_map(const WeightingModel& model, std::span<const double> fp_grid) {
  require_strictly_increasing(fp_grid, "model_cdf_map");
  CdfMapCurve curve;
  curve.do_label = "identity";
  curve.dm_label = model.describe();
  curve.points.reserve(fp_grid.size());
  for (double fp : fp_grid) {
    const double fw = model(fp);
    if (!curve.points.empty() && fw < curve.points.back().fw) {
      throw DomainError("model_cdf_map: " + model.describe() +
                        " is not monotone (decreases near fp=" + std::to_string(fp) + ")");
    }
    curve.points.push_back({fp, fw});
  }
  return curve;
}

std::vector<PdfMapRow> pdf_map(const DistributionSpec& do_spec, const DistributionSpec& dm_spec,
                               std::span<const double> grid) {
  require_strictly_increasing(grid, "pdf_map");
  std::vector<PdfMapRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) rows.push_back({x, pdf(do_spec, x), pdf(dm_spec, x)});
  return rows;
}

}  // namespace pweight
