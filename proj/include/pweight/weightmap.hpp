#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pweight/dist.hpp"

namespace pweight {

enum class ModelKind { TverskyKahneman, Lattimore, GaussianMap, TMap };

inline constexpr std::array<ModelKind, 4> kAllModelKinds = {
    ModelKind::TverskyKahneman, ModelKind::Lattimore, ModelKind::GaussianMap,
    ModelKind::TMap};

/// Short identifier used on the command line and in output files:
/// "tk", "lattimore", "gauss", "tmap".
std::string_view model_id(ModelKind kind);
ModelKind parse_model_id(std::string_view id);

std::size_t param_count(ModelKind kind);

/// Parameter names in storage order, e.g. {"delta", "gamma"} for Lattimore.
std::span<const std::string_view> param_names(ModelKind kind);

/// Whether parameter `index` of `kind` must be strictly positive.
bool param_is_positive(ModelKind kind, std::size_t index);

/// A parametric map from cumulative probability to cumulative decision weight.
///
/// Parameter order per kind:
///   TverskyKahneman  {gamma}
///   Lattimore        {delta, gamma}
///   GaussianMap      {mu, sigma}
///   TMap             {nu, mu}     (t scale fixed at 1)
class WeightingModel {
 public:
  static WeightingModel tversky_kahneman(double gamma);
  static WeightingModel lattimore(double delta, double gamma);
  static WeightingModel gaussian_map(double mu, double sigma);
  static WeightingModel t_map(double nu, double mu);

  /// Throws DomainError on wrong arity or invalid values.
  static WeightingModel from_params(ModelKind kind, std::span<const double> params);

  ModelKind kind() const { return kind_; }
  std::span<const double> params() const { return {params_.data(), param_count(kind_)}; }
  double param(std::size_t i) const { return params_.at(i); }

  /// F_w for a given F_p in [0,1].
  double operator()(double fp) const;

  std::string describe() const;

 private:
  WeightingModel(ModelKind kind, std::array<double, 2> params);
  void validate() const;

  ModelKind kind_;
  std::array<double, 2> params_;
};

struct CurvePoint {
  double fp;
  double fw;
};

/// Sampled (F_p, F_w) curve with fp strictly increasing.
struct CdfMapCurve {
  std::vector<CurvePoint> points;
  std::string do_label;
  std::string dm_label;

  /// Linear interpolation of fw at fp; clamps outside the sampled range.
  double fw_at(double fp) const;

  /// Largest |fw - fp| over the sampled points.
  double max_deviation() const;
};

double tk_weight(double fp, double gamma);
double lattimore_weight(double fp, double delta, double gamma);

/// Phi((Phi^-1(fp) - mu) / sigma); 0 and 1 map to themselves.
double gaussian_map(double fp, double mu, double sigma);

/// CDF of t(mu, 1, nu) evaluated at Phi^-1(fp); 0 and 1 map to themselves.
double t_map(double fp, double nu, double mu);

/// Decision-weight density as a function of probability density when the DM
/// uses a Gaussian `alpha` times wider than the DO's Gaussian of scale `sigma`.
double gaussian_pdf_map(double p, double alpha, double sigma);

inline constexpr std::size_t kDefaultGridPoints = 2001;

/// Uniform x grid over center +- 10 * max(scale), `points` long, where center
/// is the midpoint of the two locations.
std::vector<double> default_x_grid(const DistributionSpec& do_spec,
                                   const DistributionSpec& dm_spec,
                                   std::size_t points = kDefaultGridPoints);

/// Uniform grid i / (points + 1), i = 1..points, strictly inside (0,1).
std::vector<double> open_unit_grid(std::size_t points = kDefaultGridPoints);

/// (cdf_do(x), cdf_dm(x)) along `grid`. Points whose fp does not strictly
/// exceed the previous one (saturated tails) are dropped.
CdfMapCurve numeric_cdf_map(const DistributionSpec& do_spec,
                            const DistributionSpec& dm_spec,
                            std::span<const double> grid);

/// The model applied pointwise to `fp_grid`. Throws DomainError if the
/// resulting curve decreases anywhere (e.g. TK with very small gamma).
CdfMapCurve model_cdf_map(const WeightingModel& model, std::span<const double> fp_grid);

struct PdfMapRow {
  double x;
  double p;
  double w;
};

/// Densities of both models along `grid`, the PDF-level view of the map.
std::vector<PdfMapRow> pdf_map(const DistributionSpec& do_spec,
                               const DistributionSpec& dm_spec,
                               std::span<const double> grid);

}  // namespace pweight
