#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pweight/lm.hpp"
#include "pweight/weightmap.hpp"

namespace pweight {

/// Empirical (F_p, F_w) points. Both coordinates lie in [0,1] and fp values
/// are distinct.
struct Dataset {
  std::vector<CurvePoint> points;
  std::string label;

  /// Throws InputError.
  void validate() const;
};

struct FitOptions {
  LmOptions lm;
  /// Fit log(theta) for parameters that must be positive.
  bool log_reparameterize = true;
  std::size_t predicted_points = 201;
};

struct FitResult {
  WeightingModel model;
  /// Standard errors in the natural parameters; empty when J^T J at the
  /// optimum is rank deficient (see diagnostic).
  std::optional<std::vector<double>> std_errors;
  double rss = 0.0;
  double initial_rss = 0.0;
  int iterations = 0;
  bool converged = false;
  CdfMapCurve predicted;
  std::string diagnostic;
};

/// TK gamma=1; Lattimore (1,1); Gaussian map (0,1); t map (5,0).
std::vector<double> default_init(ModelKind kind);

/// Least-squares fit of `kind` to the dataset. Standard errors come from
/// s^2 (J^T J)^-1 with s^2 = rss / (n - p), J taken in the natural parameters.
/// Throws InputError when the dataset has fewer than p + 1 points.
FitResult fit_model(ModelKind kind, const Dataset& data,
                    std::optional<std::vector<double>> init = std::nullopt,
                    const FitOptions& options = {});

struct ModelFitOutcome {
  ModelKind kind;
  std::optional<FitResult> result;
  std::string error;
};

/// All four models with default starting points, in ModelKind order. A
/// failing model is reported in its entry without aborting the others.
std::vector<ModelFitOutcome> compare_fits(const Dataset& data, const FitOptions& options = {});

}  // namespace pweight
