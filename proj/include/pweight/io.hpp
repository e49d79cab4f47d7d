#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pweight/dist.hpp"
#include "pweight/estimate.hpp"
#include "pweight/fit.hpp"
#include "pweight/montecarlo.hpp"
#include "pweight/weightmap.hpp"

namespace pweight::io {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// 12 significant digits, the precision of every CSV this project writes.
std::string format_number(double v);

/// Header `fp,fw`. Rows whose formatted fp equals the previous row's are
/// skipped so the file always has distinct fp values.
void write_curve_csv(std::ostream& os, const CdfMapCurve& curve);

/// Header `x,p,w`.
void write_pdf_map_csv(std::ostream& os, std::span<const PdfMapRow> rows);

/// Header `x,p_hat,epsilon,w`.
void write_estimate_csv(std::ostream& os, std::span<const double> x, std::span<const double> p_hat,
                        std::span<const double> epsilon, std::span<const double> w);

/// Header `trajectory,log_growth`.
void write_growth_csv(std::ostream& os, std::span<const double> time_growth);

/// Parses a `fp,fw` CSV. Throws InputError naming the offending line.
Dataset read_dataset_csv(std::istream& is, std::string label);
Dataset read_dataset_file(const std::string& path);

/// `gaussian:location,scale` or `t:location,scale,shape`.
DistributionSpec parse_spec(std::string_view text);
std::string format_spec(const DistributionSpec& spec);

/// `tk:gamma`, `lattimore:delta,gamma`, `gauss:mu,sigma`, `tmap:nu,mu`.
WeightingModel parse_model(std::string_view text);

nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const SimConfig& config);
nlohmann::json to_json(const GbmConfig& config);
nlohmann::json to_json(const LmOptions& options);

/// Fields present in `doc` override those in `base`. Unknown keys are rejected.
SimConfig sim_config_from_json(const nlohmann::json& doc, SimConfig base);
GbmConfig gbm_config_from_json(const nlohmann::json& doc, GbmConfig base);
LmOptions lm_options_from_json(const nlohmann::json& doc, LmOptions base);

nlohmann::json read_json_file(const std::string& path);

/// FNV-1a 64-bit digest of the compact JSON dump, as "fnv1a64:<16 hex>".
std::string config_hash(const nlohmann::json& resolved_config);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version{kToolVersion};
  std::vector<std::string> output_files;
};

nlohmann::json to_json(const RunManifest& manifest);

}  // namespace pweight::io
