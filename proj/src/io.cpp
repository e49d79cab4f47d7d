#include "pweight/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "pweight/errors.hpp"

namespace pweight::io {
namespace {

using nlohmann::json;

double parse_double(std::string_view text, const std::string& what) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw InputError(what + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<double> parse_list(std::string_view text, const std::string& what) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part, what));
  return out;
}

template <typename T>
void take(const json& doc, const char* key, T& field) {
  if (!doc.contains(key)) return;
  try {
    field = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& doc, std::initializer_list<std::string_view> known) {
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError("config: unknown field '" + key + "'");
    }
  }
}

DistributionSpec spec_from_json(const json& value) {
  if (value.is_string()) return parse_spec(value.get<std::string>());
  reject_unknown(value, {"family", "location", "scale", "shape"});
  std::string family = "gaussian";
  DistributionSpec spec;
  take(value, "family", family);
  take(value, "location", spec.location);
  take(value, "scale", spec.scale);
  if (family == "t" || family == "student_t") {
    spec.family = Family::StudentT;
    double shape = 0.0;
    take(value, "shape", shape);
    spec.shape = shape;
  } else if (family != "gaussian") {
    throw InputError("config field 'family': expected gaussian or t");
  }
  spec.validate();
  return spec;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_curve_csv(std::ostream& os, const CdfMapCurve& curve) {
  os << "fp,fw\n";
  std::string previous;
  for (const auto& p : curve.points) {
    std::string fp = format_number(p.fp);
    if (fp == previous) continue;
    os << fp << ',' << format_number(p.fw) << '\n';
    previous = std::move(fp);
  }
}

void write_pdf_map_csv(std::ostream& os, std::span<const PdfMapRow> rows) {
  os << "x,p,w\n";
  for (const auto& r : rows) {
    os << format_number(r.x) << ',' << format_number(r.p) << ',' << format_number(r.w) << '\n';
  }
}

void write_estimate_csv(std::ostream& os, std::span<const double> x, std::span<const double> p_hat,
                        std::span<const double> epsilon, std::span<const double> w) {
  detail::require(x.size() == p_hat.size() && x.size() == epsilon.size() && x.size() == w.size(),
                  "write_estimate_csv: column lengths differ");
  os << "x,p_hat,epsilon,w\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << format_number(x[i]) << ',' << format_number(p_hat[i]) << ','
       << format_number(epsilon[i]) << ',' << format_number(w[i]) << '\n';
  }
}

void write_growth_csv(std::ostream& os, std::span<const double> time_growth) {
  os << "trajectory,log_growth\n";
  for (std::size_t i = 0; i < time_growth.size(); ++i) {
    os << i << ',' << format_number(time_growth[i]) << '\n';
  }
}

Dataset read_dataset_csv(std::istream& is, std::string label) {
  Dataset data;
  data.label = std::move(label);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (!header_seen) {
      auto cols = split(line, ',');
      if (cols.size() != 2 || cols[0] != "fp" || cols[1] != "fw") {
        throw InputError(where + ": expected header 'fp,fw'");
      }
      header_seen = true;
      continue;
    }
    auto cols = split(line, ',');
    if (cols.size() != 2) throw InputError(where + ": expected 2 columns, got " + std::to_string(cols.size()));
    data.points.push_back({parse_double(cols[0], where), parse_double(cols[1], where)});
    const auto& p = data.points.back();
    if (!(p.fp >= 0.0 && p.fp <= 1.0 && p.fw >= 0.0 && p.fw <= 1.0)) {
      throw InputError(where + ": values must lie in [0,1]");
    }
  }
  if (!header_seen) throw InputError("line 1: missing header 'fp,fw'");
  data.validate();
  return data;
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  return read_dataset_csv(in, path);
}

DistributionSpec parse_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("spec '" + std::string(text) + "': expected family:location,scale[,shape]");
  }
  const auto family = text.substr(0, colon);
  const auto values = parse_list(text.substr(colon + 1), "spec '" + std::string(text) + "'");
  if (family == "gaussian" || family == "normal") {
    if (values.size() != 2) throw DomainError("spec '" + std::string(text) + "': gaussian takes location,scale");
    if (!(values[1] > 0.0)) throw DomainError("spec '" + std::string(text) + "': scale must be positive");
    return DistributionSpec::gaussian(values[0], values[1]);
  }
  if (family == "t") {
    if (values.size() != 3) throw DomainError("spec '" + std::string(text) + "': t takes location,scale,shape");
    if (!(values[1] > 0.0)) throw DomainError("spec '" + std::string(text) + "': scale must be positive");
    if (!(values[2] > 0.0)) throw DomainError("spec '" + std::string(text) + "': shape must be positive");
    return DistributionSpec::student_t(values[0], values[1], values[2]);
  }
  throw DomainError("spec '" + std::string(text) + "': unknown family '" + std::string(family) + "'");
}

std::string format_spec(const DistributionSpec& spec) {
  if (spec.family == Family::Gaussian) {
    return "gaussian:" + format_number(spec.location) + "," + format_number(spec.scale);
  }
  return "t:" + format_number(spec.location) + "," + format_number(spec.scale) + "," +
         format_number(spec.shape.value_or(0.0));
}

WeightingModel parse_model(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("model '" + std::string(text) + "': expected id:param[,param]");
  }
  const ModelKind kind = parse_model_id(text.substr(0, colon));
  const auto values = parse_list(text.substr(colon + 1), "model '" + std::string(text) + "'");
  return WeightingModel::from_params(kind, values);
}

nlohmann::json to_json(const FitResult& fit) {
  json params = json::object();
  json errors = json::object();
  const auto names = param_names(fit.model.kind());
  for (std::size_t i = 0; i < names.size(); ++i) {
    params[std::string(names[i])] = fit.model.param(i);
    if (fit.std_errors) errors[std::string(names[i])] = (*fit.std_errors)[i];
  }
  json out = {{"model", std::string(model_id(fit.model.kind()))},
              {"params", params},
              {"std_errors", fit.std_errors ? errors : json(nullptr)},
              {"rss", fit.rss},
              {"converged", fit.converged},
              {"iterations", fit.iterations}};
  if (!fit.diagnostic.empty()) out["diagnostic"] = fit.diagnostic;
  return out;
}

nlohmann::json to_json(const SimConfig& c) {
  return {{"spec", format_spec(c.spec)},   {"series_length", c.series_length},
          {"bin_width", c.bin_width},      {"range", {c.lo, c.hi}},
          {"ensemble_size", c.ensemble_size}, {"seed", c.seed}};
}

nlohmann::json to_json(const GbmConfig& c) {
  return {{"drift", c.drift},
          {"volatility", c.volatility},
          {"horizon", c.horizon},
          {"steps", c.steps},
          {"trajectories", c.trajectories},
          {"initial_value", c.initial_value},
          {"seed", c.seed}};
}

nlohmann::json to_json(const LmOptions& o) {
  return {{"lambda0", o.lambda0},
          {"lambda_up", o.lambda_up},
          {"lambda_down", o.lambda_down},
          {"gradient_tolerance", o.gradient_tolerance},
          {"max_iterations", o.max_iterations},
          {"lambda_max", o.lambda_max}};
}

SimConfig sim_config_from_json(const nlohmann::json& doc, SimConfig base) {
  reject_unknown(doc, {"spec", "series_length", "bin_width", "range", "ensemble_size", "seed"});
  if (doc.contains("spec")) base.spec = spec_from_json(doc.at("spec"));
  take(doc, "series_length", base.series_length);
  take(doc, "bin_width", base.bin_width);
  take(doc, "ensemble_size", base.ensemble_size);
  take(doc, "seed", base.seed);
  if (doc.contains("range")) {
    const auto& range = doc.at("range");
    if (!range.is_array() || range.size() != 2) throw InputError("config field 'range': expected [lo, hi]");
    base.lo = range[0].get<double>();
    base.hi = range[1].get<double>();
  }
  return base;
}

GbmConfig gbm_config_from_json(const nlohmann::json& doc, GbmConfig base) {
  reject_unknown(doc, {"drift", "volatility", "horizon", "steps", "trajectories", "initial_value",
                       "seed"});
  take(doc, "drift", base.drift);
  take(doc, "volatility", base.volatility);
  take(doc, "horizon", base.horizon);
  take(doc, "steps", base.steps);
  take(doc, "trajectories", base.trajectories);
  take(doc, "initial_value", base.initial_value);
  take(doc, "seed", base.seed);
  return base;
}

LmOptions lm_options_from_json(const nlohmann::json& doc, LmOptions base) {
  reject_unknown(doc, {"lambda0", "lambda_up", "lambda_down", "gradient_tolerance",
                       "max_iterations", "lambda_max"});
  take(doc, "lambda0", base.lambda0);
  take(doc, "lambda_up", base.lambda_up);
  take(doc, "lambda_down", base.lambda_down);
  take(doc, "gradient_tolerance", base.gradient_tolerance);
  take(doc, "max_iterations", base.max_iterations);
  take(doc, "lambda_max", base.lambda_max);
  return base;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
}

std::string config_hash(const nlohmann::json& resolved_config) {
  const std::string text = resolved_config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config_hash", m.config_hash},
          {"seed", m.seed},
          {"tool_version", m.tool_version},
          {"output_files", m.output_files}};
}

}  // namespace pweight::io
