#include "pweight/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pweight/errors.hpp"
#include "pweight/io.hpp"

namespace pweight::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot write '" + path.string() + "'");
    os << content;
    files_.push_back(path.string());
  }

  void write_manifest(std::string command, std::string hash, std::uint64_t seed) {
    io::RunManifest manifest;
    manifest.command = std::move(command);
    manifest.config_hash = std::move(hash);
    manifest.seed = seed;
    manifest.output_files = files_;
    manifest.output_files.push_back((dir_ / "manifest.json").string());
    std::ofstream os(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    os << io::to_json(manifest).dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

DistributionSpec spec_flag(const char* flag, const std::string& text) {
  try {
    return io::parse_spec(text);
  } catch (const std::exception& e) {
    throw DomainError(std::string(flag) + ": " + e.what());
  }
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

// ---------------------------------------------------------------- map

struct MapArgs {
  std::string do_spec;
  std::string dm_spec;
  std::string model;
  std::size_t points = kDefaultGridPoints;
  std::optional<double> half_width;
  bool pdf = false;
  std::string out_dir;
};

int cmd_map(const MapArgs& a, std::ostream& out) {
  OutputSet files(a.out_dir);
  json resolved = {{"command", "map"}, {"points", a.points}};
  if (!a.model.empty()) {
    if (!a.do_spec.empty() || !a.dm_spec.empty()) {
      throw InputError("map: use either --model or --do/--dm, not both");
    }
    WeightingModel model = [&] {
      try {
        return io::parse_model(a.model);
      } catch (const std::exception& e) {
        throw DomainError(std::string("--model: ") + e.what());
      }
    }();
    const auto curve = model_cdf_map(model, open_unit_grid(a.points));
    files.write("cdf_map.csv", render([&](std::ostream& os) { io::write_curve_csv(os, curve); }));
    resolved["model"] = model.describe();
    out << "map: " << model.describe() << ", " << curve.points.size() << " points\n";
  } else {
    if (a.do_spec.empty() || a.dm_spec.empty()) {
      throw InputError("map: --do and --dm are required unless --model is given");
    }
    const auto do_spec = spec_flag("--do", a.do_spec);
    const auto dm_spec = spec_flag("--dm", a.dm_spec);
    std::vector<double> grid;
    if (a.half_width) {
      if (!(*a.half_width > 0.0) || a.points < 2) throw DomainError("--half-width: must be positive");
      const double center = 0.5 * (do_spec.location + dm_spec.location);
      const double half = *a.half_width * std::max(do_spec.scale, dm_spec.scale);
      grid.resize(a.points);
      for (std::size_t i = 0; i < a.points; ++i) {
        grid[i] = center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(a.points - 1);
      }
    } else {
      grid = default_x_grid(do_spec, dm_spec, a.points);
    }
    const auto curve = numeric_cdf_map(do_spec, dm_spec, grid);
    files.write("cdf_map.csv", render([&](std::ostream& os) { io::write_curve_csv(os, curve); }));
    if (a.pdf) {
      const auto rows = pdf_map(do_spec, dm_spec, grid);
      files.write("pdf_map.csv", render([&](std::ostream& os) { io::write_pdf_map_csv(os, rows); }));
    }
    resolved["do"] = io::format_spec(do_spec);
    resolved["dm"] = io::format_spec(dm_spec);
    resolved["grid"] = {grid.front(), grid.back()};
    out << "map: " << describe(do_spec) << " -> " << describe(dm_spec) << ", "
        << curve.points.size() << " points, max |fw - fp| = "
        << io::format_number(curve.max_deviation()) << "\n";
  }
  files.write_manifest("map", io::config_hash(resolved), 0);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string spec;
  std::string config;
  std::uint64_t series_length = 100;
  double bin_width = 0.4;
  std::optional<double> lo;
  std::optional<double> hi;
  std::uint64_t ensemble = 1000;
  std::uint64_t seed = 1;
  double multiplier = 1.0;
  bool analytic = false;
  std::optional<double> tdx;
  unsigned threads = 0;
  std::string out_dir;
};

// Default range: location +- 3 scales for a Gaussian, +- 10
// scales for t, widened so it holds a whole number of bins.
void default_range(SimConfig& c) {
  const double half = (c.spec.family == Family::Gaussian ? 3.0 : 10.0) * c.spec.scale;
  c.lo = c.spec.location - half;
  const double bins = std::ceil(2.0 * half / c.bin_width - 1e-9);
  c.hi = c.lo + bins * c.bin_width;
}

int cmd_simulate_analytic(const SimulateArgs& a, std::ostream& out) {
  if (a.spec.empty()) throw InputError("simulate --analytic: --spec is required");
  if (!a.tdx) throw InputError("simulate --analytic: --tdx is required");
  const auto spec = spec_flag("--spec", a.spec);
  if (!(*a.tdx > 0.0)) throw DomainError("--tdx: must be positive");
  const auto grid = default_analytic_grid(spec);
  const auto weights = analytic_decision_weight_density(spec, *a.tdx, grid, a.multiplier);
  std::vector<double> p(grid.size()), eps(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p[i] = pdf(spec, grid[i]);
    eps[i] = std::sqrt(p[i] / *a.tdx);
  }
  const auto curve = density_cdf_map(spec, grid, weights.w);

  OutputSet files(a.out_dir);
  files.write("density.csv",
              render([&](std::ostream& os) { io::write_estimate_csv(os, grid, p, eps, weights.w); }));
  files.write("curve.csv", render([&](std::ostream& os) { io::write_curve_csv(os, curve); }));
  const json resolved = {{"command", "simulate"}, {"analytic", true}, {"spec", io::format_spec(spec)},
                         {"t_delta_x", *a.tdx}, {"multiplier", a.multiplier}};
  files.write_manifest("simulate", io::config_hash(resolved), 0);
  out << "simulate (analytic): " << describe(spec) << ", T dx = " << io::format_number(*a.tdx)
      << ", truncated mass " << io::format_number(weights.truncated_mass)
      << ", max |fw - fp| = " << io::format_number(curve.max_deviation()) << "\n";
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.analytic) return cmd_simulate_analytic(a, out);

  SimConfig c;
  c.series_length = a.series_length;
  c.bin_width = a.bin_width;
  c.ensemble_size = a.ensemble;
  c.seed = a.seed;
  bool have_spec = false;
  if (!a.spec.empty()) {
    c.spec = spec_flag("--spec", a.spec);
    have_spec = true;
  }
  json doc = json::object();
  if (!a.config.empty()) {
    doc = io::read_json_file(a.config);
    c = io::sim_config_from_json(doc, c);
    have_spec = have_spec || doc.contains("spec");
  }
  if (!have_spec) throw InputError("simulate: --spec (or a config 'spec' field) is required");
  if (!doc.contains("range")) {
    if (a.lo.has_value() != a.hi.has_value()) throw InputError("simulate: give both --lo and --hi");
    if (a.lo) {
      c.lo = *a.lo;
      c.hi = *a.hi;
    } else {
      default_range(c);
    }
  }
  c.validate();

  const SimResult sim = simulate_dm(c, a.multiplier, a.threads);
  const auto curve = binned_cdf_map(c.spec, sim.single_run_counts.bin_edges, sim.weights);

  OutputSet files(a.out_dir);
  files.write("bins.csv", render([&](std::ostream& os) {
                io::write_estimate_csv(os, sim.single_run.bin_centers, sim.single_run.p_hat,
                                       sim.ensemble_epsilon, sim.weights);
              }));
  files.write("curve.csv", render([&](std::ostream& os) { io::write_curve_csv(os, curve); }));
  json resolved = io::to_json(c);
  resolved["command"] = "simulate";
  resolved["multiplier"] = a.multiplier;
  files.write_manifest("simulate", io::config_hash(resolved), c.seed);

  out << "simulate: " << describe(c.spec) << ", T = " << c.series_length
      << ", dx = " << io::format_number(c.bin_width) << ", ensemble = " << c.ensemble_size
      << ", range [" << io::format_number(c.lo) << ", " << io::format_number(c.hi) << ")"
      << ", fw(0.1) = " << io::format_number(curve.fw_at(0.1))
      << ", fw(0.9) = " << io::format_number(curve.fw_at(0.9)) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string data;
  std::string model;
  bool all = false;
  bool strict = false;
  std::string config;
  std::string out_dir;
};

void print_fit_row(std::ostream& out, const ModelFitOutcome& entry) {
  out << std::left << std::setw(10) << model_id(entry.kind);
  if (!entry.result) {
    out << "failed: " << entry.error << "\n";
    return;
  }
  const auto& r = *entry.result;
  const auto names = param_names(r.model.kind());
  std::ostringstream params;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) params << "  ";
    params << names[i] << " = " << std::fixed << std::setprecision(4) << r.model.param(i);
    if (r.std_errors) params << " (SE " << std::setprecision(4) << (*r.std_errors)[i] << ")";
    else params << " (SE n/a)";
  }
  out << std::setw(52) << params.str() << " rss = " << io::format_number(r.rss)
      << (r.converged ? "" : "  [not converged]") << "\n";
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  if (a.all == !a.model.empty()) throw InputError("fit: give exactly one of --model or --all");
  FitOptions options;
  if (!a.config.empty()) options.lm = io::lm_options_from_json(io::read_json_file(a.config), options.lm);
  const Dataset data = io::read_dataset_file(a.data);

  std::vector<ModelFitOutcome> outcomes;
  if (a.all) {
    outcomes = compare_fits(data, options);
  } else {
    const ModelKind kind = [&] {
      try {
        return parse_model_id(a.model);
      } catch (const std::exception& e) {
        throw DomainError(std::string("--model: ") + e.what());
      }
    }();
    outcomes.push_back({kind, fit_model(kind, data, std::nullopt, options), {}});
  }

  OutputSet files(a.out_dir);
  out << "fit: " << data.label << " (" << data.points.size() << " points)\n";
  bool any_failed = false;
  bool any_unconverged = false;
  for (const auto& entry : outcomes) {
    print_fit_row(out, entry);
    const std::string id(model_id(entry.kind));
    if (!entry.result) {
      any_failed = true;
      err << "fit " << id << ": " << entry.error << "\n";
      continue;
    }
    any_unconverged = any_unconverged || !entry.result->converged;
    files.write("fit_" + id + ".json", io::to_json(*entry.result).dump(2) + "\n");
    files.write("fit_" + id + "_curve.csv",
                render([&](std::ostream& os) { io::write_curve_csv(os, entry.result->predicted); }));
  }

  // Hash the dataset content rather than its path.
  json points = json::array();
  for (const auto& p : data.points) points.push_back({p.fp, p.fw});
  const json resolved = {{"command", "fit"}, {"models", a.all ? "all" : a.model},
                         {"lm", io::to_json(options.lm)}, {"data", points}};
  files.write_manifest("fit", io::config_hash(resolved), 0);

  const bool all_failed = any_failed && std::none_of(outcomes.begin(), outcomes.end(),
                                                      [](const auto& e) { return e.result.has_value(); });
  if (all_failed) return kExitNumerical;
  if (a.strict && (any_failed || any_unconverged)) return kExitNumerical;
  return kExitOk;
}

// ---------------------------------------------------------------- ergodicity

struct ErgodicityArgs {
  GbmConfig gbm;
  std::string config;
  unsigned threads = 0;
  std::string out_dir;
};

int cmd_ergodicity(const ErgodicityArgs& a, std::ostream& out) {
  GbmConfig c = a.gbm;
  if (!a.config.empty()) c = io::gbm_config_from_json(io::read_json_file(a.config), c);
  c.validate();
  const GbmResult r = gbm_simulate(c, kDefaultGbmBudget, a.threads);

  OutputSet files(a.out_dir);
  files.write("trajectories.csv",
              render([&](std::ostream& os) { io::write_growth_csv(os, r.time_growth); }));
  const json summary = {{"ensemble_mean_growth", r.ensemble_mean_growth},
                        {"median_time_growth", r.median_time_growth},
                        {"theory_ensemble", c.drift},
                        {"theory_time", c.drift - 0.5 * c.volatility * c.volatility}};
  files.write("summary.json", summary.dump(2) + "\n");
  json resolved = io::to_json(c);
  resolved["command"] = "ergodicity";
  files.write_manifest("ergodicity", io::config_hash(resolved), c.seed);

  out << "ergodicity: ensemble growth " << io::format_number(r.ensemble_mean_growth)
      << " (theory " << io::format_number(c.drift) << "), median time growth "
      << io::format_number(r.median_time_growth) << " (theory "
      << io::format_number(c.drift - 0.5 * c.volatility * c.volatility) << ")\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pweight: probability weighting from model differences and estimation error"};
  app.name("pweight");
  app.require_subcommand(1);
  const std::string out_default = default_out_dir();

  MapArgs map_args;
  map_args.out_dir = out_default;
  auto* map = app.add_subcommand("map", "CDF map between two distributions or for a weighting model");
  map->add_option("--do", map_args.do_spec, "DO distribution, family:location,scale[,shape]");
  map->add_option("--dm", map_args.dm_spec, "DM distribution, family:location,scale[,shape]");
  map->add_option("--model", map_args.model, "weighting model, e.g. tk:0.65 or gauss:0.23,1.64");
  map->add_option("--points", map_args.points, "grid points")->check(CLI::Range(2, 10'000'000));
  map->add_option("--half-width", map_args.half_width, "grid half-width in units of the larger scale");
  map->add_flag("--pdf", map_args.pdf, "also write pdf_map.csv (x,p,w)");
  map->add_option("--out-dir", map_args.out_dir, "output directory");

  SimulateArgs sim_args;
  sim_args.out_dir = out_default;
  auto* simulate = app.add_subcommand("simulate", "DM counting simulation or analytic cautious weights");
  simulate->add_option("--spec", sim_args.spec, "distribution, family:location,scale[,shape]");
  simulate->add_option("--config", sim_args.config, "JSON config; its fields override flags");
  simulate->add_option("--T", sim_args.series_length, "series length");
  simulate->add_option("--dx", sim_args.bin_width, "bin width");
  simulate->add_option("--lo", sim_args.lo, "lower edge of the binned range");
  simulate->add_option("--hi", sim_args.hi, "upper edge of the binned range");
  simulate->add_option("--ensemble", sim_args.ensemble, "number of parallel series");
  simulate->add_option("--seed", sim_args.seed, "master seed");
  simulate->add_option("--multiplier", sim_args.multiplier, "standard errors added to each estimate");
  simulate->add_flag("--analytic", sim_args.analytic, "apply the correction to the exact density");
  simulate->add_option("--tdx", sim_args.tdx, "T dx for --analytic");
  simulate->add_option("--threads", sim_args.threads, "worker threads (0 = all cores)");
  simulate->add_option("--out-dir", sim_args.out_dir, "output directory");

  FitArgs fit_args;
  fit_args.out_dir = out_default;
  auto* fit = app.add_subcommand("fit", "fit weighting models to an fp,fw dataset");
  fit->add_option("--data", fit_args.data, "dataset CSV with header fp,fw")->required();
  fit->add_option("--model", fit_args.model, "tk, lattimore, gauss or tmap");
  fit->add_flag("--all", fit_args.all, "fit all four models");
  fit->add_flag("--strict", fit_args.strict, "exit 3 if any fit fails or does not converge");
  fit->add_option("--config", fit_args.config, "JSON Levenberg-Marquardt options");
  fit->add_option("--out-dir", fit_args.out_dir, "output directory");

  ErgodicityArgs erg_args;
  erg_args.out_dir = out_default;
  auto* erg = app.add_subcommand("ergodicity", "ensemble vs time-average growth of GBM");
  erg->add_option("--mu", erg_args.gbm.drift, "drift");
  erg->add_option("--sigma", erg_args.gbm.volatility, "volatility");
  erg->add_option("--t", erg_args.gbm.horizon, "horizon");
  erg->add_option("--n", erg_args.gbm.trajectories, "trajectories");
  erg->add_option("--steps", erg_args.gbm.steps, "time steps per trajectory");
  erg->add_option("--x0", erg_args.gbm.initial_value, "initial value");
  erg->add_option("--seed", erg_args.gbm.seed, "master seed");
  erg->add_option("--config", erg_args.config, "JSON config; its fields override flags");
  erg->add_option("--threads", erg_args.threads, "worker threads (0 = all cores)");
  erg->add_option("--out-dir", erg_args.out_dir, "output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*map) return cmd_map(map_args, out);
    if (*simulate) return cmd_simulate(sim_args, out);
    if (*fit) return cmd_fit(fit_args, out, err);
    if (*erg) return cmd_ergodicity(erg_args, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace pweight::cli
