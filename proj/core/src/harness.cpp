#include "blochdf/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "blochdf/errors.hpp"
#include "blochdf/io.hpp"
#include "blochdf/rng.hpp"

namespace blochdf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void ExperimentConfig::validate() const {
  lattice.validate();
  potential.validate();
  solver.validate();
  fitting.validate();
  if (n_bands < 1) throw ConfigError("nbands must be >= 1");
  if (2 * static_cast<Index>(n_bands) > lattice.n_grid())
    throw ConfigError("nbands must not exceed N_grid / 2");
  if (error_samples < 1) throw ConfigError("samples must be >= 1");
}

ExperimentConfig example_config(ExampleId id) {
  ExperimentConfig cfg;
  cfg.example = id;
  cfg.potential = paper_potential(id);
  cfg.lattice.dim = example_dim(id);
  if (cfg.lattice.dim == 2) {
    cfg.lattice.n_per_dim = 48;
    cfg.lattice.k_per_dim = 4;
    cfg.n_bands = 10;
  } else {
    cfg.lattice.n_per_dim = 16;
    cfg.lattice.k_per_dim = 2;
    cfg.n_bands = 8;
    // Pair densities in 3D need about 50 N columns, more than the 36 N rows
    // of a c = 6 sketch, so the 3D examples oversample harder.
    cfg.fitting.c_oversample = 12.0;
  }
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["dim"] = cfg.lattice.dim;
  j["ngrid"] = cfg.lattice.n_per_dim;
  j["nk"] = cfg.lattice.k_per_dim;
  j["nbands"] = cfg.n_bands;
  j["potential"] = cfg.example ? to_string(*cfg.example) : to_string(cfg.potential.kind);
  j["sigma"] = cfg.potential.sigma;
  j["depth"] = cfg.potential.depth;
  j["image_cutoff"] = cfg.potential.image_cutoff;
  j["solver"] = to_string(cfg.solver.method);
  j["max_iter"] = cfg.solver.max_iter;
  j["residual_tol"] = cfg.solver.residual_tol;
  j["precond_shift"] = cfg.solver.precond_shift;
  j["tol"] = cfg.fitting.tol;
  j["oversample"] = cfg.fitting.c_oversample;
  if (cfg.fitting.rows) j["rows"] = *cfg.fitting.rows;
  if (cfg.fitting.max_cols) j["max_cols"] = *cfg.fitting.max_cols;
  j["seed"] = cfg.fitting.seed;
  j["samples"] = cfg.error_samples;
  j["out"] = cfg.output_dir.string();
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig cfg) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  try {
    // The potential key goes first so explicit sigma/depth override the
    // example defaults.
    if (j.contains("potential")) {
      const std::string name = j.at("potential").get<std::string>();
      if (name == "gaussian" || name == "flattop") {
        cfg.example.reset();
        cfg.potential.kind = parse_potential_kind(name);
      } else {
        const ExampleId id = parse_example_id(name);
        if (example_dim(id) != cfg.lattice.dim) {
          // Switching dimension: start from that example's scaled setup.
          const ExperimentConfig ex = example_config(id);
          cfg.lattice = ex.lattice;
          cfg.n_bands = ex.n_bands;
          cfg.fitting.c_oversample = ex.fitting.c_oversample;
        }
        cfg.example = id;
        cfg.potential = paper_potential(id);
      }
    }
    for (const auto& [key, value] : j.items()) {
      if (key == "potential") continue;
      if (key == "dim") cfg.lattice.dim = value.get<int>();
      else if (key == "ngrid") cfg.lattice.n_per_dim = value.get<int>();
      else if (key == "nk") cfg.lattice.k_per_dim = value.get<int>();
      else if (key == "nbands") cfg.n_bands = value.get<int>();
      else if (key == "sigma") cfg.potential.sigma = value.get<double>();
      else if (key == "depth") cfg.potential.depth = value.get<double>();
      else if (key == "image_cutoff") cfg.potential.image_cutoff = value.get<int>();
      else if (key == "solver") cfg.solver.method = parse_solver_method(value.get<std::string>());
      else if (key == "max_iter") cfg.solver.max_iter = value.get<int>();
      else if (key == "residual_tol") cfg.solver.residual_tol = value.get<double>();
      else if (key == "precond_shift") cfg.solver.precond_shift = value.get<double>();
      else if (key == "tol") cfg.fitting.tol = value.get<double>();
      else if (key == "oversample") cfg.fitting.c_oversample = value.get<double>();
      else if (key == "rows") cfg.fitting.rows = value.get<Index>();
      else if (key == "max_cols") cfg.fitting.max_cols = value.get<Index>();
      else if (key == "seed") {
        cfg.fitting.seed = value.get<std::uint64_t>();
        cfg.solver.seed = cfg.fitting.seed;
      } else if (key == "samples") cfg.error_samples = value.get<int>();
      else if (key == "out") cfg.output_dir = value.get<std::string>();
      else throw ConfigError("unknown configuration key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    // Comments are allowed so hand-written config files can be annotated.
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
  }
  return config_from_json(j, std::move(base));
}

SampledPotential potential_on(const ExperimentConfig& cfg, const RealGrid& grid) {
  return sample_potential(cfg.potential, grid);
}

std::vector<BenchRecord> bench_sweep(const BlochOrbitalSet& fine, const FittingConfig& fit,
                                     const BenchOptions& opts, double t_solve_s) {
  if (opts.n_bands.empty() || opts.k_per_dim.empty())
    throw ConfigError("bench sweep needs at least one N and one k_per_dim");
  if (opts.repeats < 1) throw ConfigError("bench repeats must be >= 1");
  std::vector<BenchRecord> rows;
  for (int kpd : opts.k_per_dim) {
    for (int n : opts.n_bands) {
      const BlochOrbitalSet sub = slice_orbitals(fine, n, kpd);
      std::vector<double> times;
      FittingResult res;
      for (int rep = 0; rep < opts.repeats; ++rep) {
        res = density_fit(sub, fit);
        times.push_back(res.t_select_s);
      }
      std::sort(times.begin(), times.end());

      BenchRecord rec;
      rec.n_bands = n;
      rec.k_per_dim = kpd;
      rec.n_col = res.n_col;
      rec.t_solve_s = t_solve_s;
      rec.t_select_s = times[times.size() / 2];
      rec.seed = fit.seed;
      rec.tol = fit.tol;
      if (opts.with_errors) {
        const ErrorReport er = sample_errors(sub, res, opts.error_samples, fit.seed);
        rec.err_l2_max = er.l2_max;
        rec.err_l2_mean = er.l2_mean;
        rec.err_c_max = er.coulomb_max;
        rec.err_c_mean = er.coulomb_mean;
      }
      rows.push_back(rec);
    }
  }
  return rows;
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows) {
  std::ostringstream out;
  out << "N,k_per_dim,N_col,t_solve_s,t_select_s,err_l2_max,err_l2_mean,err_c_max,err_c_mean,"
         "seed,tol\n";
  for (const BenchRecord& r : rows) {
    out << r.n_bands << ',' << r.k_per_dim << ',' << r.n_col << ','
        << io::format_double(r.t_solve_s) << ',' << io::format_double(r.t_select_s) << ','
        << io::format_double(r.err_l2_max) << ',' << io::format_double(r.err_l2_mean) << ','
        << io::format_double(r.err_c_max) << ',' << io::format_double(r.err_c_mean) << ','
        << r.seed << ',' << io::format_double(r.tol) << '\n';
  }
  io::write_text(path, out.str());
}

BandTable cmd_bands(const ExperimentConfig& cfg, int pts_per_segment) {
  cfg.validate();
  const RealGrid grid = build_grid(cfg.lattice);
  const SampledPotential v = potential_on(cfg, grid);
  const BandPath path = band_path(cfg.lattice.dim, pts_per_segment);
  BandTable table = bands_along_path(path, grid, cfg.n_bands, v, cfg.solver);
  io::write_band_csv(cfg.output_dir / "bands.csv", table);
  return table;
}

FitArtifacts cmd_fit(const ExperimentConfig& cfg) {
  cfg.validate();
  const RealGrid grid = build_grid(cfg.lattice);
  const SampledPotential v = potential_on(cfg, grid);
  FitArtifacts art;
  const auto t0 = Clock::now();
  const BlochOrbitalSet orbitals = solve_all(cfg.lattice, cfg.n_bands, v, cfg.solver);
  art.t_solve_s = seconds_since(t0);
  art.result = density_fit(orbitals, cfg.fitting);
  art.errors = sample_errors(orbitals, art.result, cfg.error_samples, cfg.fitting.seed);

  io::save_fitting_result(cfg.output_dir / "fit.bin", art.result);
  nlohmann::json summary = io::fitting_summary(art.result);
  summary["config"] = to_json(cfg);
  io::write_json(cfg.output_dir / "fit.json", summary);
  io::write_error_csv(cfg.output_dir / "errors.csv", art.errors);
  io::write_json(cfg.output_dir / "errors_summary.json",
                 io::error_summary(art.errors, cfg.fitting.tol));
  return art;
}

namespace {

BlochOrbitalSet solve_finest(const ExperimentConfig& cfg, const BenchOptions& opts,
                             double& t_solve_s) {
  int kmax = *std::max_element(opts.k_per_dim.begin(), opts.k_per_dim.end());
  for (int k : opts.k_per_dim) {
    if (kmax % k != 0)
      throw ConfigError("k_per_dim " + std::to_string(k) + " does not divide " +
                        std::to_string(kmax));
  }
  const int nmax = *std::max_element(opts.n_bands.begin(), opts.n_bands.end());
  LatticeConfig lat = cfg.lattice;
  lat.k_per_dim = kmax;
  const RealGrid grid = build_grid(lat);
  const SampledPotential v = potential_on(cfg, grid);
  const auto t0 = Clock::now();
  BlochOrbitalSet set = solve_all(lat, nmax, v, cfg.solver);
  t_solve_s = seconds_since(t0);
  return set;
}

}  // namespace

std::vector<BenchRecord> cmd_bench(const ExperimentConfig& cfg, const BenchOptions& opts) {
  cfg.validate();
  if (opts.n_bands.empty() || opts.k_per_dim.empty())
    throw ConfigError("bench sweep needs at least one N and one k_per_dim");
  double t_solve = 0.0;
  const BlochOrbitalSet fine = solve_finest(cfg, opts, t_solve);
  auto rows = bench_sweep(fine, cfg.fitting, opts, t_solve);
  write_bench_csv(cfg.output_dir / "bench.csv", rows);
  return rows;
}

ReproducePreset reproduce_preset(ExampleId id, bool full) {
  ReproducePreset p;
  p.base = example_config(id);
  p.bench.repeats = 3;
  p.bench.error_samples = 200;
  if (example_dim(id) == 2) {
    p.base.lattice.n_per_dim = 48;
    if (full) {
      p.bench.n_bands = {5, 10, 15, 20, 25, 30, 35, 41};
      p.bench.k_per_dim = {4, 8, 16};
    } else {
      p.bench.n_bands = {5, 10, 15, 20};
      p.bench.k_per_dim = {2, 4};
    }
    p.band_path_bands = 10;
    p.pts_per_segment = 16;
  } else {
    if (full) {
      p.base.lattice.n_per_dim = 24;
      p.bench.n_bands = {5, 10, 20, 30, 41};
      p.bench.k_per_dim = {3, 6, 12};
    } else {
      p.base.lattice.n_per_dim = 16;
      p.bench.n_bands = {4, 8};
      p.bench.k_per_dim = {1, 2};
    }
    p.band_path_bands = 8;
    p.pts_per_segment = 8;
  }
  p.base.lattice.k_per_dim = *std::max_element(p.bench.k_per_dim.begin(), p.bench.k_per_dim.end());
  p.base.n_bands = *std::max_element(p.bench.n_bands.begin(), p.bench.n_bands.end());
  return p;
}

double estimated_bytes(const ReproducePreset& preset) {
  const double n_grid = static_cast<double>(preset.base.lattice.n_grid());
  const double nk = static_cast<double>(preset.base.lattice.n_k()) * preset.base.n_bands;
  const double r = preset.base.fitting.c_oversample * std::sqrt(double(preset.base.n_bands));
  // Fine orbitals, one sliced copy, the transformed copy, and the sketch twice
  // (input and QR workspace).
  return 16.0 * n_grid * (3.0 * nk + 2.0 * r * r);
}

namespace {

double physical_memory_bytes() {
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return 0.0;
  return static_cast<double>(pages) * static_cast<double>(page);
}

}  // namespace

nlohmann::json cmd_reproduce(ExampleId id, const std::filesystem::path& out_dir, bool full,
                             std::uint64_t seed) {
  ReproducePreset preset = reproduce_preset(id, full);
  preset.base.output_dir = out_dir;
  preset.base.fitting.seed = seed;
  preset.base.solver.seed = seed;

  const double need = estimated_bytes(preset);
  const double have = physical_memory_bytes();
  if (have > 0.0 && need > 0.8 * have) {
    std::ostringstream msg;
    msg << "preset needs about " << need / 1e9 << " GB but only " << have / 1e9
        << " GB of physical memory is present; run the scaled preset (omit --full) "
           "or reduce --ngrid/--nk/--nbands via 'bench'";
    throw ResourceError(msg.str());
  }
  preset.base.validate();

  const ExperimentConfig& cfg = preset.base;
  std::filesystem::create_directories(out_dir);
  io::write_potential_csv(out_dir / "potential.csv", cfg.potential, cfg.lattice.dim,
                          cfg.lattice.n_per_dim);

  ExperimentConfig band_cfg = cfg;
  band_cfg.n_bands = preset.band_path_bands;
  cmd_bands(band_cfg, preset.pts_per_segment);

  double t_solve = 0.0;
  const BlochOrbitalSet fine = solve_finest(cfg, preset.bench, t_solve);
  const auto rows = bench_sweep(fine, cfg.fitting, preset.bench, t_solve);
  write_bench_csv(out_dir / "bench.csv", rows);

  // The largest sweep point doubles as the reference fit.
  const FittingResult fit = density_fit(fine, cfg.fitting);
  const ErrorReport errors = sample_errors(fine, fit, cfg.error_samples, seed);
  io::save_fitting_result(out_dir / "fit.bin", fit);
  nlohmann::json fit_summary = io::fitting_summary(fit);
  fit_summary["config"] = to_json(cfg);
  io::write_json(out_dir / "fit.json", fit_summary);
  io::write_error_csv(out_dir / "errors.csv", errors);
  io::write_json(out_dir / "errors_summary.json", io::error_summary(errors, cfg.fitting.tol));

  nlohmann::json manifest;
  manifest["tool"] = "blochdf";
  manifest["version"] = "0.3.0";
  manifest["example"] = to_string(id);
  manifest["preset"] = full ? "full" : "scaled";
  manifest["config"] = to_json(cfg);
  manifest["sweep"] = {{"N", preset.bench.n_bands}, {"k_per_dim", preset.bench.k_per_dim}};
  manifest["seeds"] = {{"fitting", cfg.fitting.seed},
                       {"solver", cfg.solver.seed},
                       {"errors", seed}};
  nlohmann::json files = nlohmann::json::array();
  for (const char* name : {"potential.csv", "bands.csv", "bench.csv", "errors.csv",
                           "errors_summary.json", "fit.bin", "fit.json"}) {
    const auto path = out_dir / name;
    files.push_back({{"name", name},
                     {"bytes", std::filesystem::file_size(path)},
                     {"sha256", io::sha256_file(path)}});
  }
  manifest["files"] = files;
  io::write_json(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace blochdf
