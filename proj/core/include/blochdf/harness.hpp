#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochdf/bloch.hpp"
#include "blochdf/dfcore.hpp"
#include "blochdf/lattice.hpp"
#include "blochdf/metrics.hpp"
#include "blochdf/potential.hpp"

namespace blochdf {

struct ExperimentConfig {
  LatticeConfig lattice;
  PotentialSpec potential;
  std::optional<ExampleId> example;  // when set, potential came from the example
  int n_bands = 5;
  SolverOptions solver;
  FittingConfig fitting;
  int error_samples = 200;
  std::filesystem::path output_dir = "out";

  void validate() const;
};

/// Lattice and potential of one of the four model systems at its scaled size.
ExperimentConfig example_config(ExampleId id);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Applies the keys present in `j` on top of `base`. Unknown keys are an error.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  ExperimentConfig base = {});

struct BenchRecord {
  int n_bands = 0;
  int k_per_dim = 0;
  Index n_col = 0;
  double t_solve_s = 0.0;
  double t_select_s = 0.0;  // median over repeats
  double err_l2_max = 0.0, err_l2_mean = 0.0;
  double err_c_max = 0.0, err_c_mean = 0.0;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

struct BenchOptions {
  std::vector<int> n_bands;    // sweep over N
  std::vector<int> k_per_dim;  // sweep over k samples per dimension
  int repeats = 3;
  int error_samples = 200;
  bool with_errors = true;
};

/// Fits every (N, k_per_dim) point on slices of `fine`, which must hold at
/// least max(N) bands on a mesh divisible by every k_per_dim.
std::vector<BenchRecord> bench_sweep(const BlochOrbitalSet& fine, const FittingConfig& fit,
                                     const BenchOptions& opts, double t_solve_s);

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& rows);

SampledPotential potential_on(const ExperimentConfig& cfg, const RealGrid& grid);

/// bands.csv along the high-symmetry path.
BandTable cmd_bands(const ExperimentConfig& cfg, int pts_per_segment = 16);

struct FitArtifacts {
  FittingResult result;
  ErrorReport errors;
  double t_solve_s = 0.0;
};

/// Solve, fit, sample errors. Writes fit.bin, fit.json, errors.csv,
/// errors_summary.json into cfg.output_dir.
FitArtifacts cmd_fit(const ExperimentConfig& cfg);

/// Solves the largest (N, K) once and sweeps sub-blocks. Writes bench.csv.
std::vector<BenchRecord> cmd_bench(const ExperimentConfig& cfg, const BenchOptions& opts);

struct ReproducePreset {
  ExperimentConfig base;
  BenchOptions bench;
  int band_path_bands = 8;
  int pts_per_segment = 12;
};

ReproducePreset reproduce_preset(ExampleId id, bool full);

/// Rough peak memory of a preset in bytes (orbitals, transformed copy, sketch).
double estimated_bytes(const ReproducePreset& preset);

/// Full artifact directory: potential.csv, bands.csv, bench.csv, errors.csv,
/// errors_summary.json, fit.bin, fit.json, manifest.json.
nlohmann::json cmd_reproduce(ExampleId id, const std::filesystem::path& out_dir, bool full,
                             std::uint64_t seed = 0);

}  // namespace blochdf
