// blochdf: band structures and periodic density fitting of Bloch orbitals.
//
//   blochdf bands     --potential 2d_gauss --nbands 10 --out run/
//   blochdf fit       --potential 2d_gauss --nk 4 --nbands 10 --tol 1e-5 --out run/
//   blochdf bench     --potential 2d_gauss --sweep-n 5,10,20 --sweep-k 2,4 --out run/
//   blochdf reproduce 2d_gauss --out run/ [--full]
//   blochdf selftest
//
// Failures exit nonzero and print {"error": <kind>, "message": ...} on stderr.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blochdf/errors.hpp"
#include "blochdf/harness.hpp"
#include "blochdf/io.hpp"
#include "selftest.hpp"

namespace {

using blochdf::ExperimentConfig;

struct CommonFlags {
  std::string config_file;
  std::optional<int> dim, ngrid, nk, nbands, samples, max_iter;
  std::optional<std::string> potential, solver, out;
  std::optional<double> sigma, depth, tol, oversample;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file (flags override it)");
    app->add_option("--dim", dim, "spatial dimension (2 or 3)");
    app->add_option("--ngrid", ngrid, "real-space points per dimension (even)");
    app->add_option("--nk", nk, "k-points per dimension");
    app->add_option("--nbands", nbands, "number of bands N");
    app->add_option("--potential", potential,
                    "2d_gauss|2d_flattop|3d_gauss|3d_flattop|gaussian|flattop");
    app->add_option("--sigma", sigma, "well width");
    app->add_option("--depth", depth, "well depth");
    app->add_option("--tol", tol, "column selection tolerance");
    app->add_option("--oversample", oversample, "c in r = c sqrt(N)");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--samples", samples, "number of sampled error quadruples");
    app->add_option("--out", out, "output directory");
    app->add_option("--solver", solver, "lobpcg|dense");
    app->add_option("--max-iter", max_iter, "eigensolver iteration cap");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = blochdf::example_config(blochdf::ExampleId::gauss_2d);
    if (!config_file.empty()) cfg = blochdf::load_config_file(config_file, cfg);
    nlohmann::json j = nlohmann::json::object();
    if (potential) j["potential"] = *potential;
    if (dim) j["dim"] = *dim;
    if (ngrid) j["ngrid"] = *ngrid;
    if (nk) j["nk"] = *nk;
    if (nbands) j["nbands"] = *nbands;
    if (sigma) j["sigma"] = *sigma;
    if (depth) j["depth"] = *depth;
    if (tol) j["tol"] = *tol;
    if (oversample) j["oversample"] = *oversample;
    if (seed) j["seed"] = *seed;
    if (samples) j["samples"] = *samples;
    if (out) j["out"] = *out;
    if (solver) j["solver"] = *solver;
    if (max_iter) j["max_iter"] = *max_iter;
    cfg = blochdf::config_from_json(j, cfg);
    cfg.validate();
    return cfg;
  }
};

void report_error(const std::string& kind, const std::string& message) {
  nlohmann::json j = {{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch-wave band structures and periodic density fitting"};
  app.require_subcommand(1);

  CommonFlags bands_flags, fit_flags, bench_flags;
  int pts_per_segment = 16;
  auto* bands = app.add_subcommand("bands", "band structure along the high-symmetry path");
  bands_flags.attach(bands);
  bands->add_option("--pts", pts_per_segment, "points per path segment");

  auto* fit = app.add_subcommand("fit", "solve, fit and sample fitting errors");
  fit_flags.attach(fit);

  std::vector<int> sweep_n{5, 10, 15, 20}, sweep_k{2, 4};
  int repeats = 3;
  auto* bench = app.add_subcommand("bench", "N_col, timing and error sweep");
  bench_flags.attach(bench);
  bench->add_option("--sweep-n", sweep_n, "band counts")->delimiter(',');
  bench->add_option("--sweep-k", sweep_k, "k-points per dimension")->delimiter(',');
  bench->add_option("--repeats", repeats, "timing repeats (median reported)");

  std::string example = "2d_gauss";
  std::string repro_out = "reproduce";
  std::uint64_t repro_seed = 0;
  bool full = false;
  auto* repro = app.add_subcommand("reproduce", "full artifact set for one model system");
  repro->add_option("example", example, "2d_gauss|2d_flattop|3d_gauss|3d_flattop")->required();
  repro->add_option("--out", repro_out, "output directory");
  repro->add_option("--seed", repro_seed, "random seed");
  repro->add_flag("--full", full, "full-size configuration instead of the scaled preset");

  auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }

  try {
    if (*bands) {
      const ExperimentConfig cfg = bands_flags.resolve();
      blochdf::cmd_bands(cfg, pts_per_segment);
      std::cout << (cfg.output_dir / "bands.csv").string() << '\n';
    } else if (*fit) {
      const ExperimentConfig cfg = fit_flags.resolve();
      const auto art = blochdf::cmd_fit(cfg);
      nlohmann::json j = blochdf::io::error_summary(art.errors, cfg.fitting.tol);
      j["n_col"] = art.result.n_col;
      j["t_solve_s"] = art.t_solve_s;
      j["t_select_s"] = art.result.t_select_s;
      std::cout << j.dump(2) << '\n';
    } else if (*bench) {
      ExperimentConfig cfg = bench_flags.resolve();
      blochdf::BenchOptions opts;
      opts.n_bands = sweep_n;
      opts.k_per_dim = sweep_k;
      opts.repeats = repeats;
      opts.error_samples = cfg.error_samples;
      const auto rows = blochdf::cmd_bench(cfg, opts);
      std::cout << (cfg.output_dir / "bench.csv").string() << " (" << rows.size() << " rows)\n";
    } else if (*repro) {
      const auto manifest = blochdf::cmd_reproduce(blochdf::parse_example_id(example),
                                                   repro_out, full, repro_seed);
      std::cout << manifest.dump(2) << '\n';
    } else if (*selftest) {
      const int failed = blochdf::tools::run_selftest(std::cout);
      if (failed > 0) {
        report_error("selftest", std::to_string(failed) + " check(s) failed");
        return 3;
      }
    }
  } catch (const blochdf::Error& e) {
    report_error(e.kind(), e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 2;
  }
  return 0;
}
