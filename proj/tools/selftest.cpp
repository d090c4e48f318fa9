#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "blochdf/bloch.hpp"
#include "blochdf/dfcore.hpp"
#include "blochdf/metrics.hpp"

namespace blochdf::tools {

namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

bool free_particle_bands() {
  const RealGrid grid(2, 8);
  SampledPotential v{2, RVector::Zero(grid.size())};
  KPoint gamma{RVector::Zero(2)};
  const BandSolution sol = solve_bands(grid, gamma, 5, v, SolverOptions{});
  const double shell = 2.0 * std::numbers::pi * std::numbers::pi;
  if (std::abs(sol.energies(0)) > 1e-8) return false;
  for (int n = 1; n < 5; ++n)
    if (std::abs(sol.energies(n) - shell) > 1e-8) return false;
  return true;
}

bool coulomb_cosine() {
  const RealGrid grid(2, 16);
  CVector f(grid.size());
  for (Index j = 0; j < grid.size(); ++j)
    f(j) = std::cos(2.0 * std::numbers::pi * grid.points()(j, 0));
  return std::abs(coulomb_norm(grid, f) - std::sqrt(1.0 / (2.0 * std::numbers::pi))) < 1e-10;
}

bool rank_one_selection() {
  CVector c(6);
  c << 1.0, -2.0, Complex(0.5, 1.0), 3.0, 0.0, Complex(0.0, -1.0);
  CMatrix m(6, 3);
  m << c, 2.0 * c, 3.0 * c;
  const ColumnSelection sel = pivoted_qr_select(m, 1e-5);
  const CMatrix recon = m.col(sel.selected[0]) * sel.P;
  return sel.n_col() == 1 && (recon - m).norm() < 1e-12 * m.norm();
}

bool interpolation_exactness() {
  LatticeConfig lat{2, 8, 2};
  const RealGrid grid = build_grid(lat);
  const SampledPotential v = sample_potential(paper_potential(ExampleId::gauss_2d), grid);
  const BlochOrbitalSet orb = solve_all(lat, 2, v, SolverOptions{});
  const FittingResult fit = density_fit(orb, FittingConfig{});
  const PairIndex q{0, 1, 1, 3};
  const CVector rho = pair_density(orb, q);
  const CVector approx = reconstruct_pair(q, orb, fit);
  for (Index x : fit.selected)
    if (std::abs(rho(x) - approx(x)) > 1e-12) return false;
  return true;
}

}  // namespace

int run_selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"free_particle_bands", free_particle_bands},
      {"coulomb_norm_cosine", coulomb_cosine},
      {"rank_one_selection", rank_one_selection},
      {"interpolation_exactness", interpolation_exactness},
  };
  int failed = 0;
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      out << "  " << c.name << " threw: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
    if (!ok) ++failed;
  }
  return failed;
}

}  // namespace blochdf::tools
