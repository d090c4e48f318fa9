#include "blochdf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blochdf/errors.hpp"
#include "blochdf/rng.hpp"

namespace blochdf {

GreenMultiplier GreenMultiplier::build(const RealGrid& grid) {
  GreenMultiplier g;
  g.ghat.resize(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const double m2 = grid.freq().row(j).cast<double>().squaredNorm();
    g.ghat(j) = m2 == 0.0 ? 0.0 : 1.0 / (std::numbers::pi * m2);
  }
  return g;
}

double l2_norm(const CVector& f) {
  if (f.size() == 0) return 0.0;
  return std::sqrt(f.squaredNorm() / static_cast<double>(f.size()));
}

CoulombMetric::CoulombMetric(const RealGrid& grid)
    : grid_(&grid), green_(GreenMultiplier::build(grid)), fft_(grid.dim(), grid.n_per_dim()) {}

double CoulombMetric::norm(const CVector& f) const {
  if (f.size() != grid_->size()) throw IndexError("function length does not match grid");
  const CVector fhat = fft_.forward(f);
  const double n = static_cast<double>(f.size());
  const double sum = (green_.ghat.array() * fhat.array().abs2()).sum() / (n * n);
  return std::sqrt(sum);
}

double CoulombMetric::shifted_norm(const CVector& f, const RVector& q) const {
  if (q.size() != grid_->dim()) throw IndexError("shift has wrong dimension");
  if (q.isZero(0.0)) return norm(f);
  CVector g(f.size());
  for (Index j = 0; j < f.size(); ++j)
    g(j) = f(j) * std::polar(1.0, -q.dot(grid_->points().row(j).transpose()));
  return norm(g);
}

double coulomb_norm(const RealGrid& grid, const CVector& f) {
  return CoulombMetric(grid).norm(f);
}

namespace {

RVector momentum_transfer(const BlochOrbitalSet& o, const PairIndex& q) {
  return o.kmesh[static_cast<std::size_t>(q.k)].coords -
         o.kmesh[static_cast<std::size_t>(q.l)].coords;
}

}  // namespace

double eri(const PairIndex& q, const BlochOrbitalSet& orbitals, const CoulombMetric& metric) {
  const double s = metric.shifted_norm(pair_density(orbitals, q), momentum_transfer(orbitals, q));
  return s * s;
}

double eri(const PairIndex& q, const BlochOrbitalSet& orbitals) {
  const RealGrid grid = build_grid(orbitals.lattice);
  return eri(q, orbitals, CoulombMetric(grid));
}

double eri_fitted(const PairIndex& q, const BlochOrbitalSet& orbitals,
                  const FittingResult& result, const CoulombMetric& metric) {
  const double s = metric.shifted_norm(reconstruct_pair(q, orbitals, result),
                                       momentum_transfer(orbitals, q));
  return s * s;
}

double eri_fitted(const PairIndex& q, const BlochOrbitalSet& orbitals,
                  const FittingResult& result) {
  const RealGrid grid = build_grid(orbitals.lattice);
  return eri_fitted(q, orbitals, result, CoulombMetric(grid));
}

namespace {

PairIndex draw_pair(CounterRng& rng, const BlochOrbitalSet& o) {
  PairIndex q;
  const auto nb = static_cast<std::uint64_t>(o.n_bands);
  const auto nk = static_cast<std::uint64_t>(o.n_k());
  q.n = static_cast<int>(rng.below(nb));
  q.k = static_cast<int>(rng.below(nk));
  q.m = static_cast<int>(rng.below(nb));
  q.l = static_cast<int>(rng.below(nk));
  return q;
}

}  // namespace

ErrorReport sample_errors(const BlochOrbitalSet& orbitals, const FittingResult& result,
                          int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw ConfigError("sample_count must be >= 1");
  const RealGrid grid = build_grid(orbitals.lattice);
  const CoulombMetric metric(grid);
  CounterRng rng(seed, RngStream::error_pairs);

  ErrorReport rep;
  rep.seed = seed;
  while (static_cast<int>(rep.samples.size()) < sample_count) {
    const PairIndex q = draw_pair(rng, orbitals);
    const CVector rho = pair_density(orbitals, q);
    const CVector diff = rho - reconstruct_pair(q, orbitals, result);
    const double l2 = l2_norm(rho);
    const double cn = metric.norm(rho);
    if (l2 == 0.0 || cn == 0.0) {
      if (++rep.redraws > 100 * sample_count)
        throw DegenerateInputError("too many vanishing pair densities");
      continue;
    }
    ErrorSample s;
    s.pair = q;
    s.err_l2_rel = l2_norm(diff) / l2;
    s.err_coulomb_rel = metric.norm(diff) / cn;
    rep.samples.push_back(s);
    rep.hermitian_asymmetry_max =
        std::max(rep.hermitian_asymmetry_max, hermitian_asymmetry(q, orbitals, result));
  }
  rep.sample_count = sample_count;
  for (const ErrorSample& s : rep.samples) {
    rep.l2_max = std::max(rep.l2_max, s.err_l2_rel);
    rep.coulomb_max = std::max(rep.coulomb_max, s.err_coulomb_rel);
    rep.l2_mean += s.err_l2_rel;
    rep.coulomb_mean += s.err_coulomb_rel;
  }
  rep.l2_mean /= sample_count;
  rep.coulomb_mean /= sample_count;
  return rep;
}

EriBoundReport check_eri_bound(const BlochOrbitalSet& orbitals, const FittingResult& result,
                               int sample_count, std::uint64_t seed, double rel_slack) {
  if (sample_count < 1) throw ConfigError("sample_count must be >= 1");
  const RealGrid grid = build_grid(orbitals.lattice);
  const CoulombMetric metric(grid);
  CounterRng rng(seed, RngStream::eri_pairs);

  EriBoundReport rep;
  for (int i = 0; i < sample_count; ++i) {
    const PairIndex q = draw_pair(rng, orbitals);
    const RVector shift = momentum_transfer(orbitals, q);
    const CVector rho = pair_density(orbitals, q);
    const CVector fit = reconstruct_pair(q, orbitals, result);
    const CVector diff = rho - fit;

    EriBoundSample s;
    s.pair = q;
    const double n_rho = metric.shifted_norm(rho, shift);
    const double n_fit = metric.shifted_norm(fit, shift);
    s.eri = n_rho * n_rho;
    s.eri_fit = n_fit * n_fit;
    s.lhs = std::abs(s.eri - s.eri_fit);
    s.rhs_shift = metric.shifted_norm(diff, shift) * (n_rho + n_fit);
    s.rhs_plain = metric.norm(diff) * (metric.norm(rho) + metric.norm(fit));

    if (s.lhs > s.rhs_shift * (1.0 + rel_slack) + rel_slack * s.eri)
      rep.shifted_bound_holds = false;
    if (s.rhs_shift > 0.0) rep.max_ratio_shift = std::max(rep.max_ratio_shift, s.lhs / s.rhs_shift);
    if (s.rhs_plain > 0.0) rep.c_plain = std::max(rep.c_plain, s.lhs / s.rhs_plain);
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace blochdf
