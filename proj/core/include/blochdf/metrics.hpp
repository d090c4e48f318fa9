#pragma once

#include <cstdint>
#include <vector>

#include "blochdf/dfcore.hpp"
#include "blochdf/fft.hpp"
#include "blochdf/lattice.hpp"
#include "blochdf/types.hpp"

namespace blochdf {

/// Fourier multiplier of the zero-mean periodic Coulomb kernel
/// -lap G = 4 pi (delta - 1): ghat(m) = 4 pi / |2 pi m|^2, ghat(0) = 0.
struct GreenMultiplier {
  RVector ghat;  // FFT order
  static GreenMultiplier build(const RealGrid& grid);
};

/// Grid L2 norm sqrt((1/N_grid) sum_x |f(x)|^2).
double l2_norm(const CVector& f);

/// Coulomb norms on one grid with a reusable FFT plan.
class CoulombMetric {
 public:
  explicit CoulombMetric(const RealGrid& grid);

  const GreenMultiplier& green() const { return green_; }

  /// sqrt(sum_m ghat(m) |fhat(m)|^2), fhat(m) = (1/N_grid) sum_x f(x) e^{-i 2 pi m.x}.
  double norm(const CVector& f) const;
  /// Norm of the kernel G(x - y) e^{-i q.(x - y)}: the same sum with f
  /// replaced by f(x) e^{-i q.x}.
  double shifted_norm(const CVector& f, const RVector& q) const;

 private:
  const RealGrid* grid_;
  GreenMultiplier green_;
  GridFft fft_;
};

double coulomb_norm(const RealGrid& grid, const CVector& f);

/// E_{nkml} = sum_m ghat(m) |F(m)|^2 with F the grid transform of
/// rho_{nkml}(x) e^{-i (k - l).x}.
double eri(const PairIndex& q, const BlochOrbitalSet& orbitals);
double eri(const PairIndex& q, const BlochOrbitalSet& orbitals, const CoulombMetric& metric);

/// The same integral with rho replaced by its density-fitted reconstruction.
double eri_fitted(const PairIndex& q, const BlochOrbitalSet& orbitals,
                  const FittingResult& result);
double eri_fitted(const PairIndex& q, const BlochOrbitalSet& orbitals,
                  const FittingResult& result, const CoulombMetric& metric);

struct ErrorSample {
  PairIndex pair;
  double err_l2_rel = 0.0;
  double err_coulomb_rel = 0.0;
};

struct ErrorReport {
  std::vector<ErrorSample> samples;
  double l2_max = 0.0, l2_mean = 0.0;
  double coulomb_max = 0.0, coulomb_mean = 0.0;
  double hermitian_asymmetry_max = 0.0;  // diagnostic only
  int sample_count = 0;
  int redraws = 0;  // pairs skipped for vanishing norm
  std::uint64_t seed = 0;
};

/// Relative L2 and Coulomb errors of sample_count quadruples drawn uniformly
/// with replacement.
ErrorReport sample_errors(const BlochOrbitalSet& orbitals, const FittingResult& result,
                          int sample_count, std::uint64_t seed);

struct EriBoundSample {
  PairIndex pair;
  double eri = 0.0, eri_fit = 0.0;
  double lhs = 0.0;        // |E - E~|
  double rhs_shift = 0.0;  // ||d||_s (||rho||_s + ||rho~||_s), shifted kernel
  double rhs_plain = 0.0;  // same with the unshifted Coulomb norm
};

struct EriBoundReport {
  std::vector<EriBoundSample> samples;
  bool shifted_bound_holds = true;
  double max_ratio_shift = 0.0;  // max lhs / rhs_shift
  double c_plain = 0.0;          // max lhs / rhs_plain over samples with rhs_plain > 0
};

/// Checks |E - E~| <= ||rho - rho~|| (||rho|| + ||rho~||) on sampled quadruples.
/// The shifted-kernel inequality is asserted with slack `rel_slack` for
/// floating-point rounding; the unshifted-norm constant is only measured.
EriBoundReport check_eri_bound(const BlochOrbitalSet& orbitals, const FittingResult& result,
                               int sample_count, std::uint64_t seed, double rel_slack = 1e-10);

}  // namespace blochdf
