#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blochdf/bloch.hpp"
#include "blochdf/types.hpp"

namespace blochdf {

struct FittingConfig {
  double tol = 1e-5;           // relative threshold on |R_ii| / |R_11|
  double c_oversample = 6.0;   // r = round(c * sqrt(N)) sketch rows
  std::uint64_t seed = 0;
  std::optional<Index> max_cols;  // default N_grid (no cap)
  /// Explicit number of sampled transform rows r. When unset, r is derived
  /// from c_oversample and clamped to N K; an explicit r > N K is an error.
  std::optional<Index> rows;

  void validate() const;
};

/// Interpolative decomposition M ~= M(:, selected) * P from column-pivoted
/// Householder QR.
struct ColumnSelection {
  std::vector<Index> selected;  // pivot order
  CMatrix P;                    // n_col x n, identity on the selected columns
  /// |R_ii| in pivot order. Holds the n_col accepted pivots followed by the
  /// first rejected one, if the factorization reached it.
  RVector diag_R;

  Index n_col() const { return static_cast<Index>(selected.size()); }
};

/// Greedy max-norm column pivoting; ties go to the lowest column index.
/// Stops at the first pivot with |R_jj| < tol * |R_11|, so
/// |R_{n_col,n_col}| >= tol |R_11| > |R_{n_col+1,n_col+1}|.
ColumnSelection pivoted_qr_select(const CMatrix& m, double tol,
                                  std::optional<Index> max_cols = std::nullopt);

/// Row-mixed, row-subsampled orbital matrix and its pairwise products.
struct SketchMatrix {
  CMatrix M;                 // r^2 x N_grid, row i * r + j = conj(Uc_i) .* Uc_j
  Index r = 0;
  CVector eta;               // unit-modulus weights, one per orbital row
  std::vector<Index> xi;     // sampled transform rows, length r
};

Index sketch_rows(Index n_rows, int n_bands, const FittingConfig& cfg);

/// Uhat = DFT_{N K}(diag(eta) U) down every grid column, keep r random rows
/// Uc, and form all r^2 products conj(Uc_i) * Uc_j.
SketchMatrix random_fourier_compress(const CMatrix& U, int n_bands, const FittingConfig& cfg);

struct FittingResult {
  std::vector<Index> selected;  // grid flat indices x_mu
  CMatrix P;                    // n_col x N_grid auxiliary basis P_mu(x)
  RVector diag_R;
  Index n_col = 0;
  Index sketch_r = 0;
  Index n_grid = 0;
  int n_bands = 0;
  Index n_k = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  double t_select_s = 0.0;  // wall time of compression + selection
};

FittingResult density_fit(const CMatrix& U, int n_bands, const FittingConfig& cfg);
FittingResult density_fit(const BlochOrbitalSet& orbitals, const FittingConfig& cfg);

/// C(alpha, mu) = U(alpha, x_mu).
CMatrix fit_coefficients(const CMatrix& U, const FittingResult& result);
CMatrix fit_coefficients(const BlochOrbitalSet& orbitals, const FittingResult& result);

/// Orbital quadruple (n, k) (m, l); k and l index the k-mesh.
struct PairIndex {
  int n = 0, k = 0, m = 0, l = 0;
};

/// rho_{nkml}(x) = conj(u_{n,k}(x)) u_{m,l}(x).
CVector pair_density(const BlochOrbitalSet& orbitals, const PairIndex& q);

/// sum_mu conj(u_{n,k}(x_mu)) u_{m,l}(x_mu) P_mu(x).
CVector reconstruct_pair(const PairIndex& q, const BlochOrbitalSet& orbitals,
                         const FittingResult& result);

/// || rho~_{nkml} - conj(rho~_{mlnk}) ||_2 (weighted). Zero when P is real.
double hermitian_asymmetry(const PairIndex& q, const BlochOrbitalSet& orbitals,
                           const FittingResult& result);

}  // namespace blochdf
