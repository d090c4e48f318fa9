#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blochdf/fft.hpp"
#include "blochdf/lattice.hpp"
#include "blochdf/potential.hpp"
#include "blochdf/types.hpp"

namespace blochdf {

enum class SolverMethod { lobpcg, dense };

SolverMethod parse_solver_method(const std::string& name);
std::string to_string(SolverMethod method);

struct SolverOptions {
  SolverMethod method = SolverMethod::lobpcg;
  int max_iter = 1000;
  double residual_tol = 1e-9;
  double precond_shift = 1.0;  // tau in (1/2 |2 pi m + k|^2 + tau)^-1
  std::uint64_t seed = 0;

  void validate() const;
};

/// H_k = 1/2 |-i grad + k|^2 + V acting on lattice-periodic functions sampled
/// on the grid, with the kinetic term applied exactly in Fourier space.
class BlochHamiltonian {
 public:
  BlochHamiltonian(const RealGrid& grid, const SampledPotential& potential,
                   const KPoint& k);

  Index size() const { return kinetic_.size(); }
  /// 1/2 |2 pi m + k|^2 per frequency, in FFT order.
  const RVector& kinetic() const { return kinetic_; }

  CVector apply(const CVector& u) const;
  void apply(const CMatrix& in, CMatrix& out) const;
  /// Multiplies by (kinetic + shift)^-1 in Fourier space.
  void precondition(const CMatrix& in, CMatrix& out, double shift) const;

  /// Hamiltonian in the plane-wave basis (orthonormal Fourier modes).
  CMatrix dense_plane_wave() const;

  const GridFft& fft() const { return fft_; }

 private:
  const RealGrid* grid_;
  RVector potential_;
  RVector kinetic_;
  GridFft fft_;
};

CVector apply_hamiltonian(const RealGrid& grid, const KPoint& k, const CVector& u,
                          const SampledPotential& potential);

struct BandSolution {
  RVector energies;   // ascending, length N
  CMatrix orbitals;   // N x N_grid, rows orthonormal under (1/N_grid) sum_x
  RVector residuals;  // eigensolver residual norms (zero for dense)
  int iterations = 0;
};

/// Lowest n_bands eigenpairs of H_k. `warm_start` (N_grid x block columns) seeds
/// the eigensolver; otherwise a seeded random smooth block is used.
BandSolution solve_bands(const RealGrid& grid, const KPoint& k, int n_bands,
                         const SampledPotential& potential, const SolverOptions& opts,
                         const CMatrix* warm_start = nullptr);

/// Orbitals u_{n,k} for the whole k-mesh. Row alpha = k * n_bands + n of U.
struct BlochOrbitalSet {
  CMatrix U;               // (N K) x N_grid
  RMatrix energies;        // N x K
  LatticeConfig lattice;
  std::vector<KPoint> kmesh;
  int n_bands = 0;

  Index n_k() const { return static_cast<Index>(kmesh.size()); }
  Index row(int n, int k) const { return static_cast<Index>(k) * n_bands + n; }
};

BlochOrbitalSet solve_all(const LatticeConfig& cfg, int n_bands,
                          const SampledPotential& potential, const SolverOptions& opts);

/// Restricts to the lowest n_bands bands on the coarser sub-mesh with
/// k_per_dim points per dimension (every s-th point of the fine mesh, where
/// s = fine k_per_dim / k_per_dim).
BlochOrbitalSet slice_orbitals(const BlochOrbitalSet& fine, int n_bands, int k_per_dim);

struct BandTable {
  int dim = 2;
  std::vector<int> segment;
  std::vector<double> arclength;
  std::vector<RVector> k;
  RMatrix energies;  // points x N
};

BandTable bands_along_path(const BandPath& path, const RealGrid& grid, int n_bands,
                           const SampledPotential& potential, const SolverOptions& opts);

}  // namespace blochdf
