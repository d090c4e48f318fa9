#include "blochdf/bloch.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "blochdf/errors.hpp"
#include "blochdf/lobpcg.hpp"
#include "blochdf/rng.hpp"

namespace blochdf {

SolverMethod parse_solver_method(const std::string& name) {
  if (name == "lobpcg") return SolverMethod::lobpcg;
  if (name == "dense") return SolverMethod::dense;
  throw ConfigError("unknown solver '" + name + "'");
}

std::string to_string(SolverMethod method) {
  return method == SolverMethod::lobpcg ? "lobpcg" : "dense";
}

void SolverOptions::validate() const {
  if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be > 0");
  if (!(precond_shift > 0.0)) throw ConfigError("precond_shift must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

BlochHamiltonian::BlochHamiltonian(const RealGrid& grid, const SampledPotential& potential,
                                   const KPoint& k)
    : grid_(&grid), potential_(potential.values), fft_(grid.dim(), grid.n_per_dim()) {
  if (potential.dim != grid.dim() || potential.values.size() != grid.size())
    throw ConfigError("potential does not match grid");
  if (k.coords.size() != grid.dim()) throw ConfigError("k-point has wrong dimension");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  kinetic_.resize(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const RVector g = two_pi * grid.freq().row(j).cast<double>().transpose() + k.coords;
    kinetic_(j) = 0.5 * g.squaredNorm();
  }
}

CVector BlochHamiltonian::apply(const CVector& u) const {
  if (u.size() != size()) throw IndexError("vector length does not match grid");
  CVector out(size());
  CVector work(size());
  fft_.forward(u.data(), work.data());
  work.array() *= kinetic_.array() / static_cast<double>(size());
  fft_.backward(work.data(), out.data());
  out.array() += potential_.array() * u.array();
  return out;
}

void BlochHamiltonian::apply(const CMatrix& in, CMatrix& out) const {
  if (in.rows() != size()) throw IndexError("block rows do not match grid");
  out.resize(in.rows(), in.cols());
  CVector work(size());
  const RVector scaled = kinetic_ / static_cast<double>(size());
  for (Index c = 0; c < in.cols(); ++c) {
    fft_.forward(in.col(c).data(), work.data());
    work.array() *= scaled.array();
    fft_.backward(work.data(), out.col(c).data());
    out.col(c).array() += potential_.array() * in.col(c).array();
  }
}

void BlochHamiltonian::precondition(const CMatrix& in, CMatrix& out, double shift) const {
  out.resize(in.rows(), in.cols());
  CVector work(size());
  const RVector inv =
      ((kinetic_.array() + shift) * static_cast<double>(size())).inverse().matrix();
  for (Index c = 0; c < in.cols(); ++c) {
    fft_.forward(in.col(c).data(), work.data());
    work.array() *= inv.array();
    fft_.backward(work.data(), out.col(c).data());
  }
}

CMatrix BlochHamiltonian::dense_plane_wave() const {
  const Index n = size();
  // vhat(m) = (1/N) sum_x V(x) exp(-i 2 pi m.x)
  const CVector vhat = fft_.forward(CVector(potential_.cast<Complex>())) / static_cast<double>(n);
  const int side = grid_->n_per_dim();
  const int dim = grid_->dim();
  CMatrix h(n, n);
  std::vector<int> diff(static_cast<std::size_t>(dim));
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a < n; ++a) {
      // FFT index of (m_a - m_b) mod side, per dimension.
      Index flat = 0;
      for (int d = 0; d < dim; ++d) {
        int v = grid_->freq()(a, d) - grid_->freq()(b, d);
        v = ((v % side) + side) % side;
        flat = flat * side + v;
      }
      h(a, b) = vhat(flat);
    }
    h(b, b) += kinetic_(b);
  }
  return h;
}

CVector apply_hamiltonian(const RealGrid& grid, const KPoint& k, const CVector& u,
                          const SampledPotential& potential) {
  return BlochHamiltonian(grid, potential, k).apply(u);
}

namespace {

// Random block with Fourier weights decaying like 1/(1 + kinetic), so the
// starting vectors are smooth and overlap the low-lying subspace.
CMatrix smooth_random_block(const BlochHamiltonian& h, Index cols, std::uint64_t seed) {
  CounterRng rng(seed, RngStream::eigen_init);
  const Index n = h.size();
  CMatrix coeff(n, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index j = 0; j < n; ++j) {
      const double re = 2.0 * rng.uniform() - 1.0;
      const double im = 2.0 * rng.uniform() - 1.0;
      coeff(j, c) = Complex(re, im) / (1.0 + h.kinetic()(j));
    }
  CMatrix block(n, cols);
  for (Index c = 0; c < cols; ++c) h.fft().backward(coeff.col(c).data(), block.col(c).data());
  return block;
}

BandSolution solve_dense(const BlochHamiltonian& h, int n_bands) {
  const CMatrix hpw = h.dense_plane_wave();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hpw);
  if (eig.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {});
  BandSolution sol;
  sol.energies = eig.eigenvalues().head(n_bands);
  sol.orbitals.resize(n_bands, h.size());
  sol.residuals = RVector::Zero(n_bands);
  CVector u(h.size());
  for (int n = 0; n < n_bands; ++n) {
    // Unit plane-wave coefficients map to unit (1/N_grid)-weighted norm.
    const CVector c = eig.eigenvectors().col(n);
    h.fft().backward(c.data(), u.data());
    sol.orbitals.row(n) = u.transpose();
  }
  return sol;
}

}  // namespace

BandSolution solve_bands(const RealGrid& grid, const KPoint& k, int n_bands,
                         const SampledPotential& potential, const SolverOptions& opts,
                         const CMatrix* warm_start) {
  opts.validate();
  if (n_bands < 1 || n_bands >= grid.size())
    throw ConfigError("n_bands must be in [1, N_grid)");
  const BlochHamiltonian h(grid, potential, k);
  if (opts.method == SolverMethod::dense) return solve_dense(h, n_bands);

  const Index block = std::min<Index>(n_bands + std::min(10, n_bands), grid.size());
  CMatrix x0;
  if (warm_start && warm_start->rows() == grid.size() && warm_start->cols() == block)
    x0 = *warm_start;
  else
    x0 = smooth_random_block(h, block, opts.seed);

  LobpcgOptions lopts;
  lopts.n_wanted = n_bands;
  lopts.max_iter = opts.max_iter;
  lopts.tol = opts.residual_tol;
  const double shift = opts.precond_shift;
  const LobpcgResult res = lobpcg(
      [&h](const CMatrix& in, CMatrix& out) { h.apply(in, out); },
      [&h, shift](const CMatrix& in, CMatrix& out) { h.precondition(in, out, shift); },
      std::move(x0), lopts);
  if (!res.converged) {
    std::vector<double> r(res.residuals.data(), res.residuals.data() + n_bands);
    throw ConvergenceError("LOBPCG did not converge in " + std::to_string(opts.max_iter) +
                               " iterations",
                           std::move(r));
  }

  BandSolution sol;
  sol.energies = res.values.head(n_bands);
  sol.residuals = res.residuals.head(n_bands);
  sol.iterations = res.iterations;
  const double scale = std::sqrt(static_cast<double>(grid.size()));
  sol.orbitals = scale * res.vectors.leftCols(n_bands).transpose();
  return sol;
}

BlochOrbitalSet solve_all(const LatticeConfig& cfg, int n_bands,
                          const SampledPotential& potential, const SolverOptions& opts) {
  const RealGrid grid = build_grid(cfg);
  BlochOrbitalSet set;
  set.lattice = cfg;
  set.kmesh = kpoint_mesh(cfg);
  set.n_bands = n_bands;
  const Index nk = set.n_k();
  set.U.resize(static_cast<Index>(n_bands) * nk, grid.size());
  set.energies.resize(n_bands, nk);
  for (Index ki = 0; ki < nk; ++ki) {
    SolverOptions local = opts;
    local.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(ki));
    BandSolution sol;
    try {
      sol = solve_bands(grid, set.kmesh[static_cast<std::size_t>(ki)], n_bands, potential,
                        local);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " at k-point " + std::to_string(ki),
                             e.residuals(), static_cast<int>(ki));
    }
    set.U.middleRows(ki * n_bands, n_bands) = sol.orbitals;
    set.energies.col(ki) = sol.energies;
  }
  return set;
}

BlochOrbitalSet slice_orbitals(const BlochOrbitalSet& fine, int n_bands, int k_per_dim) {
  const int kf = fine.lattice.k_per_dim;
  if (n_bands < 1 || n_bands > fine.n_bands)
    throw ConfigError("cannot slice " + std::to_string(n_bands) + " bands from " +
                      std::to_string(fine.n_bands));
  if (k_per_dim < 1 || kf % k_per_dim != 0)
    throw ConfigError("k_per_dim " + std::to_string(k_per_dim) +
                      " does not divide the fine mesh " + std::to_string(kf));
  const int stride = kf / k_per_dim;
  const int dim = fine.lattice.dim;

  BlochOrbitalSet out;
  out.lattice = fine.lattice;
  out.lattice.k_per_dim = k_per_dim;
  out.n_bands = n_bands;
  const Index nk = out.lattice.n_k();
  out.U.resize(static_cast<Index>(n_bands) * nk, fine.U.cols());
  out.energies.resize(n_bands, nk);
  for (Index j = 0; j < nk; ++j) {
    // Sub-mesh multi-index j' maps to fine multi-index stride * j'.
    Index rem = j, fine_idx = 0, mult = 1;
    for (int d = dim - 1; d >= 0; --d) {
      const Index idx = rem % k_per_dim;
      rem /= k_per_dim;
      fine_idx += idx * stride * mult;
      mult *= kf;
    }
    out.kmesh.push_back(fine.kmesh[static_cast<std::size_t>(fine_idx)]);
    out.U.middleRows(j * n_bands, n_bands) =
        fine.U.middleRows(fine_idx * fine.n_bands, n_bands);
    out.energies.col(j) = fine.energies.col(fine_idx).head(n_bands);
  }
  return out;
}

BandTable bands_along_path(const BandPath& path, const RealGrid& grid, int n_bands,
                           const SampledPotential& potential, const SolverOptions& opts) {
  BandTable table;
  table.dim = path.dim;
  table.energies.resize(static_cast<Index>(path.points.size()), n_bands);
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const PathPoint& p = path.points[i];
    SolverOptions local = opts;
    local.seed = derive_seed(opts.seed, i);
    // Every point starts cold. Reusing the previous point's eigenvectors can
    // lock onto the wrong states after a band crossing: for a flat potential
    // they are exact eigenvectors at every k and LOBPCG stops immediately.
    const BandSolution sol = solve_bands(grid, p.k, n_bands, potential, local);
    table.segment.push_back(p.segment);
    table.arclength.push_back(p.arclength);
    table.k.push_back(p.k.coords);
    table.energies.row(static_cast<Index>(i)) = sol.energies.transpose();
  }
  return table;
}

}  // namespace blochdf
