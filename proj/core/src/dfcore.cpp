#include "blochdf/dfcore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Householder>

#include "blochdf/errors.hpp"
#include "blochdf/fft.hpp"
#include "blochdf/rng.hpp"

namespace blochdf {

void FittingConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("fitting tol must lie in (0, 1)");
  if (!(c_oversample >= 1.0)) throw ConfigError("c_oversample must be >= 1");
  if (max_cols && *max_cols < 1) throw ConfigError("max_cols must be >= 1");
  if (rows && *rows < 1) throw ConfigError("sketch rows must be >= 1");
}

ColumnSelection pivoted_qr_select(const CMatrix& m, double tol, std::optional<Index> max_cols) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows < 1 || cols < 1) throw DegenerateInputError("pivoted QR of an empty matrix");
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("QR tolerance must lie in (0, 1)");

  CMatrix a = m;
  std::vector<Index> perm(static_cast<std::size_t>(cols));
  RVector vn1(cols), vn2(cols);
  for (Index j = 0; j < cols; ++j) {
    perm[static_cast<std::size_t>(j)] = j;
    vn1(j) = a.col(j).norm();
    vn2(j) = vn1(j);
  }
  if (vn1.maxCoeff() == 0.0) throw DegenerateInputError("pivoted QR of an all-zero matrix");

  const double norm_tol = std::sqrt(std::numeric_limits<double>::epsilon());
  const Index steps = std::min(rows, cols);
  std::vector<double> diag;
  CVector workspace(cols);
  Index n_col = steps;
  double r11 = 0.0;

  for (Index j = 0; j < steps; ++j) {
    Index p = j;
    for (Index l = j + 1; l < cols; ++l) {
      if (vn1(l) > vn1(p) ||
          (vn1(l) == vn1(p) && perm[static_cast<std::size_t>(l)] < perm[static_cast<std::size_t>(p)]))
        p = l;
    }
    if (p != j) {
      a.col(j).swap(a.col(p));
      std::swap(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(p)]);
      std::swap(vn1(j), vn1(p));
      std::swap(vn2(j), vn2(p));
    }

    Complex tau;
    double beta;
    a.col(j).tail(rows - j).makeHouseholderInPlace(tau, beta);
    const double rjj = std::abs(beta);
    diag.push_back(rjj);
    if (j == 0) r11 = rjj;
    if (rjj < tol * r11 || rjj == 0.0) {
      n_col = j;
      break;
    }
    if (max_cols && j + 1 > *max_cols) {
      const double achieved = diag[static_cast<std::size_t>(*max_cols - 1)] / r11;
      throw CapExceededError("column selection needs more than " + std::to_string(*max_cols) +
                                 " columns at tol " + std::to_string(tol),
                             static_cast<long>(*max_cols), achieved);
    }
    a(j, j) = beta;

    if (j + 1 < cols) {
      if (j + 1 < rows) {
        a.bottomRightCorner(rows - j, cols - j - 1)
            .applyHouseholderOnTheLeft(a.col(j).tail(rows - j - 1), tau, workspace.data());
      } else {
        a.bottomRightCorner(rows - j, cols - j - 1) *= (Complex(1.0) - tau);
      }
      // Column norm downdating with recomputation on cancellation.
      for (Index l = j + 1; l < cols; ++l) {
        if (vn1(l) == 0.0) continue;
        double t = std::abs(a(j, l)) / vn1(l);
        t = std::max(0.0, (1.0 + t) * (1.0 - t));
        const double ratio = vn1(l) / vn2(l);
        if (t * ratio * ratio <= norm_tol) {
          vn1(l) = j + 1 < rows ? a.col(l).tail(rows - j - 1).norm() : 0.0;
          vn2(l) = vn1(l);
        } else {
          vn1(l) *= std::sqrt(t);
        }
      }
    }
  }

  ColumnSelection out;
  out.diag_R = Eigen::Map<const RVector>(diag.data(), static_cast<Index>(diag.size()));
  out.selected.assign(perm.begin(), perm.begin() + n_col);
  out.P = CMatrix::Zero(n_col, cols);
  for (Index i = 0; i < n_col; ++i) out.P(i, perm[static_cast<std::size_t>(i)]) = 1.0;
  if (n_col < cols) {
    // P_rest = R11^{-1} R12 by back substitution.
    const CMatrix rest = a.topLeftCorner(n_col, n_col)
                             .triangularView<Eigen::Upper>()
                             .solve(a.block(0, n_col, n_col, cols - n_col));
    for (Index t = 0; t < cols - n_col; ++t)
      out.P.col(perm[static_cast<std::size_t>(n_col + t)]) = rest.col(t);
  }
  return out;
}

Index sketch_rows(Index n_rows, int n_bands, const FittingConfig& cfg) {
  if (cfg.rows) {
    if (*cfg.rows > n_rows)
      throw ConfigError("sketch rows r = " + std::to_string(*cfg.rows) +
                        " exceeds the number of orbitals " + std::to_string(n_rows));
    return *cfg.rows;
  }
  const auto r = static_cast<Index>(std::lround(cfg.c_oversample * std::sqrt(double(n_bands))));
  return std::clamp<Index>(r, 1, n_rows);
}

SketchMatrix random_fourier_compress(const CMatrix& U, int n_bands, const FittingConfig& cfg) {
  cfg.validate();
  const Index nk = U.rows();
  if (nk < 1 || U.cols() < 1) throw ConfigError("orbital matrix is empty");
  if (n_bands < 1) throw ConfigError("n_bands must be >= 1");

  SketchMatrix sk;
  sk.r = sketch_rows(nk, n_bands, cfg);

  CounterRng phase_rng(cfg.seed, RngStream::phases);
  sk.eta.resize(nk);
  for (Index a = 0; a < nk; ++a)
    sk.eta(a) = std::polar(1.0, 2.0 * std::numbers::pi * phase_rng.uniform());

  CMatrix uhat = sk.eta.asDiagonal() * U;
  fft_columns(uhat);

  CounterRng row_rng(cfg.seed, RngStream::rows);
  for (long x : row_rng.sample_without_replacement(static_cast<long>(nk), static_cast<long>(sk.r)))
    sk.xi.push_back(static_cast<Index>(x));

  CMatrix sub(sk.r, U.cols());
  for (Index i = 0; i < sk.r; ++i) sub.row(i) = uhat.row(sk.xi[static_cast<std::size_t>(i)]);

  sk.M.resize(sk.r * sk.r, U.cols());
  for (Index x = 0; x < U.cols(); ++x) {
    const auto col = sub.col(x);
    for (Index i = 0; i < sk.r; ++i) {
      const Complex ci = std::conj(col(i));
      for (Index j = 0; j < sk.r; ++j) sk.M(i * sk.r + j, x) = ci * col(j);
      // Exact modulus; a fused complex product can leave a tiny imaginary part.
      sk.M(i * sk.r + i, x) = std::norm(col(i));
    }
  }
  return sk;
}

FittingResult density_fit(const CMatrix& U, int n_bands, const FittingConfig& cfg) {
  cfg.validate();
  if (n_bands < 1 || U.rows() % n_bands != 0)
    throw ConfigError("orbital rows are not a multiple of n_bands");
  const Index n_grid = U.cols();
  const Index cap = cfg.max_cols.value_or(n_grid);

  const auto start = std::chrono::steady_clock::now();
  const SketchMatrix sk = random_fourier_compress(U, n_bands, cfg);
  ColumnSelection sel = pivoted_qr_select(sk.M, cfg.tol, cap);
  const auto stop = std::chrono::steady_clock::now();

  FittingResult res;
  res.selected = std::move(sel.selected);
  res.P = std::move(sel.P);
  res.diag_R = std::move(sel.diag_R);
  res.n_col = static_cast<Index>(res.selected.size());
  res.sketch_r = sk.r;
  res.n_grid = n_grid;
  res.n_bands = n_bands;
  res.n_k = U.rows() / n_bands;
  res.tol = cfg.tol;
  res.seed = cfg.seed;
  res.t_select_s = std::chrono::duration<double>(stop - start).count();
  return res;
}

FittingResult density_fit(const BlochOrbitalSet& orbitals, const FittingConfig& cfg) {
  return density_fit(orbitals.U, orbitals.n_bands, cfg);
}

CMatrix fit_coefficients(const CMatrix& U, const FittingResult& result) {
  CMatrix c(U.rows(), static_cast<Index>(result.selected.size()));
  for (std::size_t mu = 0; mu < result.selected.size(); ++mu) {
    const Index x = result.selected[mu];
    if (x < 0 || x >= U.cols()) throw IndexError("selected grid index out of range");
    c.col(static_cast<Index>(mu)) = U.col(x);
  }
  return c;
}

CMatrix fit_coefficients(const BlochOrbitalSet& orbitals, const FittingResult& result) {
  return fit_coefficients(orbitals.U, result);
}

namespace {

void check_pair(const BlochOrbitalSet& o, const PairIndex& q) {
  const auto bad_band = [&](int n) { return n < 0 || n >= o.n_bands; };
  const auto bad_k = [&](int k) { return k < 0 || k >= o.n_k(); };
  if (bad_band(q.n) || bad_band(q.m) || bad_k(q.k) || bad_k(q.l))
    throw IndexError("pair index out of range");
}

}  // namespace

CVector pair_density(const BlochOrbitalSet& orbitals, const PairIndex& q) {
  check_pair(orbitals, q);
  const auto a = orbitals.U.row(orbitals.row(q.n, q.k));
  const auto b = orbitals.U.row(orbitals.row(q.m, q.l));
  return (a.conjugate().array() * b.array()).transpose();
}

CVector reconstruct_pair(const PairIndex& q, const BlochOrbitalSet& orbitals,
                         const FittingResult& result) {
  check_pair(orbitals, q);
  if (result.P.cols() != orbitals.U.cols()) throw IndexError("fit does not match grid");
  const Index a = orbitals.row(q.n, q.k);
  const Index b = orbitals.row(q.m, q.l);
  CVector w(static_cast<Index>(result.selected.size()));
  for (std::size_t mu = 0; mu < result.selected.size(); ++mu) {
    const Index x = result.selected[mu];
    if (x < 0 || x >= orbitals.U.cols()) throw IndexError("selected grid index out of range");
    w(static_cast<Index>(mu)) = std::conj(orbitals.U(a, x)) * orbitals.U(b, x);
  }
  return result.P.transpose() * w;
}

double hermitian_asymmetry(const PairIndex& q, const BlochOrbitalSet& orbitals,
                           const FittingResult& result) {
  const CVector fwd = reconstruct_pair(q, orbitals, result);
  const CVector bwd = reconstruct_pair({q.m, q.l, q.n, q.k}, orbitals, result);
  return std::sqrt((fwd - bwd.conjugate()).squaredNorm() / static_cast<double>(fwd.size()));
}

}  // namespace blochdf
