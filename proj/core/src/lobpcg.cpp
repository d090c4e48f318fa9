#include "blochdf/lobpcg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "blochdf/errors.hpp"

namespace blochdf {

CMatrix svqb(const CMatrix& s, double drop_tol) {
  if (s.cols() == 0) return s;
  CMatrix gram = s.adjoint() * s;
  RVector scale(gram.rows());
  for (Index i = 0; i < gram.rows(); ++i) {
    const double d = gram(i, i).real();
    scale(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  gram = scale.asDiagonal() * gram * scale.asDiagonal();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const RVector& theta = eig.eigenvalues();
  const double top = theta.maxCoeff();
  std::vector<Index> keep;
  for (Index i = 0; i < theta.size(); ++i)
    if (theta(i) > drop_tol * top && theta(i) > 0.0) keep.push_back(i);
  CMatrix coeff(s.cols(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    coeff.col(static_cast<Index>(c)) =
        eig.eigenvectors().col(keep[c]) / std::sqrt(theta(keep[c]));
  return s * (scale.asDiagonal() * coeff);
}

namespace {

// Projects out span(x) twice; x has orthonormal columns.
void orthogonalize_against(const CMatrix& x, CMatrix& s) {
  for (int pass = 0; pass < 2; ++pass) s -= x * (x.adjoint() * s);
}

void rayleigh_ritz(const CMatrix& basis, const CMatrix& a_basis, RVector& values,
                   CMatrix& coeff) {
  CMatrix g = basis.adjoint() * a_basis;
  g = 0.5 * (g + g.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(g);
  values = eig.eigenvalues();
  coeff = eig.eigenvectors();
}

}  // namespace

LobpcgResult lobpcg(const BlockOperator& apply_a, const BlockOperator& precondition,
                    CMatrix x0, const LobpcgOptions& opts) {
  const Index b = x0.cols();
  if (b == 0 || opts.n_wanted < 1 || opts.n_wanted > b)
    throw ConfigError("lobpcg: block must hold at least n_wanted columns");
  if (x0.rows() < b) throw ConfigError("lobpcg: block wider than the problem");

  CMatrix x = svqb(svqb(x0));
  if (x.cols() < b) throw DegenerateInputError("lobpcg: starting block is rank deficient");

  CMatrix ax(x.rows(), b);
  apply_a(x, ax);
  RVector lambda;
  CMatrix coeff;
  rayleigh_ritz(x, ax, lambda, coeff);
  x = x * coeff;
  ax = ax * coeff;

  CMatrix p(x.rows(), 0);
  LobpcgResult result;
  RVector res(b);
  for (int it = 0;; ++it) {
    CMatrix r = ax - x * lambda.asDiagonal();
    for (Index j = 0; j < b; ++j) res(j) = r.col(j).norm();
    result.iterations = it;
    if ((res.head(opts.n_wanted).array() < opts.tol).all()) {
      result.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    std::vector<Index> active;
    for (Index j = 0; j < b; ++j)
      if (res(j) >= opts.tol) active.push_back(j);
    CMatrix r_active(x.rows(), static_cast<Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c)
      r_active.col(static_cast<Index>(c)) = r.col(active[c]);
    CMatrix w(x.rows(), r_active.cols());
    precondition(r_active, w);

    CMatrix s(x.rows(), w.cols() + p.cols());
    s << w, p;
    orthogonalize_against(x, s);
    CMatrix q = svqb(s);
    orthogonalize_against(x, q);
    q = svqb(q);

    CMatrix aq(q.rows(), q.cols());
    if (q.cols() > 0) apply_a(q, aq);

    CMatrix basis(x.rows(), b + q.cols());
    basis << x, q;
    CMatrix a_basis(x.rows(), b + q.cols());
    a_basis << ax, aq;
    RVector theta;
    rayleigh_ritz(basis, a_basis, theta, coeff);

    const auto cx = coeff.topLeftCorner(b, b);
    const auto cq = coeff.bottomLeftCorner(q.cols(), b);
    p = q * cq;
    x = x * cx + p;
    lambda = theta.head(b);

    // Keep x orthonormal to working precision; recompute A x from scratch so
    // residuals never drift from the true operator.
    const double drift = (x.adjoint() * x - CMatrix::Identity(b, b)).norm();
    if (drift > 1e-10) {
      x = svqb(x, 0.0);
      if (x.cols() < b) throw DegenerateInputError("lobpcg: block collapsed");
    }
    apply_a(x, ax);
    if (drift > 1e-10) {
      rayleigh_ritz(x, ax, lambda, coeff);
      x = x * coeff;
      ax = ax * coeff;
    } else {
      // Ritz values from the fresh product for consistency with residuals.
      for (Index j = 0; j < b; ++j) lambda(j) = x.col(j).dot(ax.col(j)).real();
    }
  }

  result.values = lambda;
  result.vectors = std::move(x);
  result.residuals = res;
  return result;
}

}  // namespace blochdf
