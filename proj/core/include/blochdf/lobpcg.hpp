#pragma once

#include <functional>

#include "blochdf/types.hpp"

namespace blochdf {

/// Applies an operator to every column of `in`, writing `out` (same shape).
using BlockOperator = std::function<void(const CMatrix& in, CMatrix& out)>;

struct LobpcgOptions {
  int n_wanted = 1;     // leading eigenpairs that must converge
  int max_iter = 500;
  double tol = 1e-9;    // on ||A x - lambda x|| with ||x|| = 1
};

struct LobpcgResult {
  RVector values;     // ascending, one per block column
  CMatrix vectors;    // orthonormal columns
  RVector residuals;  // residual norms of all block columns
  int iterations = 0;
  bool converged = false;
};

/// Locally optimal block preconditioned conjugate gradient for the lowest
/// eigenpairs of a Hermitian operator. The block width is x0.cols(); columns
/// beyond n_wanted act as guard vectors and need not converge. Converged
/// columns are soft-locked (no new search directions).
LobpcgResult lobpcg(const BlockOperator& apply_a, const BlockOperator& precondition,
                    CMatrix x0, const LobpcgOptions& opts);

/// Orthonormalizes the columns of `s` through the eigendecomposition of its
/// scaled Gram matrix, dropping directions whose relative weight falls below
/// `drop_tol`. The result may have fewer columns than `s`.
CMatrix svqb(const CMatrix& s, double drop_tol = 1e-13);

}  // namespace blochdf
