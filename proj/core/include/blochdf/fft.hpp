#pragma once

#include <memory>

#include "blochdf/types.hpp"

namespace blochdf {

/// Unnormalized complex FFT over a dim-dimensional periodic grid with
/// n points per side, row-major layout. forward() uses exp(-i 2pi m.x),
/// backward() exp(+i 2pi m.x); backward(forward(f)) == size() * f.
///
/// Plans are built with FFTW_ESTIMATE so transforms are bit-reproducible.
/// Instances may be shared across threads for execution; construction is
/// serialized internally.
class GridFft {
 public:
  GridFft(int dim, int n_per_dim);
  ~GridFft();
  GridFft(GridFft&&) noexcept;
  GridFft& operator=(GridFft&&) noexcept;
  GridFft(const GridFft&) = delete;
  GridFft& operator=(const GridFft&) = delete;

  Index size() const { return size_; }

  void forward(const Complex* in, Complex* out) const;
  void backward(const Complex* in, Complex* out) const;

  CVector forward(const CVector& in) const;
  CVector backward(const CVector& in) const;

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  Index size_ = 0;
};

/// In-place unnormalized forward DFT of every column of a column-major matrix
/// (length rows(), exp(-i 2pi a xi / rows())).
void fft_columns(CMatrix& a);

}  // namespace blochdf
