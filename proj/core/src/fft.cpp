#include "blochdf/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "blochdf/errors.hpp"

namespace blochdf {

namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

}  // namespace

struct GridFft::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

GridFft::GridFft(int dim, int n_per_dim) : plans_(std::make_unique<Plans>()) {
  if (dim < 1 || dim > 3 || n_per_dim < 1) throw ConfigError("invalid FFT grid");
  std::vector<int> dims(static_cast<std::size_t>(dim), n_per_dim);
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= n_per_dim;
  // Scratch arrays only feed the planner; execution uses the new-array API.
  std::vector<Complex> a(static_cast<std::size_t>(size_)), b(a.size());
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->fwd = fftw_plan_dft(dim, dims.data(), as_fftw(a.data()), as_fftw(b.data()),
                              FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_dft(dim, dims.data(), as_fftw(a.data()), as_fftw(b.data()),
                              FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->bwd) throw ConfigError("FFTW planning failed");
}

GridFft::~GridFft() = default;
GridFft::GridFft(GridFft&&) noexcept = default;
GridFft& GridFft::operator=(GridFft&&) noexcept = default;

void GridFft::forward(const Complex* in, Complex* out) const {
  fftw_execute_dft(plans_->fwd, as_fftw(in), as_fftw(out));
}

void GridFft::backward(const Complex* in, Complex* out) const {
  fftw_execute_dft(plans_->bwd, as_fftw(in), as_fftw(out));
}

CVector GridFft::forward(const CVector& in) const {
  if (in.size() != size_) throw IndexError("FFT input has wrong length");
  CVector out(size_);
  forward(in.data(), out.data());
  return out;
}

CVector GridFft::backward(const CVector& in) const {
  if (in.size() != size_) throw IndexError("FFT input has wrong length");
  CVector out(size_);
  backward(in.data(), out.data());
  return out;
}

void fft_columns(CMatrix& a) {
  if (a.size() == 0) return;
  const int n = static_cast<int>(a.rows());
  const int howmany = static_cast<int>(a.cols());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &n, howmany, as_fftw(a.data()), nullptr, 1, n,
                              as_fftw(a.data()), nullptr, 1, n, FFTW_FORWARD,
                              FFTW_ESTIMATE);
  }
  if (!plan) throw ConfigError("FFTW planning failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace blochdf
