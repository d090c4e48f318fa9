#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace blochdf {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when reporting failures as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& what) : Error("index", what) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what)
      : Error("degenerate_input", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

/// Eigensolver ran out of iterations. Carries the residual norms of the
/// wanted eigenpairs at exit and, when raised from a k-mesh sweep, the
/// index of the offending k-point.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals,
                   int k_index = -1)
      : Error("convergence", what),
        residuals_(std::move(residuals)),
        k_index_(k_index) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }
  int k_index() const noexcept { return k_index_; }

 private:
  std::vector<double> residuals_;
  int k_index_;
};

/// Pivoted QR would need more columns than allowed. `achieved_tol` is
/// |R_cc| / |R_11| at the cap, i.e. the accuracy a capped selection delivers.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, long cap, double achieved_tol)
      : Error("cap_exceeded", what), cap_(cap), achieved_tol_(achieved_tol) {}
  long cap() const noexcept { return cap_; }
  double achieved_tol() const noexcept { return achieved_tol_; }

 private:
  long cap_;
  double achieved_tol_;
};

}  // namespace blochdf
