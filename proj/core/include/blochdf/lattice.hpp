#pragma once

#include <string>
#include <vector>

#include "blochdf/types.hpp"

namespace blochdf {

/// Square (2D) or simple cubic (3D) lattice with unit lattice constant.
/// The unit cell is [0,1)^dim, the Brillouin zone [-pi,pi)^dim.
struct LatticeConfig {
  int dim = 2;
  int n_per_dim = 16;  // real-space points per dimension, even
  int k_per_dim = 1;   // k samples per dimension

  void validate() const;
  Index n_grid() const;  // n_per_dim^dim
  Index n_k() const;     // k_per_dim^dim
};

/// Uniform grid on the unit cell in row-major (last index fastest) order.
class RealGrid {
 public:
  RealGrid(int dim, int n_per_dim);

  int dim() const { return dim_; }
  int n_per_dim() const { return n_; }
  Index size() const { return points_.rows(); }

  /// size() x dim; row j is the j-th lexicographic multi-index / n_per_dim.
  const RMatrix& points() const { return points_; }
  /// size() x dim integer frequencies, each in [-n/2, n/2).
  const IMatrix& freq() const { return freq_; }

  Index flat_index(const std::vector<int>& multi) const;
  std::vector<int> multi_index(Index flat) const;

 private:
  int dim_;
  int n_;
  RMatrix points_;
  IMatrix freq_;
};

RealGrid build_grid(const LatticeConfig& cfg);

struct KPoint {
  RVector coords;
};

/// Uniform mesh k_j = -pi + 2 pi j / k_per_dim in each dimension,
/// lexicographic order. Contains Gamma iff k_per_dim is even.
std::vector<KPoint> kpoint_mesh(const LatticeConfig& cfg);

struct PathSegment {
  std::string label;  // e.g. "G-X"; "|" marks a discontinuity
  bool is_break = false;
};

struct PathPoint {
  KPoint k;
  double arclength = 0.0;
  int segment = 0;  // index into BandPath::segments
};

struct BandPath {
  int dim = 2;
  std::vector<PathSegment> segments;
  std::vector<PathPoint> points;
};

/// High-symmetry path: G-X-M-G in 2D, G-X-M-G-R-X|M-R in 3D. Every segment
/// is sampled with pts_per_segment points including both endpoints.
BandPath band_path(int dim, int pts_per_segment);

}  // namespace blochdf
