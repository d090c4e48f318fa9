#include "blochdf/lattice.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "blochdf/errors.hpp"

namespace blochdf {

void LatticeConfig::validate() const {
  if (dim != 2 && dim != 3)
    throw ConfigError("lattice dim must be 2 or 3, got " + std::to_string(dim));
  if (n_per_dim < 4 || n_per_dim % 2 != 0)
    throw ConfigError("n_per_dim must be even and >= 4, got " +
                      std::to_string(n_per_dim));
  if (k_per_dim < 1)
    throw ConfigError("k_per_dim must be >= 1, got " + std::to_string(k_per_dim));
}

Index LatticeConfig::n_grid() const {
  Index n = 1;
  for (int d = 0; d < dim; ++d) n *= n_per_dim;
  return n;
}

Index LatticeConfig::n_k() const {
  Index n = 1;
  for (int d = 0; d < dim; ++d) n *= k_per_dim;
  return n;
}

RealGrid::RealGrid(int dim, int n_per_dim) : dim_(dim), n_(n_per_dim) {
  if (dim != 2 && dim != 3)
    throw ConfigError("grid dim must be 2 or 3, got " + std::to_string(dim));
  if (n_per_dim < 2 || n_per_dim % 2 != 0)
    throw ConfigError("n_per_dim must be even, got " + std::to_string(n_per_dim));
  Index total = 1;
  for (int d = 0; d < dim; ++d) total *= n_per_dim;
  points_.resize(total, dim);
  freq_.resize(total, dim);
  for (Index j = 0; j < total; ++j) {
    Index rem = j;
    for (int d = dim - 1; d >= 0; --d) {
      const int idx = static_cast<int>(rem % n_per_dim);
      rem /= n_per_dim;
      points_(j, d) = static_cast<double>(idx) / n_per_dim;
      freq_(j, d) = idx < n_per_dim / 2 ? idx : idx - n_per_dim;
    }
  }
}

Index RealGrid::flat_index(const std::vector<int>& multi) const {
  if (static_cast<int>(multi.size()) != dim_)
    throw IndexError("multi-index has wrong dimension");
  Index flat = 0;
  for (int d = 0; d < dim_; ++d) {
    if (multi[d] < 0 || multi[d] >= n_) throw IndexError("multi-index out of range");
    flat = flat * n_ + multi[d];
  }
  return flat;
}

std::vector<int> RealGrid::multi_index(Index flat) const {
  if (flat < 0 || flat >= size()) throw IndexError("flat index out of range");
  std::vector<int> multi(dim_);
  for (int d = dim_ - 1; d >= 0; --d) {
    multi[d] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return multi;
}

RealGrid build_grid(const LatticeConfig& cfg) {
  cfg.validate();
  return RealGrid(cfg.dim, cfg.n_per_dim);
}

std::vector<KPoint> kpoint_mesh(const LatticeConfig& cfg) {
  cfg.validate();
  constexpr double pi = std::numbers::pi;
  const Index total = cfg.n_k();
  std::vector<KPoint> mesh(static_cast<std::size_t>(total));
  for (Index j = 0; j < total; ++j) {
    RVector k(cfg.dim);
    Index rem = j;
    for (int d = cfg.dim - 1; d >= 0; --d) {
      const Index idx = rem % cfg.k_per_dim;
      rem /= cfg.k_per_dim;
      k(d) = -pi + 2.0 * pi * static_cast<double>(idx) / cfg.k_per_dim;
    }
    mesh[static_cast<std::size_t>(j)].coords = std::move(k);
  }
  return mesh;
}

namespace {

struct Vertex {
  const char* name;
  double x, y, z;
};

RVector vertex_coords(const Vertex& v, int dim) {
  constexpr double pi = std::numbers::pi;
  RVector k(dim);
  k(0) = v.x * pi;
  k(1) = v.y * pi;
  if (dim == 3) k(2) = v.z * pi;
  return k;
}

}  // namespace

BandPath band_path(int dim, int pts_per_segment) {
  if (dim != 2 && dim != 3)
    throw ConfigError("band path needs dim 2 or 3, got " + std::to_string(dim));
  if (pts_per_segment < 2) throw ConfigError("pts_per_segment must be >= 2");

  const Vertex G{"G", 0, 0, 0}, X{"X", 1, 0, 0}, M{"M", 1, 1, 0}, R{"R", 1, 1, 1};
  // nullptr pairs mark the discontinuity.
  std::vector<std::pair<const Vertex*, const Vertex*>> legs;
  if (dim == 2) {
    legs = {{&G, &X}, {&X, &M}, {&M, &G}};
  } else {
    legs = {{&G, &X}, {&X, &M}, {&M, &G}, {&G, &R}, {&R, &X}, {nullptr, nullptr}, {&M, &R}};
  }

  BandPath path;
  path.dim = dim;
  double arclength = 0.0;
  for (const auto& [from, to] : legs) {
    const int seg = static_cast<int>(path.segments.size());
    if (from == nullptr) {
      path.segments.push_back({"|", true});
      continue;
    }
    path.segments.push_back({std::string(from->name) + "-" + to->name, false});
    const RVector a = vertex_coords(*from, dim);
    const RVector b = vertex_coords(*to, dim);
    const double len = (b - a).norm();
    for (int i = 0; i < pts_per_segment; ++i) {
      const double t = static_cast<double>(i) / (pts_per_segment - 1);
      PathPoint p;
      // Endpoints are assigned exactly so vertices carry no rounding.
      p.k.coords = i == 0 ? a : (i == pts_per_segment - 1 ? b : RVector(a + t * (b - a)));
      p.arclength = arclength + t * len;
      p.segment = seg;
      path.points.push_back(std::move(p));
    }
    arclength += len;
  }
  return path;
}

}  // namespace blochdf
