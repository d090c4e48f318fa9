#include "blochdf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blochdf/errors.hpp"

namespace blochdf {

void PotentialSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
  if (!std::isfinite(depth)) throw ConfigError("depth must be finite");
  if (image_cutoff < 1) throw ConfigError("image_cutoff must be >= 1");
}

double well_profile(const PotentialSpec& spec, double radius) {
  double s = radius;
  if (spec.kind == PotentialKind::flattop) s = std::max(radius - 0.25, 0.0);
  return spec.depth * std::exp(-s * s / (2.0 * spec.sigma * spec.sigma));
}

SampledPotential sample_potential(const PotentialSpec& spec, const RealGrid& grid,
                                  const RVector& center) {
  spec.validate();
  const int dim = grid.dim();
  if (center.size() != dim) throw ConfigError("potential center has wrong dimension");

  // All image offsets n with |n_i| <= cutoff.
  const int c = spec.image_cutoff;
  const int side = 2 * c + 1;
  int n_images = 1;
  for (int d = 0; d < dim; ++d) n_images *= side;
  RMatrix images(n_images, dim);
  for (int i = 0; i < n_images; ++i) {
    int rem = i;
    for (int d = dim - 1; d >= 0; --d) {
      images(i, d) = rem % side - c;
      rem /= side;
    }
  }

  SampledPotential out;
  out.dim = dim;
  out.values.resize(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const RVector x = grid.points().row(j).transpose() - center;
    double v = 0.0;
    for (int i = 0; i < n_images; ++i) {
      const double r = (x - images.row(i).transpose()).norm();
      v += well_profile(spec, r);
    }
    out.values(j) = v;
  }
  return out;
}

SampledPotential sample_potential(const PotentialSpec& spec, const RealGrid& grid) {
  return sample_potential(spec, grid, RVector::Zero(grid.dim()));
}

double image_tail_bound(const PotentialSpec& spec, int dim) {
  // Images added at cutoff+1 sit at distance >= cutoff from any point in the
  // cell; bound the profile there with the looser (cutoff - 1/2) radius.
  const int c = spec.image_cutoff;
  const double lead = c - 0.5;
  const double gauss = std::exp(-lead * lead / (2.0 * spec.sigma * spec.sigma));
  const double added = std::pow(2 * c + 3, dim) - std::pow(2 * c + 1, dim);
  return std::abs(spec.depth) * gauss * added;
}

PotentialSpec paper_potential(ExampleId id) {
  PotentialSpec spec;
  spec.depth = -144.0;
  switch (id) {
    case ExampleId::gauss_2d:
      spec.kind = PotentialKind::gaussian;
      spec.sigma = 0.1333;
      break;
    case ExampleId::flattop_2d:
      spec.kind = PotentialKind::flattop;
      spec.sigma = 0.0667;
      break;
    case ExampleId::gauss_3d:
      spec.kind = PotentialKind::gaussian;
      spec.sigma = 0.1667;
      break;
    case ExampleId::flattop_3d:
      spec.kind = PotentialKind::flattop;
      spec.sigma = 0.0833;
      break;
  }
  return spec;
}

int example_dim(ExampleId id) {
  return (id == ExampleId::gauss_2d || id == ExampleId::flattop_2d) ? 2 : 3;
}

ExampleId parse_example_id(std::string_view name) {
  if (name == "2d_gauss") return ExampleId::gauss_2d;
  if (name == "2d_flattop") return ExampleId::flattop_2d;
  if (name == "3d_gauss") return ExampleId::gauss_3d;
  if (name == "3d_flattop") return ExampleId::flattop_3d;
  throw ConfigError("unknown example id '" + std::string(name) + "'");
}

std::string to_string(ExampleId id) {
  switch (id) {
    case ExampleId::gauss_2d: return "2d_gauss";
    case ExampleId::flattop_2d: return "2d_flattop";
    case ExampleId::gauss_3d: return "3d_gauss";
    case ExampleId::flattop_3d: return "3d_flattop";
  }
  return "unknown";
}

std::string to_string(PotentialKind kind) {
  return kind == PotentialKind::gaussian ? "gaussian" : "flattop";
}

PotentialKind parse_potential_kind(std::string_view name) {
  if (name == "gaussian") return PotentialKind::gaussian;
  if (name == "flattop") return PotentialKind::flattop;
  throw ConfigError("unknown potential kind '" + std::string(name) + "'");
}

}  // namespace blochdf
