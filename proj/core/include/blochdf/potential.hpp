#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "blochdf/lattice.hpp"
#include "blochdf/types.hpp"

namespace blochdf {

enum class PotentialKind { gaussian, flattop };

/// The four model systems: Gaussian and flat-top wells on the square and
/// simple cubic lattices.
enum class ExampleId { gauss_2d, flattop_2d, gauss_3d, flattop_3d };

/// Radially symmetric well V_c centered at the origin, periodized over
/// lattice images |n_i| <= image_cutoff.
///
///   gaussian: depth * exp(-|x|^2 / (2 sigma^2))
///   flattop:  depth * exp(-max(|x| - 1/4, 0)^2 / (2 sigma^2))
struct PotentialSpec {
  PotentialKind kind = PotentialKind::gaussian;
  double depth = -144.0;
  double sigma = 0.1333;
  int image_cutoff = 2;

  void validate() const;
};

struct SampledPotential {
  int dim = 2;
  RVector values;  // one value per grid point
};

/// Single-image profile V_c as a function of the distance from the well center.
double well_profile(const PotentialSpec& spec, double radius);

/// Samples the lattice sum on the grid with the well at the origin.
SampledPotential sample_potential(const PotentialSpec& spec, const RealGrid& grid);

/// Same lattice sum with the well centered at `center` (a dim-vector in
/// cell coordinates). Used for plotting the well at the cell center.
SampledPotential sample_potential(const PotentialSpec& spec, const RealGrid& grid,
                                  const RVector& center);

/// Upper bound on |V_cutoff+1 - V_cutoff| at any point of the unit cell.
double image_tail_bound(const PotentialSpec& spec, int dim);

PotentialSpec paper_potential(ExampleId id);
int example_dim(ExampleId id);
ExampleId parse_example_id(std::string_view name);
std::string to_string(ExampleId id);
std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view name);

}  // namespace blochdf
