#pragma once

#include <map>
#include <optional>

#include "starflow/fields.hpp"
#include "starflow/hierarchy.hpp"

namespace starflow {

struct StarError : std::runtime_error {
  enum class Code {
    vantage_out_of_bounds,
    non_positive_metric,
    non_binary_mask,
    bad_direction_field,
  };
  Code code;
  StarError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// How the constraint direction field e_L of one label is obtained.
struct DirectionSpec {
  enum class Kind { simple, geodesic, explicit_field };
  Kind kind = Kind::simple;
  std::array<int, 3> vantage{0, 0, 0};  // simple, geodesic (voxel coordinates)
  ScalarField metric;                   // geodesic edge weights, > 0
  VectorField field;                    // explicit_field
};

/// Per-label star-convexity constraints. Labels without an entry are
/// unconstrained (their direction field is identically zero).
struct ShapeComplexSpec {
  std::map<LabelId, DirectionSpec> entries;

  bool constrained(LabelId l) const { return entries.count(l) != 0; }

  /// Resolves every entry to a direction field whose vectors are unit length
  /// or exactly zero, validated to |e| in {0} or [1-1e-6, 1+1e-6].
  std::map<LabelId, VectorField> resolve(const GridShape& grid) const;
};

/// e(x) = unit vector from x toward the vantage point (physical coordinates);
/// zero at the vantage itself.
VectorField simple_star_field(const GridShape& grid, const std::array<int, 3>& vantage);

/// Shortest-path distance from the vantage on the 8-neighbour (2D) /
/// 26-neighbour (3D) grid graph; edge weight is the mean endpoint metric
/// times the physical step length.
ScalarField geodesic_distance(const GridShape& grid, const std::array<int, 3>& vantage,
                              const ScalarField& metric);

/// e(x) = -grad g / |grad g| of the geodesic distance g (central differences,
/// one-sided on the border), pointing down the distance toward the vantage;
/// zero where |grad g| < 1e-9 and at the vantage voxel.
VectorField geodesic_star_field(const GridShape& grid, const std::array<int, 3>& vantage,
                                const ScalarField& metric);

/// Snaps an explicit direction field to the unit-or-zero invariant:
/// magnitudes below `tol` become zero, magnitudes within `tol` of 1 are
/// re-normalized to exact unit, anything else is rejected.
VectorField normalize_direction_field(VectorField f, double tol = 1e-3);

/// Exemption multiplier lambda(x) = max{0, q(x) . e(x)}.
ScalarField exemption(const VectorField& q, const VectorField& e);

struct StarConvexityReport {
  std::size_t checked = 0;                // voxels with mask = 1 and e != 0
  std::vector<std::size_t> violations;    // linear indices of failing voxels
  bool ok() const { return violations.empty(); }
};

/// Walks from every masked voxel in steps of +e (half-voxel steps, mask
/// sampled by multilinear interpolation) until it reaches a voxel with e = 0
/// (the vantage; its own mask value is the walk's final sample) or leaves the
/// grid. A voxel whose walk crosses into the complement is a violation; the
/// mask is star convex under e iff no voxel violates. Crossings are read at
/// a quarter rather than one half so that rays grazing a rasterized boundary
/// edge-on do not trip on quantization noise.
StarConvexityReport check_star_convex(const ScalarField& mask, const VectorField& e);

}  // namespace starflow
