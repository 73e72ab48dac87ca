#pragma once

#include <cstdint>

#include "starflow/problem.hpp"

namespace starflow {

struct PhantomError : std::runtime_error {
  enum class Code { unknown_phantom, bad_size };
  Code code;
  PhantomError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// A generated test problem with its geometric ground truth. Generation is
/// fully determined by (name, size, noise_level, seed).
struct Phantom {
  std::string name;
  Problem problem;
  ScalarField ground_truth;  // hard labeling, leaf label ids
};

/// Known phantoms:
///   annulus     - ring (interior + wall) on background with the vessel
///                 hierarchy; simple-star constraints on the interior and on
///                 the whole-vessel super-label, vantage at the centre.
///   cshape      - open ring; geodesic star constraint on the shape with the
///                 vantage inside the left stroke and a low in-shape metric.
///   ushape      - bent tube; geodesic star constraint with the vantage at
///                 one arm tip and a low metric inside the tube.
///   bifurcation - Y-shaped vessel; geodesic star from the stem base.
///   random      - three smooth random cost fields, no constraints.
/// Data costs are |image - mu_label| with additive uniform noise of the given
/// amplitude on the piecewise-constant image.
Phantom synth(const std::string& name, int size, double noise_level, std::uint64_t seed);

}  // namespace starflow
