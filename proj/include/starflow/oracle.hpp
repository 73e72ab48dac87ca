#pragma once

#include "starflow/energy.hpp"

namespace starflow {

struct OracleError : std::runtime_error {
  enum class Code { too_large, no_feasible_labeling };
  Code code;
  OracleError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct OracleResult {
  std::vector<int> best_labeling;  // per voxel: index into hierarchy.leaves()
  double best_energy = 0.0;
  std::size_t feasible_count = 0;

  ScalarField best_labels(const Problem& p) const;  // as leaf LabelIds
};

/// Exhaustive minimum over all |leaves|^N hard labelings, discarding any that
/// fail check_star_convex for a constrained label (super-label masks are the
/// union of descendant leaves). Ties go to the lexicographically smallest
/// assignment vector. Refuses instances with more than max_voxels voxels or
/// with voxels * log2(|leaves|) > 24.
OracleResult brute_force(const Problem& p, std::size_t max_voxels = 24);

struct Verdict {
  double oracle_energy = 0.0;
  double solver_energy = 0.0;
  double gap = 0.0;  // solver_energy - oracle_energy
  std::size_t feasible_count = 0;
  double threshold = 0.05;
  bool pass = false;
  bool oracle_violated = false;  // gap meaningfully negative: oracle not optimal
};

Verdict compare(double solver_hard_energy, const OracleResult& oracle, double rel_threshold = 0.05);

}  // namespace starflow
