#pragma once

#include "starflow/solver_al.hpp"

namespace starflow {

/// Pseudo-flow solver: multiplicative exponential label updates over the
/// leaves with hierarchical cost accumulation along the label tree, and the
/// same exemption-flow projection as the augmented-Lagrangian solver. The
/// labeling stays on the leaf simplex by explicit normalization and strictly
/// positive throughout.
///
/// Concurrency contract matches AlSolver: per-voxel loops are data-parallel
/// over fixed blocks, traversals sequential, results thread-count invariant.
class PfSolver {
 public:
  explicit PfSolver(const Problem& p);

  /// Every leaf at 1/|leaves|, flows and scratch at zero.
  void initialize();

  /// One published pseudo-flow iterate; returns max leaf |du| (measured on
  /// the normalized labeling).
  double step();

  SolveResult run();

  // State access; u is maintained on leaves only.
  ScalarField& u(LabelId leaf);
  VectorField& q(LabelId l) { return q_[l]; }
  ScalarField& d(LabelId l) { return d_[l]; }

  /// True when the exp-argument clamp (|d/c| > 500) fired in the last step.
  bool clamp_hit_last_step() const { return clamp_hit_; }
  double capacity_excess_max() const;
  double leaf_sum_violation_max() const;

  const std::map<LabelId, VectorField>& resolved_shapes() const { return e_; }

 private:
  const VectorField* direction(LabelId l) const {
    const auto it = e_.find(l);
    return it == e_.end() ? nullptr : &it->second;
  }

  const Problem* prob_;
  std::map<LabelId, VectorField> e_;
  std::vector<ScalarField> u_, d_;  // by label id; u_ valid at leaves, d_ for l != S
  std::vector<VectorField> q_;
  bool clamp_hit_ = false;
  double last_max_du_ = 0.0;
};

}  // namespace starflow
