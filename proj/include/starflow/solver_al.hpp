#pragma once

#include "starflow/energy.hpp"
#include "starflow/trace.hpp"

namespace starflow {

struct SolveResult {
  std::vector<ScalarField> leaf_u;  // raw relaxed labeling, ordered as hierarchy.leaves()
  ScalarField hard_labels;          // argmax leaf ids (lowest id wins ties)
  ConvergenceTrace trace;
  bool converged = false;
  int iterations = 0;
  double final_max_du = 0.0;
  double final_max_G = 0.0;
  bool exp_clamp_at_convergence = false;  // pseudo-flow only
};

/// Augmented-Lagrangian primal-dual solver. Each iteration runs, in order:
/// a Chambolle descent-and-project step on every spatial flow q_L (with the
/// exemption flow lambda*e_L removed before the capacity projection and
/// re-added after), the post-order analytic sink-flow updates, and the
/// multiplier ascent on the labelings u_L.
///
/// One solver owns its state exclusively. Per-voxel loops are data-parallel
/// across fixed blocks (capped by set_max_threads); label and tree traversals
/// run sequentially, so results are identical for any thread count.
class AlSolver {
 public:
  /// The problem must outlive the solver. Resolves the shape spec once.
  explicit AlSolver(const Problem& p);

  /// u = q = p = 0, or the regularization-free minimum cost labeling when
  /// config.init == min_cost.
  void initialize();

  void update_spatial_flows();
  void update_sink_flows();
  /// Multiplier ascent; updates the max |du| / max |G| residuals.
  double update_labels();

  /// One full iteration; returns max_x,L |du|.
  double step();

  /// Iterates until max |du| < tol or max_iters. A non-converged run still
  /// returns its result with converged == false.
  SolveResult run();

  // State access (tests stage states through these).
  ScalarField& u(LabelId l) { return u_[l]; }
  ScalarField& p(LabelId l) { return p_[l]; }
  VectorField& q(LabelId l) { return q_[l]; }
  const ScalarField& div_q(LabelId l) const { return divq_[l]; }

  std::vector<ScalarField> leaf_u() const;
  double last_max_du() const { return last_max_du_; }
  double last_max_residual() const { return last_max_G_; }

  /// max_x |div q_L + p_L - p_{L.P}| over all non-source labels, recomputed
  /// from the current state.
  double flow_residual_max() const;
  /// max_x (|q_L - lambda e_L| - S_L) clamped at zero; the primal capacity.
  double capacity_excess_max() const;

  const std::map<LabelId, VectorField>& resolved_shapes() const { return e_; }

 private:
  const VectorField* direction(LabelId l) const {
    const auto it = e_.find(l);
    return it == e_.end() ? nullptr : &it->second;
  }

  const Problem* prob_;
  std::map<LabelId, VectorField> e_;
  std::vector<ScalarField> u_, p_, divq_;  // by label id; u_[0], divq_[0] unused
  std::vector<VectorField> q_;             // q_[0] unused
  ScalarField scratch_;
  double last_max_du_ = 0.0, last_max_G_ = 0.0;
};

}  // namespace starflow
