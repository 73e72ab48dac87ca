#pragma once

#include "starflow/problem.hpp"

namespace starflow {

/// Discrete evaluation of the segmentation energy
///   E(u) = sum_L sum_x (D_L(x) u_L(x) + S_L(x) |grad u_L(x)|) * voxel_volume
/// together with the labeling-constraint residuals. Branch labelings are
/// always derived as child sums from the given leaf fields, never trusted
/// from callers.
struct EnergyReport {
  double data_term = 0.0;
  double smoothness_term = 0.0;
  double total = 0.0;               // data_term + smoothness_term
  double leaf_sum_violation = 0.0;  // max_x |sum_leaves u - 1|
  double negativity = 0.0;          // max(0, -min u) over all labels
  double star_violation = 0.0;      // sum_L integral max{0, -grad u_L . e_L}
};

/// leaf_u is indexed parallel to hierarchy.leaves(). resolved_shapes may be
/// passed to reuse cached direction fields; otherwise the problem's shape
/// spec is resolved on the fly when constraints exist.
EnergyReport energy(const Problem& p, const std::vector<ScalarField>& leaf_u,
                    const std::map<LabelId, VectorField>* resolved_shapes = nullptr);

/// Clamps negatives to zero and scales each voxel's leaf values to sum to 1
/// (uniform where everything clamps to zero).
std::vector<ScalarField> normalized_leaves(std::vector<ScalarField> leaf_u);

/// Argmax over leaf labelings, ties broken by lowest label id; values are
/// leaf LabelIds stored as doubles.
ScalarField hard_labeling(const Problem& p, const std::vector<ScalarField>& leaf_u);

/// Indicator field per leaf from a hard labeling.
std::vector<ScalarField> leaf_indicators(const Problem& p, const ScalarField& labels);

/// Energy of a hard labeling (via its leaf indicators).
EnergyReport hard_label_energy(const Problem& p, const ScalarField& labels,
                               const std::map<LabelId, VectorField>* resolved_shapes = nullptr);

/// Dice overlap of one label between two hard labelings; 1 when the label is
/// absent from both.
double dice(const ScalarField& a, const ScalarField& b, LabelId label);

}  // namespace starflow
