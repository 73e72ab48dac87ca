#include "starflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace starflow {

namespace {

/// Allocation-free energy of one hard labeling, same forward-difference
/// stencil as energy(); cross-checked against it in the test suite.
struct HardEnergyEval {
  const Problem* p;
  std::vector<const double*> leaf_cost;              // by leaf index
  std::vector<std::uint64_t> desc_mask;              // by label id, bit k = leaf k in subtree
  std::vector<const double*> smooth;                 // by label id (non-source)

  explicit HardEnergyEval(const Problem& prob) : p(&prob) {
    const auto& leaves = prob.hierarchy.leaves();
    for (LabelId leaf : leaves) leaf_cost.push_back(prob.data_costs.at(leaf).data());
    const int n = prob.hierarchy.label_count();
    desc_mask.assign(n, 0);
    smooth.assign(n, nullptr);
    for (LabelId l = 1; l < n; ++l) {
      for (LabelId leaf : prob.hierarchy.descendant_leaves(l)) {
        const auto it = std::find(leaves.begin(), leaves.end(), leaf);
        desc_mask[l] |= std::uint64_t{1} << (it - leaves.begin());
      }
      smooth[l] = prob.smoothness.at(l).data();
    }
  }

  double operator()(const std::vector<int>& assign) const {
    const GridShape& g = p->grid;
    const std::size_t n = g.voxels();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += leaf_cost[assign[i]][i];
    for (LabelId l = 1; l < p->hierarchy.label_count(); ++l) {
      const std::uint64_t mask = desc_mask[l];
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double ui = (mask >> assign[i]) & 1u;
        double m2 = 0.0;
        for (int d = 0; d < g.ndim; ++d) {
          const std::size_t c = (i / g.stride(d)) % static_cast<std::size_t>(g.dims[d]);
          if (c + 1 < static_cast<std::size_t>(g.dims[d])) {
            const double un = (mask >> assign[i + g.stride(d)]) & 1u;
            const double diff = (un - ui) / g.spacing[d];
            m2 += diff * diff;
          }
        }
        acc += smooth[l][i] * std::sqrt(m2);
      }
      total += acc;
    }
    return total * g.voxel_volume();
  }
};

}  // namespace

ScalarField OracleResult::best_labels(const Problem& p) const {
  ScalarField out(p.grid);
  const auto& leaves = p.hierarchy.leaves();
  for (std::size_t i = 0; i < best_labeling.size(); ++i)
    out[i] = static_cast<double>(leaves[best_labeling[i]]);
  return out;
}

OracleResult brute_force(const Problem& p, std::size_t max_voxels) {
  p.validate();
  const std::size_t n = p.grid.voxels();
  const std::size_t nleaves = p.hierarchy.leaves().size();
  const double bits = static_cast<double>(n) * std::log2(static_cast<double>(nleaves));
  if (n > max_voxels || bits > 24.0 + 1e-9 || nleaves > 64)
    throw OracleError(OracleError::Code::too_large,
                      "instance too large for exhaustive enumeration");

  const auto resolved = p.shapes.resolve(p.grid);
  const HardEnergyEval eval(p);
  std::vector<std::pair<const VectorField*, std::uint64_t>> constraints;
  for (const auto& [l, e] : resolved) constraints.emplace_back(&e, eval.desc_mask[l]);

  std::vector<int> assign(n, 0);
  ScalarField mask_buf(p.grid);
  OracleResult best;
  best.best_energy = std::numeric_limits<double>::infinity();

  for (;;) {
    bool feasible = true;
    for (const auto& [e, mask] : constraints) {
      for (std::size_t i = 0; i < n; ++i) mask_buf[i] = (mask >> assign[i]) & 1u;
      if (!check_star_convex(mask_buf, *e).ok()) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      ++best.feasible_count;
      const double en = eval(assign);
      // strict less-than keeps the lexicographically smallest minimizer,
      // because the odometer below enumerates in lexicographic order
      if (en < best.best_energy) {
        best.best_energy = en;
        best.best_labeling = assign;
      }
    }
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (assign[pos] + 1 < static_cast<int>(nleaves)) {
        ++assign[pos];
        std::fill(assign.begin() + pos + 1, assign.end(), 0);
        break;
      }
      if (pos == 0) {
        if (best.feasible_count == 0)
          throw OracleError(OracleError::Code::no_feasible_labeling,
                            "every labeling violates a star constraint");
        return best;
      }
    }
  }
}

Verdict compare(double solver_hard_energy, const OracleResult& oracle, double rel_threshold) {
  Verdict v;
  v.oracle_energy = oracle.best_energy;
  v.solver_energy = solver_hard_energy;
  v.gap = solver_hard_energy - oracle.best_energy;
  v.feasible_count = oracle.feasible_count;
  v.threshold = rel_threshold;
  const double scale = std::max(std::abs(oracle.best_energy), 1e-12);
  v.pass = v.gap <= rel_threshold * scale;
  v.oracle_violated = v.gap < -1e-9 * std::max(1.0, scale);
  return v;
}

}  // namespace starflow
