#include "starflow/energy.hpp"

#include <algorithm>
#include <cmath>

namespace starflow {

namespace {
std::vector<ScalarField> derive_all_labels(const Problem& p,
                                           const std::vector<ScalarField>& leaf_u) {
  const auto& leaves = p.hierarchy.leaves();
  if (leaf_u.size() != leaves.size())
    throw FieldError(FieldError::Code::shape_mismatch, "one labeling field per leaf required");
  for (const auto& f : leaf_u) require_same_shape(p.grid, f.shape(), "labeling grid mismatch");

  std::vector<ScalarField> all(p.hierarchy.label_count());
  for (std::size_t i = 0; i < leaves.size(); ++i) all[leaves[i]] = leaf_u[i];
  for (LabelId l : p.hierarchy.bottom_up_order()) {
    if (l == kSource || p.hierarchy.is_leaf(l)) continue;
    ScalarField acc(p.grid);
    for (LabelId c : p.hierarchy.children(l)) axpy(1.0, all[c], acc);
    all[l] = std::move(acc);
  }
  return all;
}
}  // namespace

EnergyReport energy(const Problem& p, const std::vector<ScalarField>& leaf_u,
                    const std::map<LabelId, VectorField>* resolved_shapes) {
  const std::vector<ScalarField> all = derive_all_labels(p, leaf_u);
  const double voxvol = p.grid.voxel_volume();
  const std::size_t n = p.grid.voxels();
  EnergyReport rep;

  for (LabelId leaf : p.hierarchy.leaves())
    rep.data_term += inner(p.data_costs.at(leaf), all[leaf]) * voxvol;

  std::vector<VectorField> grads(p.hierarchy.label_count());
  for (LabelId l = 1; l < p.hierarchy.label_count(); ++l) {
    grads[l] = gradient(all[l]);
    const ScalarField& s = p.smoothness.at(l);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m2 = 0.0;
      for (int d = 0; d < p.grid.ndim; ++d) m2 += grads[l].component(d)[i] * grads[l].component(d)[i];
      acc += s[i] * std::sqrt(m2);
    }
    rep.smoothness_term += acc * voxvol;
  }
  rep.total = rep.data_term + rep.smoothness_term;

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (LabelId leaf : p.hierarchy.leaves()) s += all[leaf][i];
    rep.leaf_sum_violation = std::max(rep.leaf_sum_violation, std::abs(s - 1.0));
  }
  for (LabelId l = 1; l < p.hierarchy.label_count(); ++l)
    rep.negativity = std::max(rep.negativity, -min_value(all[l]));
  rep.negativity = std::max(0.0, rep.negativity);

  if (!p.shapes.entries.empty()) {
    std::map<LabelId, VectorField> local;
    if (!resolved_shapes) {
      local = p.shapes.resolve(p.grid);
      resolved_shapes = &local;
    }
    for (const auto& [l, e] : *resolved_shapes) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (int dd = 0; dd < p.grid.ndim; ++dd) d += grads[l].component(dd)[i] * e.component(dd)[i];
        acc += std::max(0.0, -d);
      }
      rep.star_violation += acc * voxvol;
    }
  }
  return rep;
}

std::vector<ScalarField> normalized_leaves(std::vector<ScalarField> leaf_u) {
  if (leaf_u.empty()) return leaf_u;
  const std::size_t n = leaf_u[0].size();
  const double uniform = 1.0 / static_cast<double>(leaf_u.size());
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (auto& f : leaf_u) {
      if (f[i] < 0.0) f[i] = 0.0;
      s += f[i];
    }
    if (s > 1e-12) {
      for (auto& f : leaf_u) f[i] /= s;
    } else {
      for (auto& f : leaf_u) f[i] = uniform;
    }
  }
  return leaf_u;
}

ScalarField hard_labeling(const Problem& p, const std::vector<ScalarField>& leaf_u) {
  const auto& leaves = p.hierarchy.leaves();
  if (leaf_u.size() != leaves.size())
    throw FieldError(FieldError::Code::shape_mismatch, "one labeling field per leaf required");
  ScalarField out(p.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    LabelId best = leaves[0];
    double best_v = leaf_u[0][i];
    for (std::size_t k = 1; k < leaves.size(); ++k)
      if (leaf_u[k][i] > best_v) {
        best_v = leaf_u[k][i];
        best = leaves[k];
      }
    out[i] = static_cast<double>(best);
  }
  return out;
}

std::vector<ScalarField> leaf_indicators(const Problem& p, const ScalarField& labels) {
  require_same_shape(p.grid, labels.shape(), "labeling grid mismatch");
  const auto& leaves = p.hierarchy.leaves();
  std::vector<ScalarField> out(leaves.size(), ScalarField(p.grid));
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    const double id = static_cast<double>(leaves[k]);
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == id) out[k][i] = 1.0;
  }
  return out;
}

EnergyReport hard_label_energy(const Problem& p, const ScalarField& labels,
                               const std::map<LabelId, VectorField>* resolved_shapes) {
  return energy(p, leaf_indicators(p, labels), resolved_shapes);
}

double dice(const ScalarField& a, const ScalarField& b, LabelId label) {
  require_same_shape(a.shape(), b.shape(), "dice: shape mismatch");
  const double id = static_cast<double>(label);
  std::size_t na = 0, nb = 0, inter = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool ia = a[i] == id, ib = b[i] == id;
    na += ia;
    nb += ib;
    inter += ia && ib;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

}  // namespace starflow
