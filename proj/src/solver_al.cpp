#include "starflow/solver_al.hpp"

#include <algorithm>
#include <cmath>

#include "starflow/flow_kernels.hpp"
#include "starflow/parallel.hpp"

namespace starflow {

AlSolver::AlSolver(const Problem& p) : prob_(&p) {
  p.validate();
  e_ = p.shapes.resolve(p.grid);
  const int n = p.hierarchy.label_count();
  u_.assign(n, ScalarField(p.grid));
  p_.assign(n, ScalarField(p.grid));
  divq_.assign(n, ScalarField(p.grid));
  q_.assign(n, VectorField(p.grid));
  scratch_ = ScalarField(p.grid);
  initialize();
}

void AlSolver::initialize() {
  for (auto& f : u_) f.fill(0.0);
  for (auto& f : p_) f.fill(0.0);
  for (auto& f : divq_) f.fill(0.0);
  for (auto& f : q_) f.fill(0.0);
  last_max_du_ = last_max_G_ = 0.0;
  if (prob_->config.init == SolverConfig::Init::zero) return;

  // Minimum cost labeling with no regularization: the cheapest leaf wins
  // each voxel (lowest id on ties) and every sink flow starts at that cost.
  const auto& leaves = prob_->hierarchy.leaves();
  const std::size_t n = prob_->grid.voxels();
  ScalarField cheapest = prob_->data_costs.at(leaves[0]);
  std::vector<std::size_t> winner(n, 0);
  for (std::size_t k = 1; k < leaves.size(); ++k) {
    const ScalarField& dk = prob_->data_costs.at(leaves[k]);
    for (std::size_t i = 0; i < n; ++i)
      if (dk[i] < cheapest[i]) {
        cheapest[i] = dk[i];
        winner[i] = k;
      }
  }
  for (std::size_t k = 0; k < leaves.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) u_[leaves[k]][i] = winner[i] == k ? 1.0 : 0.0;
  for (LabelId l : prob_->hierarchy.bottom_up_order()) {
    if (l == kSource || prob_->hierarchy.is_leaf(l)) continue;
    for (LabelId c : prob_->hierarchy.children(l)) axpy(1.0, u_[c], u_[l]);
  }
  for (auto& f : p_) f = cheapest;
}

void AlSolver::update_spatial_flows() {
  const SolverConfig& cfg = prob_->config;
  const GridShape& g = prob_->grid;
  const double inv_c = 1.0 / cfg.c;
  const double tau = cfg.tau;
  const std::size_t n = g.voxels();
  for (LabelId l : prob_->hierarchy.top_down_order()) {
    if (l == kSource) continue;
    const LabelId par = prob_->hierarchy.parent(l);
    divq_[l] = divergence(q_[l]);

    const double* dv = divq_[l].data();
    const double* pl = p_[l].data();
    const double* pp = p_[par].data();
    const double* ul = u_[l].data();
    double* sc = scratch_.data();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) sc[i] = dv[i] + pl[i] - pp[i] - ul[i] * inv_c;
    });

    // q <- q + tau * grad(div q + p_L - p_{L.P} - u_L / c)
    for (int d = 0; d < g.ndim; ++d) {
      const double inv_h = 1.0 / g.spacing[d];
      const std::size_t stride = g.stride(d);
      const std::size_t extent = static_cast<std::size_t>(g.dims[d]);
      double* qd = q_[l].component(d).data();
      parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const std::size_t c = (i / stride) % extent;
          if (c + 1 < extent) qd[i] += tau * (sc[i + stride] - sc[i]) * inv_h;
        }
      });
    }

    exempted_projection(q_[l], direction(l), prob_->smoothness.at(l), !cfg.disable_exemption);
  }
}

void AlSolver::update_sink_flows() {
  const SolverConfig& cfg = prob_->config;
  const double inv_c = 1.0 / cfg.c;
  const std::size_t n = prob_->grid.voxels();
  for (LabelId l : prob_->hierarchy.top_down_order())
    if (l != kSource) divq_[l] = divergence(q_[l]);

  auto recurse = [&](auto&& self, LabelId l) -> void {
    const auto& children = prob_->hierarchy.children(l);
    for (LabelId c : children) self(self, c);

    double* out = p_[l].data();
    if (prob_->hierarchy.is_leaf(l)) {
      const double* cost = prob_->data_costs.at(l).data();
      const double* pp = p_[prob_->hierarchy.parent(l)].data();
      const double* dv = divq_[l].data();
      const double* ul = u_[l].data();
      parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
          out[i] = std::min(cost[i], pp[i] - dv[i] + ul[i] * inv_c);
      });
      return;
    }

    // source: p_S = (1/c + sum_children (p + div q - u/c)) / |S.C|
    // branch: p_L = ((p_{L.P} - div q_L + u_L/c) + same child sum) / (|L.C|+1)
    double* sc = scratch_.data();
    if (l == kSource) {
      parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) sc[i] = inv_c;
      });
    } else {
      const double* pp = p_[prob_->hierarchy.parent(l)].data();
      const double* dv = divq_[l].data();
      const double* ul = u_[l].data();
      parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) sc[i] = pp[i] - dv[i] + ul[i] * inv_c;
      });
    }
    for (LabelId c : children) {
      const double* pc = p_[c].data();
      const double* dv = divq_[c].data();
      const double* uc = u_[c].data();
      parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) sc[i] += pc[i] + dv[i] - uc[i] * inv_c;
      });
    }
    const double norm = 1.0 / (static_cast<double>(children.size()) + (l == kSource ? 0.0 : 1.0));
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) out[i] = sc[i] * norm;
    });
  };
  recurse(recurse, kSource);
}

double AlSolver::update_labels() {
  const SolverConfig& cfg = prob_->config;
  const std::size_t n = prob_->grid.voxels();
  double max_g = 0.0;
  for (LabelId l : prob_->hierarchy.top_down_order()) {
    if (l == kSource) continue;
    divq_[l] = divergence(q_[l]);
    const double* dv = divq_[l].data();
    const double* pl = p_[l].data();
    const double* pp = p_[prob_->hierarchy.parent(l)].data();
    double* ul = u_[l].data();
    const double c = cfg.c;
    max_g = std::max(max_g, parallel_max(n, [&](std::size_t begin, std::size_t end) {
              double worst = 0.0;
              for (std::size_t i = begin; i < end; ++i) {
                const double g = dv[i] + pl[i] - pp[i];
                ul[i] -= c * g;
                worst = std::max(worst, std::abs(g));
              }
              return worst;
            }));
  }
  last_max_G_ = max_g;
  last_max_du_ = cfg.c * max_g;
  return last_max_du_;
}

double AlSolver::step() {
  update_spatial_flows();
  update_sink_flows();
  return update_labels();
}

std::vector<ScalarField> AlSolver::leaf_u() const {
  std::vector<ScalarField> out;
  for (LabelId l : prob_->hierarchy.leaves()) out.push_back(u_[l]);
  return out;
}

double AlSolver::flow_residual_max() const {
  double worst = 0.0;
  for (LabelId l : prob_->hierarchy.top_down_order()) {
    if (l == kSource) continue;
    const ScalarField dv = divergence(q_[l]);
    const double* pl = p_[l].data();
    const double* pp = p_[prob_->hierarchy.parent(l)].data();
    for (std::size_t i = 0; i < dv.size(); ++i)
      worst = std::max(worst, std::abs(dv[i] + pl[i] - pp[i]));
  }
  return worst;
}

double AlSolver::capacity_excess_max() const {
  double worst = 0.0;
  for (LabelId l : prob_->hierarchy.top_down_order()) {
    if (l == kSource) continue;
    worst = std::max(worst, capacity_excess(q_[l], direction(l), prob_->smoothness.at(l),
                                            !prob_->config.disable_exemption));
  }
  return worst;
}

SolveResult AlSolver::run() {
  initialize();
  const SolverConfig& cfg = prob_->config;
  SolveResult res;
  int it = 0;
  for (it = 1; it <= cfg.max_iters; ++it) {
    step();
    if (cfg.record_trace) {
      const double en = energy(*prob_, normalized_leaves(leaf_u()), &e_).total;
      res.trace.rows.push_back({it, en, last_max_G_, last_max_du_});
    }
    if (last_max_du_ < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(it, cfg.max_iters);
  res.leaf_u = leaf_u();
  res.hard_labels = hard_labeling(*prob_, normalized_leaves(res.leaf_u));
  res.final_max_du = last_max_du_;
  res.final_max_G = last_max_G_;
  return res;
}

}  // namespace starflow
