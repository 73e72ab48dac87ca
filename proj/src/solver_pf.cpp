#include "starflow/solver_pf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "starflow/flow_kernels.hpp"
#include "starflow/parallel.hpp"

namespace starflow {

namespace {
// exp-argument guard and positivity floor; multiplicative updates must keep
// every leaf strictly positive even when the costs try to drive it to zero.
constexpr double kExpClamp = 500.0;
constexpr double kPositivityFloor = 1e-300;
}  // namespace

PfSolver::PfSolver(const Problem& p) : prob_(&p) {
  p.validate();
  e_ = p.shapes.resolve(p.grid);
  const int n = p.hierarchy.label_count();
  u_.assign(n, ScalarField(p.grid));
  d_.assign(n, ScalarField(p.grid));
  q_.assign(n, VectorField(p.grid));
  initialize();
}

ScalarField& PfSolver::u(LabelId leaf) {
  if (!prob_->hierarchy.valid_label(leaf) || !prob_->hierarchy.is_leaf(leaf))
    throw HierarchyError(HierarchyError::Code::unknown_label,
                         "pseudo-flow labeling lives on leaves only");
  return u_[leaf];
}

void PfSolver::initialize() {
  const double uniform = 1.0 / static_cast<double>(prob_->hierarchy.leaves().size());
  for (LabelId leaf : prob_->hierarchy.leaves()) u_[leaf].fill(uniform);
  for (auto& f : d_) f.fill(0.0);
  for (auto& f : q_) f.fill(0.0);
  clamp_hit_ = false;
  last_max_du_ = 0.0;
}

double PfSolver::step() {
  const LabelHierarchy& h = prob_->hierarchy;
  const SolverConfig& cfg = prob_->config;
  const GridShape& g = prob_->grid;
  const std::size_t n = g.voxels();
  const double inv_c = 1.0 / cfg.c;
  const double ctau = cfg.c * cfg.tau;

  // 1-3: divergence into scratch, data terms at leaves, costs pushed down
  for (LabelId l : h.top_down_order())
    if (l != kSource) d_[l] = divergence(q_[l]);
  for (LabelId leaf : h.leaves()) axpy(1.0, prob_->data_costs.at(leaf), d_[leaf]);
  for (LabelId l : h.top_down_order()) {
    if (l == kSource) continue;
    for (LabelId c : h.children(l)) axpy(1.0, d_[l], d_[c]);
  }

  // 4: multiplicative leaf update; d keeps the unnormalized labeling
  std::atomic<bool> clamped{false};
  for (LabelId leaf : h.leaves()) {
    double* dv = d_[leaf].data();
    const double* uv = u_[leaf].data();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      bool local_hit = false;
      for (std::size_t i = begin; i < end; ++i) {
        double a = dv[i] * inv_c;
        if (a > kExpClamp) {
          a = kExpClamp;
          local_hit = true;
        } else if (a < -kExpClamp) {
          a = -kExpClamp;
          local_hit = true;
        }
        double nu = uv[i] * std::exp(-a);
        if (nu < kPositivityFloor) nu = kPositivityFloor;
        dv[i] = nu;
      }
      if (local_hit) clamped.store(true, std::memory_order_relaxed);
    });
  }
  clamp_hit_ = clamped.load();

  const auto& leaves = h.leaves();
  std::vector<double*> un(leaves.size());
  std::vector<const double*> dn(leaves.size());
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    un[k] = u_[leaves[k]].data();
    dn[k] = d_[leaves[k]].data();
  }
  last_max_du_ = parallel_max(n, [&](std::size_t begin, std::size_t end) {
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double a = 0.0;
      for (std::size_t k = 0; k < dn.size(); ++k) a += dn[k][i];
      for (std::size_t k = 0; k < dn.size(); ++k) {
        const double nu = dn[k][i] / a;
        worst = std::max(worst, std::abs(nu - un[k][i]));
        un[k][i] = nu;
      }
    }
    return worst;
  });

  // 5-6: zero branch scratch, then flows and bottom-up accumulation
  for (LabelId l : h.top_down_order())
    if (h.is_branch(l)) d_[l].fill(0.0);
  for (LabelId l : h.bottom_up_order()) {
    if (l == kSource) continue;
    const double* dv = d_[l].data();
    for (int d = 0; d < g.ndim; ++d) {
      const double inv_h = 1.0 / g.spacing[d];
      const std::size_t stride = g.stride(d);
      const std::size_t extent = static_cast<std::size_t>(g.dims[d]);
      double* qd = q_[l].component(d).data();
      parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const std::size_t c = (i / stride) % extent;
          if (c + 1 < extent) qd[i] -= ctau * (dv[i + stride] - dv[i]) * inv_h;
        }
      });
    }
    exempted_projection(q_[l], direction(l), prob_->smoothness.at(l), !cfg.disable_exemption);
    const LabelId par = h.parent(l);
    if (par != kSource) axpy(1.0, d_[l], d_[par]);
  }
  return last_max_du_;
}

double PfSolver::capacity_excess_max() const {
  double worst = 0.0;
  for (LabelId l : prob_->hierarchy.top_down_order()) {
    if (l == kSource) continue;
    worst = std::max(worst, capacity_excess(q_[l], direction(l), prob_->smoothness.at(l),
                                            !prob_->config.disable_exemption));
  }
  return worst;
}

double PfSolver::leaf_sum_violation_max() const {
  const auto& leaves = prob_->hierarchy.leaves();
  double worst = 0.0;
  for (std::size_t i = 0; i < prob_->grid.voxels(); ++i) {
    double s = 0.0;
    for (LabelId leaf : leaves) s += u_[leaf][i];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

SolveResult PfSolver::run() {
  initialize();
  const SolverConfig& cfg = prob_->config;
  SolveResult res;
  int it = 0;
  for (it = 1; it <= cfg.max_iters; ++it) {
    step();
    if (cfg.record_trace) {
      std::vector<ScalarField> lu;
      for (LabelId leaf : prob_->hierarchy.leaves()) lu.push_back(u_[leaf]);
      const double en = energy(*prob_, lu, &e_).total;
      res.trace.rows.push_back({it, en, 0.0, last_max_du_});
    }
    if (last_max_du_ < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(it, cfg.max_iters);
  for (LabelId leaf : prob_->hierarchy.leaves()) res.leaf_u.push_back(u_[leaf]);
  res.hard_labels = hard_labeling(*prob_, res.leaf_u);
  res.final_max_du = last_max_du_;
  res.final_max_G = 0.0;
  res.exp_clamp_at_convergence = clamp_hit_;
  return res;
}

}  // namespace starflow
