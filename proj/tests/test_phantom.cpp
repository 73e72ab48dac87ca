#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "starflow/phantom.hpp"
#include "starflow/runner.hpp"

using namespace starflow;

TEST_CASE("same seed gives a bitwise identical phantom") {
  const Phantom a = synth("annulus", 32, 0.5, 42);
  const Phantom b = synth("annulus", 32, 0.5, 42);
  CHECK(a.ground_truth == b.ground_truth);
  for (const auto& [l, f] : a.problem.data_costs) CHECK(b.problem.data_costs.at(l) == f);
  for (const auto& [l, f] : a.problem.smoothness) CHECK(b.problem.smoothness.at(l) == f);

  const Phantom c = synth("annulus", 32, 0.5, 43);
  CHECK(c.problem.data_costs.at(3) != a.problem.data_costs.at(3));
}

TEST_CASE("annulus geometry and hierarchy") {
  const int n = 64;
  const Phantom ph = synth("annulus", n, 0.0, 1);
  const Problem& p = ph.problem;
  CHECK(p.hierarchy.label_count() == 5);
  CHECK(p.hierarchy.is_branch(p.label_by_name("vessel")));
  CHECK(p.hierarchy.leaves() ==
        std::vector<LabelId>{p.label_by_name("background"), p.label_by_name("interior"),
                             p.label_by_name("wall")});

  // area counts close to the analytic disc/ring areas
  std::size_t n_int = 0, n_wall = 0;
  for (std::size_t i = 0; i < ph.ground_truth.size(); ++i) {
    n_int += ph.ground_truth[i] == p.label_by_name("interior");
    n_wall += ph.ground_truth[i] == p.label_by_name("wall");
  }
  const double r_in = 0.15 * n, r_out = 0.30 * n;
  CHECK(std::abs(double(n_int) - M_PI * r_in * r_in) <= 0.08 * M_PI * r_in * r_in);
  const double ring = M_PI * (r_out * r_out - r_in * r_in);
  CHECK(std::abs(double(n_wall) - ring) <= 0.08 * ring);

  // ground truth labels are leaves; noise-free costs vanish on the truth
  for (std::size_t i = 0; i < ph.ground_truth.size(); ++i) {
    const LabelId l = static_cast<LabelId>(ph.ground_truth[i]);
    CHECK(p.hierarchy.is_leaf(l));
    CHECK(p.data_costs.at(l)[i] == 0.0);
  }

  // simple stars on the interior and on the whole-vessel super-label
  CHECK(p.shapes.constrained(p.label_by_name("interior")));
  CHECK(p.shapes.constrained(p.label_by_name("vessel")));
}

TEST_CASE("phantom errors") {
  CHECK_THROWS_AS(synth("annulus", 8, 0.0, 1), PhantomError);
  CHECK_THROWS_AS(synth("blob", 64, 0.0, 1), PhantomError);
}

TEST_CASE("every phantom validates and solves at small size") {
  for (const char* name : {"annulus", "cshape", "ushape", "bifurcation", "random"}) {
    const Phantom ph = synth(name, 16, 0.2, 7);
    CHECK(ph.problem.grid.voxels() == 256);
    Problem p = ph.problem;
    p.config.max_iters = 2000;
    const RunOutput out = run_solver(p, SolverKind::al);
    CHECK(out.summary.converged);
    CHECK(out.summary.leaf_sum_violation <= 1e-3);
  }
}

TEST_CASE("random phantom ground truth is the pointwise argmin") {
  const Phantom ph = synth("random", 24, 0.1, 5);
  const Problem& p = ph.problem;
  for (std::size_t i = 0; i < ph.ground_truth.size(); ++i) {
    const LabelId assigned = static_cast<LabelId>(ph.ground_truth[i]);
    for (LabelId leaf : p.hierarchy.leaves())
      CHECK(p.data_costs.at(assigned)[i] <= p.data_costs.at(leaf)[i]);
  }
}

TEST_CASE("noisy cshape: constraint rescues star convexity") {
  const Phantom ph = synth("cshape", 64, 0.8, 1);
  const Problem& p = ph.problem;
  const auto resolved = p.shapes.resolve(p.grid);
  const VectorField& e = resolved.at(p.label_by_name("shape"));

  auto shape_mask = [&](const ScalarField& labels) {
    ScalarField m(p.grid);
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = labels[i] == double(p.label_by_name("shape")) ? 1.0 : 0.0;
    return m;
  };

  const RunOutput constrained = run_solver(p, SolverKind::al);
  CHECK(constrained.summary.converged);
  CHECK(check_star_convex(shape_mask(constrained.result.hard_labels), e).ok());

  Problem free = p;
  free.shapes.entries.clear();
  const RunOutput unconstrained = run_solver(free, SolverKind::al);
  CHECK(!check_star_convex(shape_mask(unconstrained.result.hard_labels), e).ok());
}
