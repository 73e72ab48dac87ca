#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "starflow/energy.hpp"

using namespace starflow;

namespace {

double urand(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Two flat labels on a 1x2 grid.
Problem two_label_line(double d_a0, double d_a1, double d_b0, double d_b1, double s) {
  Problem p;
  p.grid = GridShape(2, 1);
  p.label_names = {"source", "a", "b"};
  p.hierarchy = LabelHierarchy::build({{0, 1}, {0, 2}});
  p.data_costs.emplace(1, ScalarField(p.grid, std::vector<double>{d_a0, d_a1}));
  p.data_costs.emplace(2, ScalarField(p.grid, std::vector<double>{d_b0, d_b1}));
  p.smoothness.emplace(1, ScalarField(p.grid, s));
  p.smoothness.emplace(2, ScalarField(p.grid, s));
  return p;
}

}  // namespace

TEST_CASE("energy of the zero labeling is zero") {
  const Problem p = two_label_line(0.3, 0.7, 0.6, 0.1, 1.0);
  const auto rep = energy(p, {ScalarField(p.grid), ScalarField(p.grid)});
  CHECK(rep.data_term == 0.0);
  CHECK(rep.smoothness_term == 0.0);
  CHECK(rep.total == 0.0);
  CHECK(rep.leaf_sum_violation == 1.0);  // sum is 0, not 1
  CHECK(rep.negativity == 0.0);
}

TEST_CASE("hard labeling [A,B] with unit smoothness") {
  // forward difference of each indicator jumps once: |grad u_A| + |grad u_B| = 2
  const Problem p = two_label_line(0.0, 0.0, 0.0, 0.0, 1.0);
  ScalarField ua(p.grid, std::vector<double>{1.0, 0.0});
  ScalarField ub(p.grid, std::vector<double>{0.0, 1.0});
  const auto rep = energy(p, {ua, ub});
  CHECK(rep.smoothness_term == doctest::Approx(2.0));
  CHECK(rep.data_term == 0.0);
  CHECK(rep.total == rep.data_term + rep.smoothness_term);
  CHECK(rep.leaf_sum_violation == 0.0);
}

TEST_CASE("hard labeling picks up assigned data costs") {
  const Problem p = two_label_line(0.3, 0.7, 0.6, 0.1, 0.0);
  ScalarField ua(p.grid, std::vector<double>{1.0, 0.0});
  ScalarField ub(p.grid, std::vector<double>{0.0, 1.0});
  const auto rep = energy(p, {ua, ub});
  CHECK(rep.total == doctest::Approx(0.3 + 0.1));
}

TEST_CASE("branch labelings are derived as child sums") {
  Problem p;
  p.grid = GridShape(2, 1);
  p.label_names = {"source", "w", "bg", "i", "o"};
  p.hierarchy = LabelHierarchy::build({{0, 1}, {0, 2}, {1, 3}, {1, 4}});
  p.data_costs.emplace(2, ScalarField(p.grid, 0.0));
  p.data_costs.emplace(3, ScalarField(p.grid, 0.0));
  p.data_costs.emplace(4, ScalarField(p.grid, 0.0));
  for (LabelId l = 1; l <= 4; ++l) p.smoothness.emplace(l, ScalarField(p.grid, 1.0));

  // i on voxel 0, o on voxel 1: the w super-label is constant 1 so only the
  // leaf gradients contribute
  ScalarField ubg(p.grid, std::vector<double>{0.0, 0.0});
  ScalarField ui(p.grid, std::vector<double>{1.0, 0.0});
  ScalarField uo(p.grid, std::vector<double>{0.0, 1.0});
  const auto rep = energy(p, {ubg, ui, uo});
  CHECK(rep.smoothness_term == doctest::Approx(2.0));
}

TEST_CASE("star violation integrates the negative part of grad u . e") {
  Problem p = two_label_line(0.0, 0.0, 0.0, 0.0, 0.0);
  DirectionSpec spec;
  spec.kind = DirectionSpec::Kind::explicit_field;
  VectorField e(p.grid);
  e.component(0)[0] = 1.0;  // points +x at voxel 0
  spec.field = e;
  p.shapes.entries.emplace(1, spec);

  // u_a drops from 1 to 0 along +x: grad = -1, violation 1 at voxel 0
  ScalarField ua(p.grid, std::vector<double>{1.0, 0.0});
  ScalarField ub(p.grid, std::vector<double>{0.0, 1.0});
  const auto rep = energy(p, {ua, ub});
  CHECK(rep.star_violation == doctest::Approx(1.0));

  // the opposite assignment rises along +x: no violation
  const auto rep2 = energy(p, {ub, ua});
  CHECK(rep2.star_violation == 0.0);
}

TEST_CASE("normalized_leaves clamps and scales to the simplex") {
  GridShape g(1, 1);
  std::vector<ScalarField> u{ScalarField(g, std::vector<double>{0.6}),
                             ScalarField(g, std::vector<double>{-0.2}),
                             ScalarField(g, std::vector<double>{0.2})};
  const auto n = normalized_leaves(u);
  CHECK(n[0][0] == doctest::Approx(0.75));
  CHECK(n[1][0] == 0.0);
  CHECK(n[2][0] == doctest::Approx(0.25));

  std::vector<ScalarField> zero{ScalarField(g, std::vector<double>{-1.0}),
                                ScalarField(g, std::vector<double>{-2.0})};
  const auto nz = normalized_leaves(zero);
  CHECK(nz[0][0] == 0.5);
  CHECK(nz[1][0] == 0.5);
}

TEST_CASE("hard labeling argmax with lowest-id ties") {
  const Problem p = two_label_line(0, 0, 0, 0, 0);
  ScalarField ua(p.grid, std::vector<double>{0.5, 0.2});
  ScalarField ub(p.grid, std::vector<double>{0.5, 0.7});
  const ScalarField labels = hard_labeling(p, {ua, ub});
  CHECK(labels[0] == 1.0);  // tie -> lowest id
  CHECK(labels[1] == 2.0);

  const auto inds = leaf_indicators(p, labels);
  CHECK(inds[0][0] == 1.0);
  CHECK(inds[0][1] == 0.0);
  CHECK(inds[1][1] == 1.0);
}

TEST_CASE("dice") {
  GridShape g(4, 1);
  ScalarField a(g, std::vector<double>{1, 1, 2, 2});
  ScalarField b(g, std::vector<double>{1, 2, 2, 2});
  CHECK(dice(a, b, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(dice(a, b, 2) == doctest::Approx(0.8));
  CHECK(dice(a, b, 7) == 1.0);
}

TEST_CASE("energy is linear in the data term against random labelings") {
  std::mt19937_64 rng(11);
  Problem p = two_label_line(urand(rng), urand(rng), urand(rng), urand(rng), 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField ua(p.grid, std::vector<double>{urand(rng), urand(rng)});
    ScalarField ub(p.grid, std::vector<double>{urand(rng), urand(rng)});
    const auto rep = energy(p, {ua, ub});
    const double expect = p.data_costs.at(1)[0] * ua[0] + p.data_costs.at(1)[1] * ua[1] +
                          p.data_costs.at(2)[0] * ub[0] + p.data_costs.at(2)[1] * ub[1];
    CHECK(rep.data_term == doctest::Approx(expect).epsilon(1e-12));
  }
}
