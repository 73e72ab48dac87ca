#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "starflow/hierarchy.hpp"

using namespace starflow;

namespace {

// vessel tree: S -> {W, Bg}, W -> {I, Wall}
LabelHierarchy vessel() { return LabelHierarchy::build({{0, 1}, {0, 2}, {1, 3}, {1, 4}}); }

bool is_topological(const LabelHierarchy& h, const std::vector<LabelId>& order) {
  std::vector<int> pos(h.label_count(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  for (LabelId l = 0; l < h.label_count(); ++l)
    if (pos[l] < 0) return false;
  for (LabelId l = 1; l < h.label_count(); ++l)
    if (pos[h.parent(l)] >= pos[l]) return false;
  return true;
}

/// All parent assignments p[i] < i give every tree shape with dense ids.
void enumerate_trees(int n, const std::function<void(const std::vector<LabelId>&)>& visit) {
  std::vector<LabelId> parent(n, 0);
  const std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      visit(parent);
      return;
    }
    for (int p = 0; p < i; ++p) {
      parent[i] = p;
      rec(i + 1);
    }
  };
  rec(1);
}

}  // namespace

TEST_CASE("two-leaf hierarchy builds") {
  const LabelHierarchy h = LabelHierarchy::build({{0, 1}, {0, 2}});
  CHECK(h.label_count() == 3);
  CHECK(h.leaves() == std::vector<LabelId>{1, 2});
  CHECK(h.is_leaf(1));
  CHECK(!h.is_branch(1));
  CHECK(h.parent(1) == 0);
  CHECK(h.top_down_order() == std::vector<LabelId>{0, 1, 2});
  CHECK(h.bottom_up_order() == std::vector<LabelId>{2, 1, 0});
}

TEST_CASE("vessel hierarchy") {
  const LabelHierarchy h = vessel();
  CHECK(h.label_count() == 5);
  CHECK(h.leaves() == std::vector<LabelId>{2, 3, 4});
  CHECK(h.is_branch(1));
  CHECK(h.children(1) == std::vector<LabelId>{3, 4});
  CHECK(is_topological(h, h.top_down_order()));

  const auto bottom = h.bottom_up_order();
  auto top = h.top_down_order();
  std::reverse(top.begin(), top.end());
  CHECK(bottom == top);
}

TEST_CASE("build errors") {
  using Code = HierarchyError::Code;
  auto code_of = [](const std::vector<std::pair<LabelId, LabelId>>& edges) {
    try {
      LabelHierarchy::build(edges);
      return static_cast<Code>(-1);
    } catch (const HierarchyError& e) {
      return e.code;
    }
  };
  CHECK(code_of({{0, 1}, {1, 0}}) == Code::cycle_detected);
  CHECK(code_of({{0, 1}, {0, 1}}) == Code::multiple_parents);
  CHECK(code_of({{0, 1}, {2, 1}}) == Code::multiple_parents);
  CHECK(code_of({{0, 1}, {0, 3}}) == Code::disconnected_label);  // id 2 never mentioned
  CHECK(code_of({{1, 2}, {2, 1}}) == Code::cycle_detected);      // 1 <-> 2, detached from S
  CHECK(code_of({{0, 1}}) == Code::degenerate_hierarchy);
  CHECK(code_of({}) == Code::degenerate_hierarchy);
  CHECK(code_of({{0, -1}}) == Code::unknown_label);
  // single branch child of the source is allowed
  CHECK_NOTHROW(LabelHierarchy::build({{0, 1}, {1, 2}, {1, 3}}));
}

TEST_CASE("descendant leaves") {
  const LabelHierarchy h = vessel();
  CHECK(h.descendant_leaves(1) == std::vector<LabelId>{3, 4});
  CHECK(h.descendant_leaves(3) == std::vector<LabelId>{3});
  CHECK(h.descendant_leaves(0) == h.leaves());
  CHECK_THROWS_AS(h.descendant_leaves(9), HierarchyError);

  // children of S partition the leaves
  std::set<LabelId> seen;
  for (LabelId c : h.children(0))
    for (LabelId leaf : h.descendant_leaves(c)) CHECK(seen.insert(leaf).second);
  CHECK(seen.size() == h.leaves().size());
}

TEST_CASE("rebuild from edge dump is idempotent") {
  const LabelHierarchy h = vessel();
  CHECK(LabelHierarchy::build(h.edges()) == h);
}

TEST_CASE("traversal orders over all trees up to 6 nodes") {
  for (int n = 3; n <= 6; ++n) {
    enumerate_trees(n, [&](const std::vector<LabelId>& parent) {
      std::vector<std::pair<LabelId, LabelId>> edges;
      for (int i = 1; i < n; ++i) edges.emplace_back(parent[i], i);
      LabelHierarchy h;
      try {
        h = LabelHierarchy::build(edges);
      } catch (const HierarchyError& e) {
        CHECK(e.code == HierarchyError::Code::degenerate_hierarchy);
        return;
      }
      CHECK(is_topological(h, h.top_down_order()));
      const auto bottom = h.bottom_up_order();
      std::vector<int> pos(n, -1);
      for (std::size_t i = 0; i < bottom.size(); ++i) pos[bottom[i]] = static_cast<int>(i);
      for (LabelId l = 1; l < n; ++l) CHECK(pos[l] < pos[h.parent(l)]);
      CHECK(LabelHierarchy::build(h.edges()) == h);
      // every non-source label appears exactly once
      CHECK(std::set<LabelId>(bottom.begin(), bottom.end()).size() == bottom.size());
      CHECK(bottom.size() == static_cast<std::size_t>(n));
    });
  }
}

TEST_CASE("non-monotone ids are fine") {
  // parent record appears after its child id: S->2, 2->1
  const LabelHierarchy h = LabelHierarchy::build({{2, 1}, {0, 2}, {0, 3}});
  CHECK(is_topological(h, h.top_down_order()));
  CHECK(h.descendant_leaves(2) == std::vector<LabelId>{1});
}
