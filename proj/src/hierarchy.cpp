#include "starflow/hierarchy.hpp"

#include <algorithm>

namespace starflow {

namespace {
using Code = HierarchyError::Code;

[[noreturn]] void fail(Code c, const std::string& msg) { throw HierarchyError(c, msg); }
}  // namespace

LabelHierarchy LabelHierarchy::build(const std::vector<std::pair<LabelId, LabelId>>& edges) {
  if (edges.empty()) fail(Code::degenerate_hierarchy, "empty edge list");

  LabelId max_id = kSource;
  for (const auto& [p, c] : edges) {
    if (p < 0 || c < 0) fail(Code::unknown_label, "negative label id in edge list");
    max_id = std::max({max_id, p, c});
  }
  const int n = max_id + 1;

  LabelHierarchy h;
  h.parent_.assign(n, -1);
  h.children_.assign(n, {});
  for (const auto& [p, c] : edges) {
    if (h.parent_[c] != -1)
      fail(Code::multiple_parents, "label " + std::to_string(c) + " has multiple parents");
    h.parent_[c] = p;
    h.children_[p].push_back(c);
  }

  for (LabelId l = 1; l < n; ++l)
    if (h.parent_[l] == -1)
      fail(Code::disconnected_label, "label " + std::to_string(l) + " has no parent");

  // Every non-source label has a parent, so if the source has one too the
  // parent map is a functional graph on all of 0..n-1 and must contain a
  // cycle; otherwise every ancestor chain terminates at the source.
  for (LabelId start = 0; start < n; ++start) {
    LabelId l = start;
    for (int steps = 0; l != -1; l = h.parent_[l])
      if (++steps > n) fail(Code::cycle_detected, "cycle in label hierarchy");
  }

  for (LabelId l = 0; l < n; ++l)
    if (h.children_[l].empty()) h.leaves_.push_back(l);
  if (h.children_[kSource].size() == 1 && h.children_[h.children_[kSource][0]].empty())
    fail(Code::degenerate_hierarchy, "single leaf under the source forces u = 1");

  h.top_down_.reserve(n);
  h.top_down_.push_back(kSource);
  for (std::size_t i = 0; i < h.top_down_.size(); ++i)
    for (LabelId c : h.children_[h.top_down_[i]]) h.top_down_.push_back(c);

  return h;
}

LabelId LabelHierarchy::parent(LabelId l) const {
  if (!valid_label(l) || l == kSource)
    throw HierarchyError(HierarchyError::Code::unknown_label,
                         "label " + std::to_string(l) + " has no parent");
  return parent_[l];
}

const std::vector<LabelId>& LabelHierarchy::children(LabelId l) const {
  if (!valid_label(l))
    throw HierarchyError(HierarchyError::Code::unknown_label,
                         "unknown label " + std::to_string(l));
  return children_[l];
}

std::vector<LabelId> LabelHierarchy::descendant_leaves(LabelId l) const {
  if (!valid_label(l))
    throw HierarchyError(HierarchyError::Code::unknown_label,
                         "unknown label " + std::to_string(l));
  std::vector<LabelId> out, stack{l};
  while (!stack.empty()) {
    const LabelId cur = stack.back();
    stack.pop_back();
    if (children_[cur].empty())
      out.push_back(cur);
    else
      stack.insert(stack.end(), children_[cur].begin(), children_[cur].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<LabelId, LabelId>> LabelHierarchy::edges() const {
  std::vector<std::pair<LabelId, LabelId>> out;
  for (LabelId l : top_down_)
    for (LabelId c : children_[l]) out.emplace_back(l, c);
  return out;
}

}  // namespace starflow
