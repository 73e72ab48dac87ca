#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace starflow {

/// Labels are dense indices 0..n-1; id 0 is reserved for the source.
using LabelId = int;
inline constexpr LabelId kSource = 0;

struct HierarchyError : std::runtime_error {
  enum class Code {
    cycle_detected,
    multiple_parents,
    disconnected_label,
    degenerate_hierarchy,
    unknown_label,
  };
  Code code;
  HierarchyError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// Rooted label tree: the source S at id 0, branch labels (super-labels), and
/// leaves that partition the image domain. Immutable after build; safe for
/// concurrent read.
class LabelHierarchy {
 public:
  /// Validates and builds from (parent, child) edges. Children keep edge
  /// insertion order so traversals are reproducible run to run.
  static LabelHierarchy build(const std::vector<std::pair<LabelId, LabelId>>& edges);

  int label_count() const { return static_cast<int>(parent_.size()); }
  bool valid_label(LabelId l) const { return l >= 0 && l < label_count(); }

  bool is_leaf(LabelId l) const { return children(l).empty(); }
  bool is_branch(LabelId l) const { return l != kSource && !is_leaf(l); }

  /// Parent of a non-source label; the source has none.
  LabelId parent(LabelId l) const;
  const std::vector<LabelId>& children(LabelId l) const;

  /// All leaf labels, ascending id.
  const std::vector<LabelId>& leaves() const { return leaves_; }

  /// Every parent before any of its children (breadth-first, children in
  /// insertion order); starts at the source.
  const std::vector<LabelId>& top_down_order() const { return top_down_; }

  /// Reverse of top_down_order: every child before its parent.
  std::vector<LabelId> bottom_up_order() const {
    return {top_down_.rbegin(), top_down_.rend()};
  }

  /// Leaves of the subtree rooted at l, ascending id; {l} when l is a leaf.
  std::vector<LabelId> descendant_leaves(LabelId l) const;

  /// (parent, child) dump in top-down order; build() on it reproduces *this.
  std::vector<std::pair<LabelId, LabelId>> edges() const;

  bool operator==(const LabelHierarchy&) const = default;

 private:
  std::vector<LabelId> parent_;  // parent_[0] == -1
  std::vector<std::vector<LabelId>> children_;
  std::vector<LabelId> leaves_;
  std::vector<LabelId> top_down_;
};

}  // namespace starflow
