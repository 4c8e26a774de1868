#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bps/rand.hpp"

namespace bps {

enum class NodeKind { Activity, Tau, Sequence, Xor, And, Loop };

struct TreeNode;
using NodePtr = std::shared_ptr<const TreeNode>;

/// Immutable block-structured tree node. Ids are assigned at creation and
/// never reused, so decision points keep their identity across model updates.
struct TreeNode {
  NodeKind kind;
  std::string label;            // activity name; empty for tau/operators
  std::vector<NodePtr> children;
  std::int64_t id = 0;

  bool is_leaf() const { return kind == NodeKind::Activity || kind == NodeKind::Tau; }
  bool is_operator() const { return !is_leaf(); }
};

/// Value-semantics process tree; updates return new trees sharing unchanged
/// subtrees. `next_id` continues the node numbering across updates.
class ProcessTree {
public:
  ProcessTree() = default;
  ProcessTree(NodePtr root, std::int64_t next_id) : root_(std::move(root)), next_id_(next_id) {}

  const NodePtr& root() const { return root_; }
  std::int64_t next_id() const { return next_id_; }
  bool empty() const { return root_ == nullptr; }

  /// Activity alphabet (tau excluded), sorted.
  std::vector<std::string> alphabet() const;

private:
  NodePtr root_;
  std::int64_t next_id_ = 0;
};

/// Allocates nodes with fresh ids; seed `next` from an existing tree when
/// extending it.
struct TreeBuilder {
  std::int64_t next = 0;

  NodePtr activity(const std::string& label);
  NodePtr tau();
  NodePtr sequence(std::vector<NodePtr> children);
  NodePtr exclusive(std::vector<NodePtr> children);
  NodePtr parallel(std::vector<NodePtr> children);
  /// Loops are binary (do, redo); n-ary redo lists are folded into an
  /// exclusive choice on construction.
  NodePtr loop(NodePtr body, NodePtr redo);
  NodePtr loop_nary(NodePtr body, std::vector<NodePtr> redos);

  ProcessTree finish(NodePtr root) const { return ProcessTree(std::move(root), next); }
};

/// Checks operator arity rules; throws EmptyInput on violation.
void validate_tree(const NodePtr& node);

/// Textual notation: →(a, ×(b, τ), ∧(c, d), ⟲(e, f)). ASCII aliases
/// seq/xor/and/loop/tau are accepted on parse; printing uses the symbols.
std::string print_tree(const NodePtr& node);
std::string print_tree(const ProcessTree& tree);
ProcessTree parse_tree(const std::string& text);

/// Lookup tables for tree surgery.
struct TreeIndex {
  std::map<std::int64_t, const TreeNode*> by_id;
  std::map<std::int64_t, std::int64_t> parent;  // node id -> parent id (root absent)

  static TreeIndex build(const ProcessTree& tree);
  std::vector<std::int64_t> ancestors(std::int64_t id) const;  // nearest first
  std::int64_t lowest_common_ancestor(std::int64_t a, std::int64_t b) const;
};

struct DecisionPoint {
  std::int64_t node_id = 0;
  bool is_loop = false;
  std::vector<std::string> labels;  // one per child (xor) or {redo, exit}
};

/// All exclusive-choice and loop-redo decision points in preorder. Labels
/// are the activity for leaf children, "tau" for τ, "branch<i>" for operator
/// children, de-duplicated by position.
std::vector<DecisionPoint> decision_points(const ProcessTree& tree);
std::vector<std::string> decision_labels(const TreeNode& node);

/// n random activity sequences from the tree's language. Choices are
/// uniform; loop redo probability is damped so walks terminate.
std::vector<std::vector<std::string>> language_sample(const ProcessTree& tree, int n,
                                                      std::uint64_t rng_seed);
std::vector<std::string> sample_one(const NodePtr& node, Rng& rng);

}  // namespace bps
