#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtree/summary.hpp"
#include "mtree/value.hpp"

namespace mtree {

/// Node identity across trees: the labels from the root's child down to the
/// node. The root is the empty path.
using NodePath = std::vector<std::string>;

/// "/" for the root, otherwise "/a/b".
std::string to_string(const NodePath& path);
/// Accepts "a/b", "/a/b", "" and "/". Throws InvalidLabel on empty segments.
NodePath parse_path(std::string_view text);

/// One node of a measurement tree. A node is a leaf iff it has no children;
/// leaves carry an observation, internal nodes a summary function and one
/// positive weight per child.
struct Node {
  std::string label;
  std::string description;

  // leaf
  Value observation;
  /// Dataset element this leaf observes. Empty means "the leaf's own path".
  std::string datum;

  // internal
  std::vector<Node> children;
  std::vector<double> weights;
  std::optional<FunctionBinding> function;

  [[nodiscard]] bool is_leaf() const noexcept { return children.empty() && !function; }
  bool operator==(const Node&) const = default;
};

/// Topology declaration handed to build_tree. `children` engaged means the
/// node is declared internal (even with zero children). Inline `value` and
/// `function` are alternatives to the binding maps.
struct NodeSpec {
  std::string label;
  std::optional<std::vector<NodeSpec>> children;
  double weight = 1.0;
  std::string description;
  std::string datum;
  std::optional<Value> value;
  std::optional<FunctionBinding> function;

  static NodeSpec leaf(std::string label, Value v) {
    NodeSpec s;
    s.label = std::move(label);
    s.value = std::move(v);
    return s;
  }
  static NodeSpec internal(std::string label, FunctionBinding f, std::vector<NodeSpec> kids) {
    NodeSpec s;
    s.label = std::move(label);
    s.function = std::move(f);
    s.children = std::move(kids);
    return s;
  }
};

/// Pre-order index entry; `subtree_end` is one past the node's last
/// descendant.
struct NodeEntry {
  const Node* node = nullptr;
  std::optional<std::size_t> parent;
  std::size_t depth = 0;
  NodePath path;
  std::vector<std::size_t> children;
  std::size_t subtree_end = 0;
  std::string datum;  // resolved, leaves only
};

/// Validated, immutable measurement tree. Copies share the node storage.
class MeasurementTree {
 public:
  /// Validates `root` (labels, weights, non-empty internal nodes, laminar
  /// dataset coverage). Throws on the first structural error.
  static MeasurementTree from_root(Node root);

  [[nodiscard]] const Node& root() const noexcept { return *root_; }
  [[nodiscard]] std::span<const NodeEntry> nodes() const noexcept { return *index_; }
  [[nodiscard]] const NodeEntry& entry(std::size_t i) const { return (*index_)[i]; }
  [[nodiscard]] std::size_t size() const noexcept { return index_->size(); }
  /// Number of leaves N.
  [[nodiscard]] std::size_t dataset_size() const noexcept { return leaf_count_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }

  [[nodiscard]] std::optional<std::size_t> find(const NodePath& path) const;
  /// Throws UnknownNode.
  [[nodiscard]] std::size_t index_of(const NodePath& path) const;

  [[nodiscard]] std::map<NodePath, FunctionBinding> function_table() const;

  friend bool operator==(const MeasurementTree& a, const MeasurementTree& b) { return a.root() == b.root(); }

 private:
  MeasurementTree() = default;
  std::shared_ptr<const Node> root_;
  std::shared_ptr<const std::vector<NodeEntry>> index_;
  std::size_t leaf_count_ = 0;
  std::size_t height_ = 0;
};

/// Builds and validates a tree. A leaf needs a value (inline or in
/// `leaf_data`; explicit Missing counts); an internal node needs a function.
MeasurementTree build_tree(const NodeSpec& topology, const std::map<NodePath, Value>& leaf_data = {},
                           const std::map<NodePath, FunctionBinding>& functions = {});

/// Human-readable warnings that do not block evaluation (weights handed to a
/// weight-unaware function, functions missing from the registry).
std::vector<std::string> lint(const MeasurementTree& tree, const Registry& registry = Registry::builtin());

class EvaluatedTree {
 public:
  EvaluatedTree(MeasurementTree tree, std::vector<Value> values);

  [[nodiscard]] const MeasurementTree& tree() const noexcept { return tree_; }
  [[nodiscard]] const Value& value(std::size_t index) const { return (*values_)[index]; }
  [[nodiscard]] std::span<const Value> values() const noexcept { return *values_; }
  [[nodiscard]] const Value& root_value() const { return value(0); }

 private:
  MeasurementTree tree_;
  std::shared_ptr<const std::vector<Value>> values_;
};

/// Bottom-up evaluation. Leaves pass their observation through; each internal
/// node applies its function to its direct children's values.
EvaluatedTree evaluate(const MeasurementTree& tree, const Registry& registry = Registry::builtin());

/// Stored value at `path`; throws UnknownNode.
const Value& node_value(const EvaluatedTree& evaluated, const NodePath& path);

/// The subtree rooted at `path` as an independent tree.
MeasurementTree subtree(const MeasurementTree& tree, const NodePath& path);

/// Read-only window onto an evaluated tree: an optional subtree root and an
/// optional depth limit (relative to that root). Nodes at the limit keep their
/// computed values; nothing is re-aggregated.
class EvaluatedView {
 public:
  explicit EvaluatedView(EvaluatedTree tree, std::size_t root = 0, std::optional<std::size_t> max_depth = {});

  [[nodiscard]] const EvaluatedTree& evaluated() const noexcept { return tree_; }
  [[nodiscard]] std::size_t root() const noexcept { return root_; }
  /// Visible node indices in pre-order.
  [[nodiscard]] std::span<const std::size_t> nodes() const noexcept { return visible_; }
  [[nodiscard]] std::size_t depth(std::size_t index) const;
  [[nodiscard]] std::vector<std::size_t> children(std::size_t index) const;
  [[nodiscard]] bool is_frontier(std::size_t index) const;
  [[nodiscard]] const Value& value(std::size_t index) const { return tree_.value(index); }

 private:
  EvaluatedTree tree_;
  std::size_t root_;
  std::optional<std::size_t> max_depth_;
  std::vector<std::size_t> visible_;
};

EvaluatedView prune_depth(const EvaluatedTree& evaluated, std::size_t depth);
EvaluatedView view_subtree(const EvaluatedTree& evaluated, const NodePath& path,
                           std::optional<std::size_t> depth = std::nullopt);

}  // namespace mtree
