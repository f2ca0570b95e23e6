#include "mtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mtree/error.hpp"
#include "mtree/laminar.hpp"

namespace mtree {

std::string to_string(const NodePath& path) {
  if (path.empty()) return "/";
  std::string out;
  for (const auto& label : path) out += "/" + label;
  return out;
}

NodePath parse_path(std::string_view text) {
  NodePath path;
  if (!text.empty() && text.front() == '/') text.remove_prefix(1);
  if (text.empty()) return path;
  std::size_t start = 0;
  while (true) {
    const auto slash = text.find('/', start);
    auto seg = text.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    if (seg.empty()) throw Error(ErrorCode::InvalidLabel, "empty segment in node path '" + std::string(text) + "'");
    path.emplace_back(seg);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return path;
}

// ---------------------------------------------------------------------------
// MeasurementTree

namespace {

void check_node(const Node& node, const NodePath& path, bool is_root) {
  const std::string where = to_string(path);
  if (node.label.empty()) throw Error(ErrorCode::InvalidLabel, "empty label at " + where);
  if (!is_root && node.label.find('/') != std::string::npos) {
    throw Error(ErrorCode::InvalidLabel, "label '" + node.label + "' contains '/'");
  }
  if (node.function && node.children.empty()) {
    throw Error(ErrorCode::EmptyInternalNode, "internal node " + where + " has no children");
  }
  if (!node.children.empty() && !node.function) {
    throw Error(ErrorCode::MissingFunctionBinding, "internal node " + where + " has no summary function");
  }
  if (node.is_leaf()) return;
  if (node.weights.size() != node.children.size()) {
    throw Error(ErrorCode::NonPositiveWeight, "node " + where + " has " + std::to_string(node.weights.size()) +
                                                  " weights for " + std::to_string(node.children.size()) + " children");
  }
  for (double w : node.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::NonPositiveWeight, "edge weights under " + where + " must be positive and finite");
    }
  }
  std::set<std::string_view> seen;
  for (const auto& c : node.children) {
    if (!seen.insert(c.label).second) {
      throw Error(ErrorCode::DuplicateSiblingLabel, "duplicate label '" + c.label + "' under " + where);
    }
  }
}

void index_nodes(const Node& node, std::optional<std::size_t> parent, std::size_t depth, NodePath& path,
                 std::vector<NodeEntry>& out) {
  check_node(node, path, !parent.has_value());
  const std::size_t me = out.size();
  out.push_back(NodeEntry{&node, parent, depth, path, {}, 0, {}});
  if (node.is_leaf()) out[me].datum = node.datum.empty() ? to_string(path) : node.datum;
  for (const auto& child : node.children) {
    out[me].children.push_back(out.size());
    path.push_back(child.label);
    index_nodes(child, me, depth + 1, path, out);
    path.pop_back();
  }
  out[me].subtree_end = out.size();
}

}  // namespace

MeasurementTree MeasurementTree::from_root(Node root) {
  MeasurementTree t;
  t.root_ = std::make_shared<const Node>(std::move(root));
  auto index = std::make_shared<std::vector<NodeEntry>>();
  NodePath path;
  index_nodes(*t.root_, std::nullopt, 0, path, *index);
  for (const auto& e : *index) {
    if (e.node->is_leaf()) ++t.leaf_count_;
    t.height_ = std::max(t.height_, e.depth);
  }
  t.index_ = std::move(index);

  const auto report = validate_laminar(t);
  if (!report.valid()) {
    std::string msg = "tree is not a hierarchical clustering:";
    for (const auto& v : report.violations) msg += " [" + std::string(to_string(v.kind)) + "] " + v.detail + ";";
    throw Error(ErrorCode::ValidationFailed, msg);
  }
  return t;
}

std::optional<std::size_t> MeasurementTree::find(const NodePath& path) const {
  std::size_t at = 0;
  for (const auto& label : path) {
    const auto& kids = entry(at).children;
    auto it = std::find_if(kids.begin(), kids.end(), [&](std::size_t c) { return entry(c).node->label == label; });
    if (it == kids.end()) return std::nullopt;
    at = *it;
  }
  return at;
}

std::size_t MeasurementTree::index_of(const NodePath& path) const {
  if (auto i = find(path)) return *i;
  throw Error(ErrorCode::UnknownNode, "no node at " + to_string(path));
}

std::map<NodePath, FunctionBinding> MeasurementTree::function_table() const {
  std::map<NodePath, FunctionBinding> table;
  for (const auto& e : nodes()) {
    if (e.node->function) table.emplace(e.path, *e.node->function);
  }
  return table;
}

// ---------------------------------------------------------------------------
// build_tree

namespace {

Node build_node(const NodeSpec& spec, NodePath& path, const std::map<NodePath, Value>& leaf_data,
                const std::map<NodePath, FunctionBinding>& functions) {
  const std::string where = to_string(path);
  Node node;
  node.label = spec.label;
  node.description = spec.description;
  node.datum = spec.datum;

  const auto data_it = leaf_data.find(path);
  const auto fn_it = functions.find(path);

  if (!spec.children) {
    if (spec.function || fn_it != functions.end()) {
      throw Error(ErrorCode::UnexpectedBinding, "leaf " + where + " has a summary function binding");
    }
    if (spec.value && data_it != leaf_data.end()) {
      throw Error(ErrorCode::ConflictingBinding, "leaf " + where + " is bound both inline and in leaf data");
    }
    if (spec.value) {
      node.observation = *spec.value;
    } else if (data_it != leaf_data.end()) {
      node.observation = data_it->second;
    } else {
      throw Error(ErrorCode::MissingLeafBinding, "leaf " + where + " has no observation");
    }
    return node;
  }

  if (spec.children->empty()) throw Error(ErrorCode::EmptyInternalNode, "internal node " + where + " has no children");
  if (spec.value || data_it != leaf_data.end()) {
    throw Error(ErrorCode::UnexpectedBinding, "internal node " + where + " has leaf data");
  }
  if (spec.function && fn_it != functions.end()) {
    throw Error(ErrorCode::ConflictingBinding, "node " + where + " has both an inline and a mapped function");
  }
  if (spec.function) {
    node.function = *spec.function;
  } else if (fn_it != functions.end()) {
    node.function = fn_it->second;
  } else {
    throw Error(ErrorCode::MissingFunctionBinding, "internal node " + where + " has no summary function");
  }
  for (const auto& child : *spec.children) {
    if (!(child.weight > 0.0)) {
      throw Error(ErrorCode::NonPositiveWeight, "edge to '" + child.label + "' under " + where + " is not positive");
    }
    path.push_back(child.label);
    node.children.push_back(build_node(child, path, leaf_data, functions));
    path.pop_back();
    node.weights.push_back(child.weight);
  }
  return node;
}

}  // namespace

MeasurementTree build_tree(const NodeSpec& topology, const std::map<NodePath, Value>& leaf_data,
                           const std::map<NodePath, FunctionBinding>& functions) {
  NodePath path;
  return MeasurementTree::from_root(build_node(topology, path, leaf_data, functions));
}

std::vector<std::string> lint(const MeasurementTree& tree, const Registry& registry) {
  std::vector<std::string> warnings;
  for (const auto& e : tree.nodes()) {
    if (!e.node->function) continue;
    const auto& fn = *e.node->function;
    if (!registry.find(fn.name)) {
      warnings.push_back(to_string(e.path) + ": unknown summary function '" + fn.name + "'");
    } else if (ignores_weights(registry, fn, e.node->weights)) {
      warnings.push_back(to_string(e.path) + ": '" + fn.name + "' ignores the non-unit edge weights");
    }
  }
  return warnings;
}

// ---------------------------------------------------------------------------
// evaluation

EvaluatedTree::EvaluatedTree(MeasurementTree tree, std::vector<Value> values)
    : tree_(std::move(tree)), values_(std::make_shared<const std::vector<Value>>(std::move(values))) {
  if (values_->size() != tree_.size()) {
    throw Error(ErrorCode::EvaluationFailed, "value table does not cover every node");
  }
}

EvaluatedTree evaluate(const MeasurementTree& tree, const Registry& registry) {
  std::vector<Value> values(tree.size());
  std::vector<Value> args;
  // Children follow their parent in pre-order, so a reverse sweep sees every
  // child before its parent.
  for (std::size_t k = tree.size(); k-- > 0;) {
    const auto& e = tree.entry(k);
    if (e.node->is_leaf()) {
      values[k] = e.node->observation;
      continue;
    }
    args.clear();
    for (auto c : e.children) args.push_back(values[c]);
    try {
      values[k] = apply(registry, *e.node->function, args, e.node->weights);
    } catch (const Error& err) {
      throw Error(err.code(), "at " + to_string(e.path) + ": " + err.detail());
    } catch (const std::exception& err) {
      throw Error(ErrorCode::EvaluationFailed, "at " + to_string(e.path) + ": " + err.what());
    }
  }
  return EvaluatedTree(tree, std::move(values));
}

const Value& node_value(const EvaluatedTree& evaluated, const NodePath& path) {
  return evaluated.value(evaluated.tree().index_of(path));
}

MeasurementTree subtree(const MeasurementTree& tree, const NodePath& path) {
  const auto idx = tree.index_of(path);
  return MeasurementTree::from_root(*tree.entry(idx).node);
}

// ---------------------------------------------------------------------------
// views

EvaluatedView::EvaluatedView(EvaluatedTree tree, std::size_t root, std::optional<std::size_t> max_depth)
    : tree_(std::move(tree)), root_(root), max_depth_(max_depth) {
  const auto& t = tree_.tree();
  if (root_ >= t.size()) throw Error(ErrorCode::UnknownNode, "view root out of range");
  const std::size_t base = t.entry(root_).depth;
  for (std::size_t k = root_; k < t.entry(root_).subtree_end; ++k) {
    if (!max_depth_ || t.entry(k).depth - base <= *max_depth_) visible_.push_back(k);
  }
}

std::size_t EvaluatedView::depth(std::size_t index) const {
  return tree_.tree().entry(index).depth - tree_.tree().entry(root_).depth;
}

std::vector<std::size_t> EvaluatedView::children(std::size_t index) const {
  if (max_depth_ && depth(index) >= *max_depth_) return {};
  return tree_.tree().entry(index).children;
}

bool EvaluatedView::is_frontier(std::size_t index) const {
  return !tree_.tree().entry(index).node->is_leaf() && children(index).empty();
}

EvaluatedView prune_depth(const EvaluatedTree& evaluated, std::size_t depth) {
  return EvaluatedView(evaluated, 0, depth);
}

EvaluatedView view_subtree(const EvaluatedTree& evaluated, const NodePath& path, std::optional<std::size_t> depth) {
  return EvaluatedView(evaluated, evaluated.tree().index_of(path), depth);
}

}  // namespace mtree
