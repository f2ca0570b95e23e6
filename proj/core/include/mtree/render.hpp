#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtree/order.hpp"
#include "mtree/tree.hpp"

namespace mtree::render {

struct RenderOptions {
  std::optional<std::size_t> max_depth;
  std::optional<NodePath> subtree_path;
  int precision = 2;
  bool show_functions = true;
  std::string missing_marker = "--";
  /// Strictly increasing breakpoints; k breakpoints give k + 1 fill colors
  /// from green (low) to red (high). Empty means no fill.
  std::vector<double> color_thresholds;
};

/// Breakpoints used for the 0-10 risk fixtures.
std::vector<double> risk_gradient();

/// Throws InvalidValue when precision is negative or thresholds are not
/// strictly increasing.
void check_options(const RenderOptions& opts);

/// One line per node, two spaces of indent per level:
/// `label: function value` for internal nodes, `label: value` for leaves.
std::string render_text(const EvaluatedTree& evaluated, const RenderOptions& opts = {});
std::string render_text(const EvaluatedView& view, const RenderOptions& opts = {});

/// Graphviz digraph. Node ids are the quoted label paths.
std::string render_dot(const EvaluatedTree& evaluated, const RenderOptions& opts = {});
std::string render_dot(const EvaluatedView& view, const RenderOptions& opts = {});

/// Human-readable comparison report.
std::string render_comparison(const ComparisonReport& report);

/// Relation table (=, ≤, ≥, ∥) and covering pairs over named trees.
std::string render_poset_text(const PosetResult& result, const std::vector<std::string>& names);
/// Hasse diagram as a Graphviz digraph, edges pointing upward in the order.
std::string render_poset_dot(const PosetResult& result, const std::vector<std::string>& names);

}  // namespace mtree::render
