#include "mtree/render.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "mtree/error.hpp"

namespace mtree::render {

std::vector<double> risk_gradient() { return {2.0, 4.0, 6.0, 8.0}; }

void check_options(const RenderOptions& opts) {
  if (opts.precision < 0) throw Error(ErrorCode::InvalidValue, "precision must be non-negative");
  for (std::size_t i = 1; i < opts.color_thresholds.size(); ++i) {
    if (!(opts.color_thresholds[i - 1] < opts.color_thresholds[i])) {
      throw Error(ErrorCode::InvalidValue, "color thresholds must be strictly increasing");
    }
  }
}

namespace {

EvaluatedView make_view(const EvaluatedTree& evaluated, const RenderOptions& opts) {
  check_options(opts);
  if (opts.subtree_path) return view_subtree(evaluated, *opts.subtree_path, opts.max_depth);
  return EvaluatedView(evaluated, 0, opts.max_depth);
}

std::string value_text(const Value& v, const RenderOptions& opts) {
  return format_value(v, opts.precision, opts.missing_marker);
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string fill_color(const Value& v, const std::vector<double>& thresholds) {
  if (!v.is_number()) return "#d9d9d9";
  const double x = v.as_number();
  const auto bucket = static_cast<std::size_t>(std::upper_bound(thresholds.begin(), thresholds.end(), x) -
                                               thresholds.begin());
  const double t = thresholds.empty() ? 0.0 : static_cast<double>(bucket) / static_cast<double>(thresholds.size());
  // green (44,160,44) -> red (214,39,40)
  auto mix = [t](int lo, int hi) { return static_cast<int>(lo + (hi - lo) * t + 0.5); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(44, 214), mix(160, 39), mix(44, 40));
  return buf;
}

// Shortest %g form that reads back to w.
std::string weight_text(double w) {
  char buf[32];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, w);
    if (std::strtod(buf, nullptr) == w) break;
  }
  return buf;
}

}  // namespace

std::string render_text(const EvaluatedView& view, const RenderOptions& opts) {
  check_options(opts);
  const auto& tree = view.evaluated().tree();
  std::string out;
  for (auto k : view.nodes()) {
    const auto& e = tree.entry(k);
    out.append(2 * view.depth(k), ' ');
    out += e.node->label;
    out += ':';
    if (opts.show_functions && e.node->function) {
      out += ' ';
      out += e.node->function->name;
    }
    out += ' ';
    out += value_text(view.value(k), opts);
    out += '\n';
  }
  return out;
}

std::string render_text(const EvaluatedTree& evaluated, const RenderOptions& opts) {
  return render_text(make_view(evaluated, opts), opts);
}

std::string render_dot(const EvaluatedView& view, const RenderOptions& opts) {
  check_options(opts);
  const auto& tree = view.evaluated().tree();
  std::string out = "digraph mtree {\n";
  out += "  node [shape=box, style=\"rounded,filled\", fillcolor=\"#ffffff\", fontname=\"Helvetica\"];\n";
  for (auto k : view.nodes()) {
    const auto& e = tree.entry(k);
    std::string label = e.node->label;
    if (opts.show_functions && e.node->function) label += "\n" + e.node->function->name;
    label += "\n" + value_text(view.value(k), opts);
    out += "  \"" + dot_escape(to_string(e.path)) + "\" [label=\"" + dot_escape(label) + "\"";
    if (!opts.color_thresholds.empty()) out += ", fillcolor=\"" + fill_color(view.value(k), opts.color_thresholds) + "\"";
    out += "];\n";
  }
  for (auto k : view.nodes()) {
    const auto& e = tree.entry(k);
    const auto kids = view.children(k);
    for (std::size_t c = 0; c < kids.size(); ++c) {
      out += "  \"" + dot_escape(to_string(e.path)) + "\" -> \"" + dot_escape(to_string(tree.entry(kids[c]).path)) +
             "\"";
      const double w = e.node->weights[c];
      if (w != 1.0) out += " [label=\"" + weight_text(w) + "\"]";
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

std::string render_dot(const EvaluatedTree& evaluated, const RenderOptions& opts) {
  return render_dot(make_view(evaluated, opts), opts);
}

std::string render_comparison(const ComparisonReport& report) {
  std::string out = "overall: " + std::string(to_string(report.overall)) + "\n";
  std::size_t equal = 0;
  for (const auto& n : report.per_node) {
    if (n.outcome == NodeOutcome::Equal) {
      ++equal;
      continue;
    }
    out += "  " + to_string(n.path) + ": " + std::string(to_string(n.outcome)) + "\n";
  }
  out += "nodes compared: " + std::to_string(report.per_node.size()) + ", equal: " + std::to_string(equal) + "\n";
  return out;
}

namespace {

std::string_view symbol(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::LessEq: return "≤";
    case Relation::GreaterEq: return "≥";
    case Relation::Incomparable: return "∥";
  }
  return "?";
}

std::string axiom_line(const AxiomReport& a) {
  std::string out = "axioms: ";
  out += a.ok() ? "reflexivity, antisymmetry and transitivity hold" : "VIOLATED";
  out += " (" + std::to_string(a.trees) + " trees, " + std::to_string(a.pairs_checked) + " pairs, " +
         std::to_string(a.triples_checked) + " triples)\n";
  for (const auto& c : a.counterexamples) out += "  counterexample: " + c + "\n";
  return out;
}

}  // namespace

std::string render_poset_text(const PosetResult& result, const std::vector<std::string>& names) {
  const std::size_t n = result.relation.size();
  std::string out = "trees:\n";
  for (std::size_t i = 0; i < n; ++i) out += "  [" + std::to_string(i) + "] " + names.at(i) + "\n";
  out += "relation (row vs column):\n     ";
  for (std::size_t j = 0; j < n; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%4zu", j);
    out += buf;
  }
  out += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "  %3zu", i);
    out += buf;
    for (std::size_t j = 0; j < n; ++j) {
      out += "   ";
      out += symbol(result.relation[i][j]);
    }
    out += "\n";
  }
  out += "hasse edges (lower -> upper):\n";
  if (result.hasse_edges.empty()) out += "  (none)\n";
  for (const auto& [lo, hi] : result.hasse_edges) out += "  " + names.at(lo) + " -> " + names.at(hi) + "\n";
  out += axiom_line(result.axioms);
  return out;
}

std::string render_poset_dot(const PosetResult& result, const std::vector<std::string>& names) {
  std::string out = "digraph poset {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < result.relation.size(); ++i) {
    out += "  t" + std::to_string(i) + " [label=\"" + dot_escape(names.at(i)) + "\"];\n";
  }
  for (const auto& [lo, hi] : result.hasse_edges) {
    out += "  t" + std::to_string(lo) + " -> t" + std::to_string(hi) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mtree::render
