#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtree/summary.hpp"
#include "mtree/tree.hpp"

namespace mtree {

/// Outcome of comparing the values of one node in two trees.
enum class NodeOutcome { Less, Equal, Greater, Incomparable };

/// Overall relation between two trees under the node-wise dominance order.
enum class Relation { Equal, LessEq, GreaterEq, Incomparable };

/// Which nodes take part in a comparison. AllNodes includes leaf
/// observations; NonLeafOnly looks at summary values only (the node set tree
/// equality is defined over).
enum class CompareScope { AllNodes, NonLeafOnly };

std::string_view to_string(NodeOutcome o) noexcept;
std::string_view to_string(Relation r) noexcept;
std::string_view to_string(CompareScope s) noexcept;
Relation converse(Relation r) noexcept;

struct CompatibilityReport {
  bool ok = true;
  std::vector<std::string> reasons;
};

/// Two trees are order-compatible when they share label paths, leaf datums,
/// edge weights and function bindings, and every bound function induces an
/// ordering.
CompatibilityReport check_order_compatible(const MeasurementTree& a, const MeasurementTree& b,
                                           const Registry& registry = Registry::builtin());

/// Same topology and function bindings, ignoring whether functions induce an
/// ordering.
CompatibilityReport check_same_shape(const MeasurementTree& a, const MeasurementTree& b);

struct NodeComparison {
  NodePath path;
  NodeOutcome outcome;
};

struct ComparisonReport {
  Relation overall = Relation::Equal;
  std::vector<NodeComparison> per_node;  // pre-order, compared nodes only
  CompatibilityReport precondition;
};

/// Three-way comparison of two values. Numbers compare numerically, ordered
/// categories by declared rank; Missing equals Missing and is incomparable to
/// anything else. Throws UnorderableValueKind for text, vectors, and
/// categories without a declared order.
NodeOutcome compare_values(const Value& a, const Value& b);

/// Folds per-node outcomes into an overall relation.
Relation combine(std::span<const NodeOutcome> outcomes) noexcept;

/// Node-wise comparison. Throws IncompatibleTrees when the precondition fails
/// and UnorderableValueKind when a compared node holds an unordered kind.
ComparisonReport compare(const EvaluatedTree& a, const EvaluatedTree& b, CompareScope scope = CompareScope::AllNodes,
                         const Registry& registry = Registry::builtin());

/// Overall relation only; skips the precondition check (callers must have
/// run it).
Relation relate(const EvaluatedTree& a, const EvaluatedTree& b, CompareScope scope);

struct EqualityReport {
  bool equal = true;
  std::vector<std::string> reasons;
  std::vector<NodeComparison> per_node;  // internal nodes only
};

/// Tree equality: same topology, same function bindings, same summary values
/// at every internal node. Leaf observations do not take part.
EqualityReport trees_equal(const EvaluatedTree& a, const EvaluatedTree& b);

struct AxiomOptions {
  CompareScope scope = CompareScope::AllNodes;
  /// Check this many random triples instead of all of them.
  std::optional<std::size_t> sample_triples;
  std::uint64_t seed = 0;
};

struct AxiomReport {
  std::size_t trees = 0;
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
  std::size_t antisymmetry_premises = 0;  // pairs with x<=y and y<=x
  std::size_t transitivity_premises = 0;  // triples with x<=y and y<=z
  std::vector<std::string> counterexamples;

  [[nodiscard]] bool ok() const noexcept { return counterexamples.empty(); }
};

/// Checks reflexivity, antisymmetry (up to tree equality) and transitivity
/// over the given set. Throws IncompatibleTrees if any pair is not
/// order-compatible.
AxiomReport verify_poset_axioms(std::span<const EvaluatedTree> trees, const AxiomOptions& options = {},
                                const Registry& registry = Registry::builtin());

/// Axiom check over an already computed relation matrix.
AxiomReport verify_poset_axioms(std::span<const EvaluatedTree> trees,
                                const std::vector<std::vector<Relation>>& relation, const AxiomOptions& options);

struct PosetResult {
  /// relation[i][j] is how tree i relates to tree j.
  std::vector<std::vector<Relation>> relation;
  /// Covering pairs (lower, upper): lower < upper with nothing strictly between.
  std::vector<std::pair<std::size_t, std::size_t>> hasse_edges;
  AxiomReport axioms;
};

PosetResult poset(std::span<const EvaluatedTree> trees, CompareScope scope = CompareScope::AllNodes,
                  const Registry& registry = Registry::builtin());

/// Transitive reduction of a strict order given as an adjacency matrix
/// (`less[i][j]` means i < j).
std::vector<std::pair<std::size_t, std::size_t>> hasse_edges(const std::vector<std::vector<bool>>& less);

}  // namespace mtree
