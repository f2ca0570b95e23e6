#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtree/summary.hpp"
#include "mtree/tree.hpp"

namespace mtree::catalog {

/// Construct hierarchy of an instrument, without data. Nodes at the
/// instrument's item depth bind observations; their `function` (if any)
/// summarizes individual responses when those are supplied.
struct ConstructSpec {
  std::string label;
  std::string description;
  std::optional<FunctionBinding> function;
  std::vector<ConstructSpec> children;
};

struct InstrumentSpec {
  std::string name;
  ConstructSpec root;
  std::size_t item_depth = 0;

  /// Node path -> summary function, for every node that has one.
  [[nodiscard]] std::map<NodePath, FunctionBinding> function_plan() const;
  /// Paths of all item-level constructs, in declaration order.
  [[nodiscard]] std::vector<NodePath> item_paths() const;
  [[nodiscard]] bool has_item(const NodePath& path) const;
};

// ---------------------------------------------------------------------------
// CoRIx

enum class TestingLevel { MT, RT, FT };
enum class SignalSource { Annotation, Perception };

std::string_view to_string(TestingLevel t) noexcept;
std::string_view to_string(SignalSource s) noexcept;
std::optional<TestingLevel> parse_testing_level(std::string_view s) noexcept;
std::optional<SignalSource> parse_signal_source(std::string_view s) noexcept;

struct ItemKey {
  TestingLevel level;
  SignalSource source;
  std::string item;

  auto operator<=>(const ItemKey&) const = default;
};

/// Path of an item construct: {testing level, source, item id}.
NodePath item_path(const ItemKey& key);

/// Five-level risk instrument: max at the root, mean per testing level, mean
/// per source except median for field-testing perception, and the same rule
/// for item nodes over individual responses.
InstrumentSpec corix_topology();

/// Builds the tree truncated at the item level (item values become leaves,
/// absent items are Missing) and evaluates it. Throws UnknownItem.
EvaluatedTree corix_from_level4(const std::map<ItemKey, Value>& values);
MeasurementTree corix_level4_tree(const std::map<ItemKey, Value>& values);

enum class PilotModel { A, B, C };

std::string_view to_string(PilotModel m) noexcept;
/// Task description of each pilot column.
std::string_view pilot_task(PilotModel m) noexcept;

/// Published item-level pilot scores for one model; absent entries are
/// omitted.
std::map<ItemKey, Value> pilot_item_scores(PilotModel m);

/// Published aggregate pilot scores (root, testing levels, sources) keyed by
/// node path, at two decimals.
std::map<NodePath, double> pilot_reported_aggregates(PilotModel m);

// ---------------------------------------------------------------------------
// Small worked examples

/// Four leaves valued 1, 3, 2, 2 in two constructs of two; `function` at
/// every internal node.
MeasurementTree two_construct_tree(std::string_view function);

/// Accuracy as a two-level tree over 0/1 correctness leaves.
MeasurementTree accuracy_tree(const std::vector<double>& correct);

/// HELM-style accuracy topology: mean win rate at the root and at the four
/// scenario groups, metric leaves below.
InstrumentSpec helm_topology();

/// helm_topology with synthetic leaf scores and competitor sets.
MeasurementTree helm_example_tree();

/// Flat mean tree over the given leaf values (leaves "x1".."xn").
MeasurementTree flat_tree(std::string_view function, const std::vector<double>& leaves);

struct Fixture {
  std::string name;
  MeasurementTree tree;
  std::map<std::string, std::string> metadata;  // raw JSON values
};

/// Every shipped fixture document, in a stable order.
std::vector<Fixture> fixtures();

}  // namespace mtree::catalog
