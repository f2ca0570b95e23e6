#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtree/laminar.hpp"
#include "mtree/order.hpp"
#include "mtree/summary.hpp"
#include "mtree/tree.hpp"

namespace mtree::io {

inline constexpr std::string_view kFormatVersion = "1";

enum class ParseMode { Strict, Permissive };

/// One node record of a tree document. Records with `children` are internal
/// and need a function; records with `value` are leaves. Unknown keys land in
/// `extra` (raw JSON text) when parsing permissively.
struct NodeRecord {
  std::string label;
  std::string description;
  std::optional<std::vector<NodeRecord>> children;
  std::optional<FunctionBinding> function;
  /// Set when the record names a missing policy explicitly.
  bool explicit_missing_policy = false;
  std::optional<double> weight;
  std::optional<Value> value;  // engaged with Missing for an explicit null
  std::string datum;
  std::optional<std::vector<std::string>> members;
  std::optional<Value> computed;
  std::map<std::string, std::string> extra;
};

struct DocumentDefaults {
  MissingPolicy missing_policy = MissingPolicy::Skip;
  int display_precision = 2;
};

/// Serialized measurement tree: structure, functions, leaf data and optional
/// computed values in one JSON object.
struct TreeDocument {
  std::string format_version{kFormatVersion};
  NodeRecord root;
  DocumentDefaults defaults;
  /// Free-form metadata; values are raw JSON text.
  std::map<std::string, std::string> metadata;
  /// External leaf-data file: a JSON object mapping node paths to values.
  std::optional<std::string> data_ref;
  /// Explicit dataset; defaults to the leaves' datums.
  std::optional<std::vector<std::string>> dataset;
  std::map<std::string, std::string> extra;
};

/// Resolves `data_ref` to file contents.
using DataLoader = std::function<std::string(std::string_view ref)>;

/// Bytes -> document. Throws SyntaxError (with byte offset) or SchemaError.
TreeDocument parse_document(std::string_view bytes, ParseMode mode = ParseMode::Strict);
/// Canonical JSON: sorted keys, children in declaration order, shortest
/// round-trip numbers, two-space indent, trailing newline.
std::string write_document(const TreeDocument& doc);

struct ParseResult {
  TreeDocument document;
  CandidateFamily family;
  LaminarReport report;
  std::optional<MeasurementTree> tree;  // engaged iff the family is valid
};

struct ParseOptions {
  ParseMode mode = ParseMode::Strict;
  const Registry* registry = &Registry::builtin();
  DataLoader loader;
};

/// Document -> tree. Strict mode throws ValidationFailed on any laminar
/// violation; permissive mode reports violations and leaves `tree` empty.
/// Both modes throw UnknownFunction for names missing from the registry.
ParseResult load_tree(const TreeDocument& doc, const ParseOptions& options = {});
ParseResult parse_tree_file(std::string_view bytes, const ParseOptions& options = {});

struct WriteOptions {
  std::map<std::string, std::string> metadata;
  DocumentDefaults defaults;
};

TreeDocument to_document(const MeasurementTree& tree, const WriteOptions& options = {});
/// Adds each node's computed value alongside the structure.
TreeDocument to_document(const EvaluatedTree& evaluated, const WriteOptions& options = {});

std::string write_tree_file(const MeasurementTree& tree, const WriteOptions& options = {});
std::string write_tree_file(const EvaluatedTree& evaluated, const WriteOptions& options = {});

/// JSON text for a single value ("null" for Missing).
std::string value_to_json(const Value& v);

/// Canonical JSON for comparison and poset results.
std::string write_comparison(const ComparisonReport& report);
std::string write_poset(const PosetResult& result, const std::vector<std::string>& names);

}  // namespace mtree::io
