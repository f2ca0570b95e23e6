#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtree/value.hpp"

namespace mtree {

/// Parameter value attached to a function binding: a flag, a single value, or
/// a list of values (e.g. one competitor vector per child).
using ParamValue = std::variant<bool, Value, std::vector<Value>>;
using Params = std::map<std::string, ParamValue, std::less<>>;

/// How Missing children are treated before a summary function runs.
enum class MissingPolicy {
  Skip,       ///< drop Missing children (and their weights); all Missing -> Missing
  AsZero,     ///< substitute 0 for Missing
  Propagate,  ///< any Missing child makes the result Missing
};

std::string_view to_string(MissingPolicy p) noexcept;
std::optional<MissingPolicy> parse_missing_policy(std::string_view s) noexcept;

/// A node's reference to a registered summary function.
struct FunctionBinding {
  std::string name;
  Params params;
  MissingPolicy missing_policy = MissingPolicy::Skip;

  bool operator==(const FunctionBinding&) const = default;
};

/// Registry metadata for one summary function.
struct SummaryFunctionSpec {
  std::string name;
  bool induces_ordering = true;
  bool weight_aware = false;
  std::set<ValueKind> input_kinds{ValueKind::Number};
  ValueKind output_kind = ValueKind::Number;
  /// Required when output_kind is Category.
  std::optional<LabelSet> output_labels;
};

/// What a summary implementation sees after the missing-data policy ran.
/// `positions[i]` is the declaration index of `values[i]` among all children.
struct SummaryInput {
  std::span<const Value> values;
  std::span<const double> weights;
  std::span<const std::size_t> positions;
  const Params& params;
};

/// Implementations must be deterministic pure functions of their input.
using SummaryImpl = std::function<Value(const SummaryInput&)>;

class Registry {
 public:
  struct Entry {
    SummaryFunctionSpec spec;
    SummaryImpl impl;
  };

  /// Adds a function. Throws DuplicateName, InvalidMetadata, RegistryFrozen.
  void add(SummaryFunctionSpec spec, SummaryImpl impl);
  void freeze() noexcept { frozen_ = true; }
  [[nodiscard]] bool frozen() const noexcept { return frozen_; }

  [[nodiscard]] const Entry* find(std::string_view name) const;
  /// Throws UnknownFunction.
  [[nodiscard]] const Entry& at(std::string_view name) const;
  [[nodiscard]] std::vector<std::string> names() const;

  /// Frozen registry holding the built-in catalog.
  static const Registry& builtin();
  /// Unfrozen registry pre-populated with the built-ins, for extension.
  static Registry with_builtins();

 private:
  std::map<std::string, Entry, std::less<>> entries_;
  bool frozen_ = false;
};

/// Applies the missing-data policy, checks input kinds and runs the function.
/// `weights` must be empty (all 1.0) or match `children` in length.
Value apply(const Registry& registry, const FunctionBinding& binding, std::span<const Value> children,
            std::span<const double> weights = {});

/// Names of the functions in the built-in catalog.
std::span<const std::string_view> builtin_names() noexcept;

/// True when `binding` names a weight-unaware function but `weights` are not
/// all 1.0.
bool ignores_weights(const Registry& registry, const FunctionBinding& binding, std::span<const double> weights);

// Parameter helpers shared by the built-ins and custom functions.
const ParamValue* find_param(const Params& params, std::string_view key);
bool param_flag(const Params& params, std::string_view key, bool fallback);

}  // namespace mtree
