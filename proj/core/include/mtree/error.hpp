#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtree {

enum class ErrorCode {
  // tree construction
  MissingLeafBinding,
  MissingFunctionBinding,
  UnexpectedBinding,
  ConflictingBinding,
  DuplicateSiblingLabel,
  EmptyInternalNode,
  NonPositiveWeight,
  InvalidLabel,
  InvalidValue,
  UnknownNode,
  // summary functions
  UnknownFunction,
  DuplicateName,
  InvalidMetadata,
  RegistryFrozen,
  RegistryNotFrozen,
  FunctionDomainMismatch,
  MissingCompetitorData,
  EvaluationFailed,
  // ordering
  IncompatibleTrees,
  UnorderableValueKind,
  // documents and signal tables
  SyntaxError,
  SchemaError,
  ValidationFailed,
  TableError,
  UnknownItem,
  ScaleViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure carries a stable code; the message is
/// for humans only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  /// The message without the leading code name.
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mtree
