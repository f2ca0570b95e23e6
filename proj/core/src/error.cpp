#include "mtree/error.hpp"

namespace mtree {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingLeafBinding: return "MissingLeafBinding";
    case ErrorCode::MissingFunctionBinding: return "MissingFunctionBinding";
    case ErrorCode::UnexpectedBinding: return "UnexpectedBinding";
    case ErrorCode::ConflictingBinding: return "ConflictingBinding";
    case ErrorCode::DuplicateSiblingLabel: return "DuplicateSiblingLabel";
    case ErrorCode::EmptyInternalNode: return "EmptyInternalNode";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::InvalidMetadata: return "InvalidMetadata";
    case ErrorCode::RegistryFrozen: return "RegistryFrozen";
    case ErrorCode::RegistryNotFrozen: return "RegistryNotFrozen";
    case ErrorCode::FunctionDomainMismatch: return "FunctionDomainMismatch";
    case ErrorCode::MissingCompetitorData: return "MissingCompetitorData";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::IncompatibleTrees: return "IncompatibleTrees";
    case ErrorCode::UnorderableValueKind: return "UnorderableValueKind";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::TableError: return "TableError";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::ScaleViolation: return "ScaleViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace mtree
