#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtree {

class MeasurementTree;

/// A candidate hierarchical clustering before validation: a dataset
/// (`universe`) and a rooted family of member sets. Leaves are sets without
/// children. Permissive document parsing produces these so broken structures
/// can be reported instead of rejected.
struct CandidateFamily {
  struct Set {
    std::string name;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    std::vector<std::size_t> members;  // indices into universe, any order
  };

  std::vector<std::string> universe;
  std::vector<Set> sets;
  std::size_t root = 0;
};

enum class ViolationKind {
  NonNestedOverlap,    ///< two sets intersect without one containing the other
  IncompletePartition, ///< children do not partition their parent's members
  RootCoverage,        ///< the root is not the whole dataset
  MissingSingleton,    ///< a dataset element has no leaf of its own
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct LaminarReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
  [[nodiscard]] bool has(ViolationKind kind) const noexcept;
};

LaminarReport validate_laminar(const CandidateFamily& family);
LaminarReport validate_laminar(const MeasurementTree& tree);

/// The set family a tree implies: one set per node, leaves are the singletons
/// of their datum.
CandidateFamily family_of(const MeasurementTree& tree);

}  // namespace mtree
