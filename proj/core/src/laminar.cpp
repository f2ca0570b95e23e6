#include "mtree/laminar.hpp"

#include <algorithm>
#include <map>

#include "mtree/tree.hpp"

namespace mtree {

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NonNestedOverlap: return "non-nested-overlap";
    case ViolationKind::IncompletePartition: return "incomplete-partition";
    case ViolationKind::RootCoverage: return "root-coverage";
    case ViolationKind::MissingSingleton: return "missing-singleton";
  }
  return "?";
}

bool LaminarReport::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

namespace {

std::string set_name(const CandidateFamily& f, std::size_t i) {
  return f.sets[i].name.empty() ? "#" + std::to_string(i) : "'" + f.sets[i].name + "'";
}

bool intersects(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    a[i] < b[j] ? ++i : ++j;
  }
  return false;
}

bool subset_of(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Largest sets first; every set must sit inside the innermost set already
// holding its elements. O(total members) after sorting.
bool nested(const std::vector<std::vector<std::size_t>>& members, std::size_t n) {
  std::vector<std::size_t> order(members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return members[a].size() > members[b].size(); });
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> innermost(n, kNone);
  for (auto s : order) {
    const auto& m = members[s];
    if (m.empty()) continue;
    const std::size_t p = innermost[m.front()];
    for (auto e : m) {
      if (innermost[e] != p) return false;
    }
    for (auto e : m) innermost[e] = s;
  }
  return true;
}

}  // namespace

LaminarReport validate_laminar(const CandidateFamily& family) {
  LaminarReport report;
  const std::size_t n = family.universe.size();
  const std::size_t m = family.sets.size();
  if (m == 0) {
    report.violations.push_back({ViolationKind::RootCoverage, "family has no sets"});
    return report;
  }

  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (auto e : family.sets[i].members) {
      if (e < n) members[i].push_back(e);
    }
    std::sort(members[i].begin(), members[i].end());
    members[i].erase(std::unique(members[i].begin(), members[i].end()), members[i].end());
  }

  const auto& root = members[family.root];
  if (root.size() != n) {
    report.violations.push_back({ViolationKind::RootCoverage, "root " + set_name(family, family.root) + " covers " +
                                                                  std::to_string(root.size()) + " of " +
                                                                  std::to_string(n) + " elements"});
  }

  std::vector<bool> has_singleton(n, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (family.sets[i].children.empty() && members[i].size() == 1) has_singleton[members[i].front()] = true;
  }
  for (std::size_t e = 0; e < n; ++e) {
    if (!has_singleton[e]) {
      report.violations.push_back({ViolationKind::MissingSingleton, "element '" + family.universe[e] + "' has no leaf"});
    }
  }

  // The pairwise scan only runs to name the offending pairs.
  if (!nested(members, n)) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (intersects(members[i], members[j]) && !subset_of(members[i], members[j]) &&
            !subset_of(members[j], members[i])) {
          report.violations.push_back({ViolationKind::NonNestedOverlap,
                                       set_name(family, i) + " and " + set_name(family, j) + " overlap without nesting"});
        }
      }
    }
  }

  // in_parent[e] == i + 1 marks e as a member of set i; claimed[e] marks it
  // as already taken by one of i's children.
  std::vector<std::size_t> in_parent(n, 0), claimed(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& kids = family.sets[i].children;
    if (kids.empty()) continue;
    for (auto e : members[i]) in_parent[e] = i + 1;
    bool outside = false, shared = false;
    std::size_t distinct = 0;
    for (auto c : kids) {
      for (auto e : members[c]) {
        if (in_parent[e] != i + 1) {
          outside = true;
        } else if (claimed[e] == i + 1) {
          shared = true;
        } else {
          claimed[e] = i + 1;
          ++distinct;
        }
      }
    }
    if (outside || distinct != members[i].size()) {
      report.violations.push_back(
          {ViolationKind::IncompletePartition, "children of " + set_name(family, i) + " do not cover it exactly"});
    } else if (shared) {
      report.violations.push_back(
          {ViolationKind::IncompletePartition, "children of " + set_name(family, i) + " share elements"});
    }
  }
  return report;
}

CandidateFamily family_of(const MeasurementTree& tree) {
  CandidateFamily f;
  std::map<std::string, std::size_t> element;
  for (const auto& e : tree.nodes()) {
    if (e.node->is_leaf() && !element.contains(e.datum)) {
      element.emplace(e.datum, f.universe.size());
      f.universe.push_back(e.datum);
    }
  }
  f.sets.resize(tree.size());
  // Reverse pre-order visits children before parents.
  for (std::size_t k = tree.size(); k-- > 0;) {
    const auto& e = tree.entry(k);
    auto& s = f.sets[k];
    s.name = to_string(e.path);
    s.parent = e.parent;
    s.children = e.children;
    if (e.node->is_leaf()) {
      s.members.push_back(element.at(e.datum));
    } else {
      for (auto c : e.children) {
        const auto& cm = f.sets[c].members;
        s.members.insert(s.members.end(), cm.begin(), cm.end());
      }
      std::sort(s.members.begin(), s.members.end());
      s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
    }
  }
  return f;
}

LaminarReport validate_laminar(const MeasurementTree& tree) { return validate_laminar(family_of(tree)); }

}  // namespace mtree
