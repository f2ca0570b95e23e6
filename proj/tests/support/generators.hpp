#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mtree/laminar.hpp"
#include "mtree/tree.hpp"
#include "oracles.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline const std::vector<std::string> kMonotone = {"mean", "median", "max", "min", "sum", "weighted_mean"};

struct TopologyOptions {
  std::size_t max_depth = 5;  // leaves sit at depth <= max_depth
  std::size_t min_leaves = 2;
  std::size_t max_leaves = 32;
  std::vector<std::string> functions = kMonotone;
  bool random_weights = false;  // only applied under weighted_mean
  bool random_policies = false;
};

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

namespace detail {

inline mtree::NodeSpec build(Rng& rng, const TopologyOptions& o, std::size_t leaves, std::size_t depth,
                             std::size_t& next_leaf, std::size_t& next_internal) {
  if (leaves == 1 && depth > 0) {
    return mtree::NodeSpec::leaf("x" + std::to_string(next_leaf++), mtree::Value::number(0.0));
  }
  mtree::FunctionBinding f;
  f.name = o.functions[uniform(rng, 0, o.functions.size() - 1)];
  if (o.random_policies) {
    constexpr mtree::MissingPolicy kPolicies[] = {mtree::MissingPolicy::Skip, mtree::MissingPolicy::AsZero,
                                                  mtree::MissingPolicy::Propagate};
    f.missing_policy = kPolicies[uniform(rng, 0, 2)];
  }
  std::vector<std::size_t> parts;
  if (depth + 1 >= o.max_depth || uniform(rng, 0, 4) == 0) {
    parts.assign(leaves, 1);
  } else {
    const std::size_t k = uniform(rng, std::min<std::size_t>(2, leaves), std::min<std::size_t>(4, leaves));
    parts.assign(k, 1);
    for (std::size_t rest = leaves - k; rest > 0; --rest) ++parts[uniform(rng, 0, k - 1)];
  }
  const std::string label = depth == 0 ? "root" : "c" + std::to_string(next_internal++);
  std::vector<mtree::NodeSpec> kids;
  for (auto p : parts) {
    kids.push_back(build(rng, o, p, depth + 1, next_leaf, next_internal));
    if (o.random_weights && f.name == "weighted_mean") {
      constexpr double kWeights[] = {0.5, 1.0, 2.0, 3.0};
      kids.back().weight = kWeights[uniform(rng, 0, 3)];
    }
  }
  return mtree::NodeSpec::internal(label, std::move(f), std::move(kids));
}

}  // namespace detail

inline mtree::NodeSpec random_topology(Rng& rng, const TopologyOptions& o = {}) {
  std::size_t next_leaf = 1, next_internal = 1;
  return detail::build(rng, o, uniform(rng, o.min_leaves, o.max_leaves), 0, next_leaf, next_internal);
}

inline void for_each_leaf(mtree::NodeSpec& s, const std::function<void(mtree::NodeSpec&)>& fn) {
  if (!s.children) {
    fn(s);
    return;
  }
  for (auto& c : *s.children) for_each_leaf(c, fn);
}

inline std::size_t count_leaves(mtree::NodeSpec s) {
  std::size_t n = 0;
  for_each_leaf(s, [&](mtree::NodeSpec&) { ++n; });
  return n;
}

/// Copy of `topology` with leaves set from `values` in pre-order.
inline mtree::NodeSpec with_leaves(mtree::NodeSpec topology, const std::vector<mtree::Value>& values) {
  std::size_t i = 0;
  for_each_leaf(topology, [&](mtree::NodeSpec& leaf) { leaf.value = values.at(i++); });
  return topology;
}

inline mtree::NodeSpec with_numbers(mtree::NodeSpec topology, const std::vector<double>& xs) {
  std::vector<mtree::Value> vs;
  for (double x : xs) vs.push_back(mtree::Value::number(x));
  return with_leaves(std::move(topology), vs);
}

/// Random numeric leaves on a coarse grid (ties are common), with
/// `missing_rate` of them Missing.
inline std::vector<mtree::Value> random_leaves(Rng& rng, std::size_t n, double missing_rate = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<mtree::Value> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (u(rng) < missing_rate) {
      out.push_back(mtree::Value::missing());
    } else {
      out.push_back(mtree::Value::number(static_cast<double>(uniform(rng, 0, 40)) / 4.0));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// set families

/// Family implied by a topology: leaves are singletons, internal nodes the
/// union of their descendants.
inline oracle::NaiveFamily family_from(const mtree::NodeSpec& topology) {
  oracle::NaiveFamily f;
  int next_element = 0;
  std::function<int(const mtree::NodeSpec&, int)> walk = [&](const mtree::NodeSpec& s, int parent) {
    const int id = static_cast<int>(f.sets.size());
    f.sets.emplace_back();
    f.parent.push_back(parent);
    if (!s.children) {
      f.sets[id].insert(next_element);
      f.universe.insert(next_element++);
      return id;
    }
    for (const auto& c : *s.children) {
      const int k = walk(c, id);
      const auto members = f.sets[k];
      f.sets[id].insert(members.begin(), members.end());
    }
    return id;
  };
  walk(topology, -1);
  return f;
}

inline mtree::CandidateFamily to_candidate(const oracle::NaiveFamily& f) {
  mtree::CandidateFamily c;
  for (int e : f.universe) c.universe.push_back("e" + std::to_string(e));
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    mtree::CandidateFamily::Set s;
    s.name = "s" + std::to_string(i);
    if (f.parent[i] >= 0) s.parent = static_cast<std::size_t>(f.parent[i]);
    for (int e : f.sets[i]) {
      s.members.push_back(static_cast<std::size_t>(std::distance(f.universe.begin(), f.universe.find(e))));
    }
    c.sets.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    if (f.parent[i] >= 0) c.sets[static_cast<std::size_t>(f.parent[i])].children.push_back(i);
  }
  c.root = static_cast<std::size_t>(f.root);
  return c;
}

enum class Corruption { Overlap, IncompletePartition };

inline bool is_ancestor(const oracle::NaiveFamily& f, int a, int node) {
  for (int p = f.parent[node]; p >= 0; p = f.parent[p]) {
    if (p == a) return true;
  }
  return false;
}

/// Injects one defect. Overlap: an element is added to an internal set that
/// is neither an ancestor of it nor nested with its ancestors, which also
/// breaks a partition. IncompletePartition: an element is dropped from a
/// non-root internal set while its leaf stays below that set. Returns false
/// when the family has no room for the requested defect.
inline bool corrupt(oracle::NaiveFamily& f, Corruption kind, Rng& rng) {
  const int m = static_cast<int>(f.sets.size());
  std::vector<int> internal;
  std::vector<int> leaves;
  for (int i = 0; i < m; ++i) {
    const bool has_kids = std::any_of(f.parent.begin(), f.parent.end(), [&](int p) { return p == i; });
    (has_kids ? internal : leaves).push_back(i);
  }
  if (kind == Corruption::IncompletePartition) {
    std::vector<int> candidates;
    for (int i : internal) {
      if (i != f.root && f.sets[i].size() >= 2) candidates.push_back(i);
    }
    if (candidates.empty()) return false;
    const int s = candidates[uniform(rng, 0, candidates.size() - 1)];
    auto it = f.sets[s].begin();
    std::advance(it, static_cast<long>(uniform(rng, 0, f.sets[s].size() - 1)));
    f.sets[s].erase(it);
    return true;
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int leaf = leaves[uniform(rng, 0, leaves.size() - 1)];
    const int target = internal[uniform(rng, 0, internal.size() - 1)];
    const int e = *f.sets[leaf].begin();
    if (target == f.root || f.sets[target].contains(e) || is_ancestor(f, target, leaf)) continue;
    f.sets[target].insert(e);
    // a target nested under the leaf's parent stays nested; try another
    if (oracle::naive_laminar(f).contains(oracle::NaiveVerdict::Overlap)) return true;
    f.sets[target].erase(e);
  }
  return false;
}

}  // namespace gen
