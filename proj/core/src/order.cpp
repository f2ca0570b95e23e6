#include "mtree/order.hpp"

#include <map>
#include <random>

#include "mtree/error.hpp"

namespace mtree {

std::string_view to_string(NodeOutcome o) noexcept {
  switch (o) {
    case NodeOutcome::Less: return "less";
    case NodeOutcome::Equal: return "equal";
    case NodeOutcome::Greater: return "greater";
    case NodeOutcome::Incomparable: return "incomparable";
  }
  return "?";
}

std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::Equal: return "Equal";
    case Relation::LessEq: return "LessEq";
    case Relation::GreaterEq: return "GreaterEq";
    case Relation::Incomparable: return "Incomparable";
  }
  return "?";
}

std::string_view to_string(CompareScope s) noexcept {
  return s == CompareScope::AllNodes ? "all" : "non-leaf";
}

Relation converse(Relation r) noexcept {
  switch (r) {
    case Relation::LessEq: return Relation::GreaterEq;
    case Relation::GreaterEq: return Relation::LessEq;
    default: return r;
  }
}

// ---------------------------------------------------------------------------
// preconditions

CompatibilityReport check_same_shape(const MeasurementTree& a, const MeasurementTree& b) {
  CompatibilityReport rep;
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.reasons.push_back(std::move(why));
  };
  for (const auto& ea : a.nodes()) {
    const auto ib = b.find(ea.path);
    const std::string where = to_string(ea.path);
    if (!ib) {
      fail("topology mismatch: " + where + " exists only in the first tree");
      continue;
    }
    const auto& eb = b.entry(*ib);
    const Node& na = *ea.node;
    const Node& nb = *eb.node;
    if (na.is_leaf() != nb.is_leaf()) {
      fail("topology mismatch: " + where + " is a leaf in only one tree");
      continue;
    }
    if (na.is_leaf()) {
      if (ea.datum != eb.datum) fail("topology mismatch: leaf " + where + " observes different data elements");
      continue;
    }
    if (ea.children.size() != eb.children.size()) {
      fail("topology mismatch: " + where + " has a different number of children");
    } else {
      for (std::size_t c = 0; c < ea.children.size(); ++c) {
        if (a.entry(ea.children[c]).node->label != b.entry(eb.children[c]).node->label) {
          fail("topology mismatch: children of " + where + " are declared in a different order");
          break;
        }
      }
    }
    if (na.weights != nb.weights) fail("weight mismatch at " + where);
    if (!(*na.function == *nb.function)) {
      fail("function mismatch at " + where + ": '" + na.function->name + "' vs '" + nb.function->name + "'" +
           (na.function->name == nb.function->name ? " (parameters or missing policy differ)" : ""));
    }
  }
  for (const auto& eb : b.nodes()) {
    if (!a.find(eb.path)) fail("topology mismatch: " + to_string(eb.path) + " exists only in the second tree");
  }
  return rep;
}

CompatibilityReport check_order_compatible(const MeasurementTree& a, const MeasurementTree& b,
                                           const Registry& registry) {
  auto rep = check_same_shape(a, b);
  for (const auto* t : {&a, &b}) {
    for (const auto& e : t->nodes()) {
      if (!e.node->function) continue;
      const auto& name = e.node->function->name;
      const auto* entry = registry.find(name);
      if (!entry) {
        rep.ok = false;
        rep.reasons.push_back("unknown function '" + name + "' at " + to_string(e.path));
      } else if (!entry->spec.induces_ordering) {
        rep.ok = false;
        rep.reasons.push_back("non-ordering function '" + name + "' at " + to_string(e.path));
      }
    }
    if (&a == &b) break;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// comparison

NodeOutcome compare_values(const Value& a, const Value& b) {
  const auto ka = a.kind();
  const auto kb = b.kind();
  if (ka == ValueKind::Missing || kb == ValueKind::Missing) {
    return ka == kb ? NodeOutcome::Equal : NodeOutcome::Incomparable;
  }
  auto unorderable = [](ValueKind k) {
    return Error(ErrorCode::UnorderableValueKind, std::string(to_string(k)) + " values have no declared order");
  };
  if (ka == ValueKind::Text || ka == ValueKind::Vector) throw unorderable(ka);
  if (kb == ValueKind::Text || kb == ValueKind::Vector) throw unorderable(kb);
  if (ka != kb) return NodeOutcome::Incomparable;

  auto three_way = [](auto x, auto y) {
    return x < y ? NodeOutcome::Less : (y < x ? NodeOutcome::Greater : NodeOutcome::Equal);
  };
  if (ka == ValueKind::Number) return three_way(a.as_number(), b.as_number());

  const auto& ca = a.as_category();
  const auto& cb = b.as_category();
  if (!ca.labels->ordered || !cb.labels->ordered) throw unorderable(ValueKind::Category);
  if (!(*ca.labels == *cb.labels)) return NodeOutcome::Incomparable;
  return three_way(*ca.labels->rank(ca.label), *cb.labels->rank(cb.label));
}

Relation combine(std::span<const NodeOutcome> outcomes) noexcept {
  bool less = false;
  bool greater = false;
  for (auto o : outcomes) {
    if (o == NodeOutcome::Incomparable) return Relation::Incomparable;
    less |= o == NodeOutcome::Less;
    greater |= o == NodeOutcome::Greater;
  }
  if (less && greater) return Relation::Incomparable;
  if (less) return Relation::LessEq;
  if (greater) return Relation::GreaterEq;
  return Relation::Equal;
}

namespace {

bool in_scope(const NodeEntry& e, CompareScope scope) {
  return scope == CompareScope::AllNodes || !e.node->is_leaf();
}

}  // namespace

ComparisonReport compare(const EvaluatedTree& a, const EvaluatedTree& b, CompareScope scope,
                         const Registry& registry) {
  ComparisonReport rep;
  rep.precondition = check_order_compatible(a.tree(), b.tree(), registry);
  if (!rep.precondition.ok) {
    std::string msg = "trees are not order-compatible";
    for (const auto& r : rep.precondition.reasons) msg += "; " + r;
    throw Error(ErrorCode::IncompatibleTrees, msg);
  }
  std::vector<NodeOutcome> outcomes;
  for (std::size_t k = 0; k < a.tree().size(); ++k) {
    const auto& e = a.tree().entry(k);
    if (!in_scope(e, scope)) continue;
    const auto o = compare_values(a.value(k), b.value(k));
    rep.per_node.push_back({e.path, o});
    outcomes.push_back(o);
  }
  rep.overall = combine(outcomes);
  return rep;
}

Relation relate(const EvaluatedTree& a, const EvaluatedTree& b, CompareScope scope) {
  bool less = false;
  bool greater = false;
  const auto& t = a.tree();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!in_scope(t.entry(k), scope)) continue;
    switch (compare_values(a.value(k), b.value(k))) {
      case NodeOutcome::Incomparable: return Relation::Incomparable;
      case NodeOutcome::Less: less = true; break;
      case NodeOutcome::Greater: greater = true; break;
      case NodeOutcome::Equal: break;
    }
    if (less && greater) return Relation::Incomparable;
  }
  if (less) return Relation::LessEq;
  if (greater) return Relation::GreaterEq;
  return Relation::Equal;
}

EqualityReport trees_equal(const EvaluatedTree& a, const EvaluatedTree& b) {
  EqualityReport rep;
  const auto shape = check_same_shape(a.tree(), b.tree());
  if (!shape.ok) {
    rep.equal = false;
    rep.reasons = shape.reasons;
    return rep;
  }
  for (std::size_t k = 0; k < a.tree().size(); ++k) {
    const auto& e = a.tree().entry(k);
    if (e.node->is_leaf()) continue;
    const Value& va = a.value(k);
    const Value& vb = b.value(k);
    NodeOutcome o = NodeOutcome::Equal;
    if (!(va == vb)) {
      try {
        o = compare_values(va, vb);
      } catch (const Error&) {
        o = NodeOutcome::Incomparable;
      }
      if (o == NodeOutcome::Equal) o = NodeOutcome::Incomparable;  // e.g. equal ranks under distinct label sets
      rep.equal = false;
      rep.reasons.push_back("value mismatch at " + to_string(e.path));
    }
    rep.per_node.push_back({e.path, o});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// partial order over a set

namespace {

void require_compatible(std::span<const EvaluatedTree> trees, const Registry& registry) {
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto rep = check_order_compatible(trees[0].tree(), trees[i].tree(), registry);
    if (!rep.ok) {
      std::string msg = "tree #" + std::to_string(i) + " is not order-compatible with tree #0";
      for (const auto& r : rep.reasons) msg += "; " + r;
      throw Error(ErrorCode::IncompatibleTrees, msg);
    }
  }
}

std::vector<std::vector<Relation>> relation_matrix(std::span<const EvaluatedTree> trees, CompareScope scope) {
  const std::size_t n = trees.size();
  std::vector<std::vector<Relation>> rel(n, std::vector<Relation>(n, Relation::Equal));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rel[i][j] = relate(trees[i], trees[j], scope);
  }
  return rel;
}

bool le(Relation r) { return r == Relation::Equal || r == Relation::LessEq; }

}  // namespace

AxiomReport verify_poset_axioms(std::span<const EvaluatedTree> trees,
                                const std::vector<std::vector<Relation>>& relation, const AxiomOptions& options) {
  AxiomReport rep;
  const std::size_t n = trees.size();
  rep.trees = n;
  auto counterexample = [&](std::string s) {
    if (rep.counterexamples.size() < 100) rep.counterexamples.push_back(std::move(s));
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (relation[i][i] != Relation::Equal) counterexample("reflexivity fails for #" + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      ++rep.pairs_checked;
      if (relation[j][i] != converse(relation[i][j])) {
        counterexample("relation is not converse-consistent for (#" + std::to_string(i) + ", #" + std::to_string(j) +
                       ")");
      }
      if (le(relation[i][j]) && le(relation[j][i])) {
        ++rep.antisymmetry_premises;
        if (!trees_equal(trees[i], trees[j]).equal) {
          counterexample("antisymmetry fails for (#" + std::to_string(i) + ", #" + std::to_string(j) + ")");
        }
      }
    }
  }

  auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
    ++rep.triples_checked;
    if (le(relation[i][j]) && le(relation[j][k])) {
      ++rep.transitivity_premises;
      if (!le(relation[i][k])) {
        counterexample("transitivity fails for (#" + std::to_string(i) + ", #" + std::to_string(j) + ", #" +
                       std::to_string(k) + ")");
      }
    }
  };
  if (n == 0) return rep;
  if (options.sample_triples) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < *options.sample_triples; ++s) {
      const auto i = pick(rng);
      const auto j = pick(rng);
      const auto k = pick(rng);
      check_triple(i, j, k);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) check_triple(i, j, k);
      }
    }
  }
  return rep;
}

AxiomReport verify_poset_axioms(std::span<const EvaluatedTree> trees, const AxiomOptions& options,
                                const Registry& registry) {
  if (trees.empty()) return {};
  require_compatible(trees, registry);
  return verify_poset_axioms(trees, relation_matrix(trees, options.scope), options);
}

std::vector<std::pair<std::size_t, std::size_t>> hasse_edges(const std::vector<std::vector<bool>>& less) {
  const std::size_t n = less.size();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!less[i][j]) continue;
      bool covered = true;
      for (std::size_t k = 0; k < n && covered; ++k) {
        if (less[i][k] && less[k][j]) covered = false;
      }
      if (covered) edges.emplace_back(i, j);
    }
  }
  return edges;
}

PosetResult poset(std::span<const EvaluatedTree> trees, CompareScope scope, const Registry& registry) {
  PosetResult out;
  if (trees.empty()) return out;
  require_compatible(trees, registry);
  out.relation = relation_matrix(trees, scope);
  const std::size_t n = trees.size();
  std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) less[i][j] = out.relation[i][j] == Relation::LessEq;
  }
  out.hasse_edges = hasse_edges(less);
  AxiomOptions opts;
  opts.scope = scope;
  out.axioms = verify_poset_axioms(trees, out.relation, opts);
  return out;
}

}  // namespace mtree
