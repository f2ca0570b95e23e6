#include "mtree/io.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "mtree/error.hpp"

namespace mtree::io {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::SchemaError, where + ": " + why);
}

// ---------------------------------------------------------------------------
// values

Value value_from_json(const json& j, const std::string& where) {
  if (j.is_null()) return Value::missing();
  if (j.is_number()) {
    try {
      return Value::number(j.get<double>());
    } catch (const Error& e) {
      schema_error(where, e.detail());
    }
  }
  if (j.is_string()) return Value::text(j.get<std::string>());
  if (j.is_array()) {
    std::vector<double> xs;
    for (const auto& x : j) {
      if (!x.is_number()) schema_error(where, "vector values must contain only numbers");
      xs.push_back(x.get<double>());
    }
    return Value::vector(std::move(xs));
  }
  if (j.is_object()) {
    if (!j.contains("category") || !j["category"].is_string() || !j.contains("labels") || !j["labels"].is_array()) {
      schema_error(where, "category values need string 'category' and array 'labels'");
    }
    for (const auto& [k, _] : j.items()) {
      if (k != "category" && k != "labels" && k != "ordered") schema_error(where, "unknown category key '" + k + "'");
    }
    LabelSet set;
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) schema_error(where, "category labels must be strings");
      set.labels.push_back(l.get<std::string>());
    }
    if (j.contains("ordered")) {
      if (!j["ordered"].is_boolean()) schema_error(where, "'ordered' must be a boolean");
      set.ordered = j["ordered"].get<bool>();
    }
    try {
      return Value::category(j["category"].get<std::string>(), std::make_shared<const LabelSet>(std::move(set)));
    } catch (const Error& e) {
      schema_error(where, e.detail());
    }
  }
  schema_error(where, "unsupported value encoding");
}

json value_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Missing: return nullptr;
    case ValueKind::Number: return v.as_number();
    case ValueKind::Text: return v.as_text();
    case ValueKind::Vector: return v.as_vector();
    case ValueKind::Category: {
      const auto& c = v.as_category();
      json out = json::object();
      out["category"] = c.label;
      out["labels"] = c.labels->labels;
      out["ordered"] = c.labels->ordered;
      return out;
    }
  }
  return nullptr;
}

// A JSON array of numbers is a single Vector value; any other array is a list
// of values.
ParamValue param_from_json(const json& j, const std::string& where) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_array() && !std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_number(); })) {
    std::vector<Value> list;
    for (std::size_t i = 0; i < j.size(); ++i) list.push_back(value_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return list;
  }
  return value_from_json(j, where);
}

json param_json(const ParamValue& p) {
  if (auto b = std::get_if<bool>(&p)) return *b;
  if (auto v = std::get_if<Value>(&p)) return value_json(*v);
  json arr = json::array();
  for (const auto& v : std::get<std::vector<Value>>(p)) arr.push_back(value_json(v));
  return arr;
}

// ---------------------------------------------------------------------------
// records

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) schema_error(where, "expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

NodeRecord record_from_json(const json& j, const std::string& where, ParseMode mode) {
  if (!j.is_object()) schema_error(where, "node record must be an object");
  NodeRecord r;
  if (!j.contains("label") || !j["label"].is_string()) schema_error(where, "node record needs a string 'label'");
  r.label = j["label"].get<std::string>();
  const std::string here = where + "/" + r.label;

  for (const auto& [key, val] : j.items()) {
    if (key == "label") continue;
    if (key == "description") {
      if (!val.is_string()) schema_error(here, "'description' must be a string");
      r.description = val.get<std::string>();
    } else if (key == "children") {
      if (!val.is_array()) schema_error(here, "'children' must be an array");
      r.children.emplace();
      for (const auto& c : val) r.children->push_back(record_from_json(c, here, mode));
    } else if (key == "function") {
      if (!val.is_object() || !val.contains("name") || !val["name"].is_string()) {
        schema_error(here, "'function' must be an object with a string 'name'");
      }
      FunctionBinding f;
      f.name = val["name"].get<std::string>();
      for (const auto& [fk, fv] : val.items()) {
        if (fk == "name") continue;
        if (fk == "params") {
          if (!fv.is_object()) schema_error(here, "'params' must be an object");
          for (const auto& [pk, pv] : fv.items()) f.params.emplace(pk, param_from_json(pv, here + ":" + pk));
        } else if (fk == "missing_policy") {
          auto p = fv.is_string() ? parse_missing_policy(fv.get<std::string>()) : std::nullopt;
          if (!p) schema_error(here, "missing_policy must be one of skip, zero, propagate");
          f.missing_policy = *p;
          r.explicit_missing_policy = true;
        } else {
          schema_error(here, "unknown function key '" + fk + "'");
        }
      }
      r.function = std::move(f);
    } else if (key == "weight") {
      if (!val.is_number()) schema_error(here, "'weight' must be a number");
      r.weight = val.get<double>();
    } else if (key == "value") {
      r.value = value_from_json(val, here);
    } else if (key == "datum") {
      if (!val.is_string()) schema_error(here, "'datum' must be a string");
      r.datum = val.get<std::string>();
    } else if (key == "members") {
      r.members = string_list(val, here + ":members");
    } else if (key == "computed") {
      r.computed = value_from_json(val, here);
    } else if (mode == ParseMode::Permissive) {
      r.extra.emplace(key, val.dump());
    } else {
      schema_error(here, "unknown field '" + key + "'");
    }
  }
  if (r.children && r.value) schema_error(here, "a node cannot have both 'children' and 'value'");
  if (r.children && !r.function) schema_error(here, "internal node needs a 'function'");
  if (!r.children && r.function) schema_error(here, "leaf node cannot have a 'function'");
  if (!r.children && r.members) schema_error(here, "leaf node cannot declare 'members'");
  return r;
}

json record_json(const NodeRecord& r, const DocumentDefaults& defaults) {
  json j = json::object();
  j["label"] = r.label;
  if (!r.description.empty()) j["description"] = r.description;
  if (r.children) {
    json kids = json::array();
    for (const auto& c : *r.children) kids.push_back(record_json(c, defaults));
    j["children"] = std::move(kids);
  }
  if (r.function) {
    json f = json::object();
    f["name"] = r.function->name;
    if (!r.function->params.empty()) {
      json p = json::object();
      for (const auto& [k, v] : r.function->params) p[k] = param_json(v);
      f["params"] = std::move(p);
    }
    if (r.explicit_missing_policy || r.function->missing_policy != defaults.missing_policy) {
      f["missing_policy"] = std::string(to_string(r.function->missing_policy));
    }
    j["function"] = std::move(f);
  }
  if (r.weight && *r.weight != 1.0) j["weight"] = *r.weight;
  if (r.value) j["value"] = value_json(*r.value);
  if (!r.datum.empty()) j["datum"] = r.datum;
  if (r.members) j["members"] = *r.members;
  if (r.computed) j["computed"] = value_json(*r.computed);
  for (const auto& [k, raw] : r.extra) j[k] = json::parse(raw);
  return j;
}

}  // namespace

std::string value_to_json(const Value& v) { return value_json(v).dump(); }

std::string write_comparison(const ComparisonReport& report) {
  json j;
  j["overall"] = std::string(to_string(report.overall));
  j["precondition"] = {{"ok", report.precondition.ok}, {"reasons", report.precondition.reasons}};
  json nodes = json::array();
  for (const auto& n : report.per_node) {
    nodes.push_back({{"path", to_string(n.path)}, {"outcome", std::string(to_string(n.outcome))}});
  }
  j["per_node"] = std::move(nodes);
  return j.dump(2) + "\n";
}

std::string write_poset(const PosetResult& result, const std::vector<std::string>& names) {
  json j;
  j["trees"] = names;
  json rel = json::array();
  for (const auto& row : result.relation) {
    json r = json::array();
    for (auto x : row) r.push_back(std::string(to_string(x)));
    rel.push_back(std::move(r));
  }
  j["relation"] = std::move(rel);
  json edges = json::array();
  for (const auto& [lo, hi] : result.hasse_edges) edges.push_back({{"lower", names.at(lo)}, {"upper", names.at(hi)}});
  j["hasse_edges"] = std::move(edges);
  const auto& a = result.axioms;
  j["axioms"] = {{"ok", a.ok()},
                 {"trees", a.trees},
                 {"pairs_checked", a.pairs_checked},
                 {"triples_checked", a.triples_checked},
                 {"counterexamples", a.counterexamples}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// documents

TreeDocument parse_document(std::string_view bytes, ParseMode mode) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) schema_error("document", "top level must be an object");

  TreeDocument doc;
  bool have_version = false;
  bool have_tree = false;
  for (const auto& [key, val] : j.items()) {
    if (key == "format_version") {
      if (!val.is_string()) schema_error("format_version", "must be a string");
      doc.format_version = val.get<std::string>();
      if (doc.format_version != kFormatVersion) {
        schema_error("format_version", "unsupported version '" + doc.format_version + "'");
      }
      have_version = true;
    } else if (key == "tree") {
      doc.root = record_from_json(val, "", mode);
      have_tree = true;
    } else if (key == "defaults") {
      if (!val.is_object()) schema_error("defaults", "must be an object");
      for (const auto& [dk, dv] : val.items()) {
        if (dk == "missing_policy") {
          auto p = dv.is_string() ? parse_missing_policy(dv.get<std::string>()) : std::nullopt;
          if (!p) schema_error("defaults", "missing_policy must be one of skip, zero, propagate");
          doc.defaults.missing_policy = *p;
        } else if (dk == "display_precision") {
          if (!dv.is_number_integer() || dv.get<int>() < 0 || dv.get<int>() > 17) {
            schema_error("defaults", "display_precision must be an integer in [0, 17]");
          }
          doc.defaults.display_precision = dv.get<int>();
        } else if (mode == ParseMode::Strict) {
          schema_error("defaults", "unknown field '" + dk + "'");
        }
      }
    } else if (key == "metadata") {
      if (!val.is_object()) schema_error("metadata", "must be an object");
      for (const auto& [mk, mv] : val.items()) doc.metadata.emplace(mk, mv.dump());
    } else if (key == "data_ref") {
      if (!val.is_string()) schema_error("data_ref", "must be a string");
      doc.data_ref = val.get<std::string>();
    } else if (key == "dataset") {
      doc.dataset = string_list(val, "dataset");
    } else if (mode == ParseMode::Permissive) {
      doc.extra.emplace(key, val.dump());
    } else {
      schema_error("document", "unknown field '" + key + "'");
    }
  }
  if (!have_version) schema_error("document", "missing 'format_version'");
  if (!have_tree) schema_error("document", "missing 'tree'");

  // Records inherit the document's default policy unless they name one.
  std::vector<NodeRecord*> stack{&doc.root};
  while (!stack.empty()) {
    NodeRecord* r = stack.back();
    stack.pop_back();
    if (r->function && !r->explicit_missing_policy) r->function->missing_policy = doc.defaults.missing_policy;
    if (r->children) {
      for (auto& c : *r->children) stack.push_back(&c);
    }
  }
  return doc;
}

std::string write_document(const TreeDocument& doc) {
  json j = json::object();
  j["format_version"] = doc.format_version;
  j["tree"] = record_json(doc.root, doc.defaults);
  j["defaults"] = {{"missing_policy", std::string(to_string(doc.defaults.missing_policy))},
                   {"display_precision", doc.defaults.display_precision}};
  if (!doc.metadata.empty()) {
    json m = json::object();
    for (const auto& [k, raw] : doc.metadata) m[k] = json::parse(raw);
    j["metadata"] = std::move(m);
  }
  if (doc.data_ref) j["data_ref"] = *doc.data_ref;
  if (doc.dataset) j["dataset"] = *doc.dataset;
  for (const auto& [k, raw] : doc.extra) j[k] = json::parse(raw);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// document -> tree

namespace {

struct LoadState {
  std::map<std::string, Value> external;  // path string -> value
  CandidateFamily family;
  std::map<std::string, std::size_t> element;
  std::set<std::string> outside_dataset;
  bool closed_dataset = false;
};

std::size_t element_index(LoadState& st, const std::string& name) {
  auto it = st.element.find(name);
  if (it != st.element.end()) return it->second;
  if (st.closed_dataset) st.outside_dataset.insert(name);
  const std::size_t idx = st.family.universe.size();
  st.family.universe.push_back(name);
  st.element.emplace(name, idx);
  return idx;
}

std::size_t add_record(const NodeRecord& r, std::optional<std::size_t> parent, NodePath& path, LoadState& st) {
  const std::size_t me = st.family.sets.size();
  st.family.sets.push_back({to_string(path), parent, {}, {}});
  if (!r.children) {
    const std::string datum = r.datum.empty() ? to_string(path) : r.datum;
    const auto e = element_index(st, datum);
    st.family.sets[me].members.push_back(e);
    return me;
  }
  std::vector<std::size_t> kids;
  for (const auto& c : *r.children) {
    path.push_back(c.label);
    kids.push_back(add_record(c, me, path, st));
    path.pop_back();
  }
  auto& self = st.family.sets[me];
  self.children = kids;
  if (r.members) {
    for (const auto& m : *r.members) st.family.sets[me].members.push_back(element_index(st, m));
  } else {
    std::set<std::size_t> un;
    for (auto k : kids) un.insert(st.family.sets[k].members.begin(), st.family.sets[k].members.end());
    st.family.sets[me].members.assign(un.begin(), un.end());
  }
  return me;
}

Node node_from_record(const NodeRecord& r, NodePath& path, const LoadState& st) {
  Node n;
  n.label = r.label;
  n.description = r.description;
  n.datum = r.datum;
  if (!r.children) {
    if (r.value) {
      n.observation = *r.value;
    } else if (auto it = st.external.find(to_string(path)); it != st.external.end()) {
      n.observation = it->second;
    } else {
      throw Error(ErrorCode::MissingLeafBinding, "leaf " + to_string(path) + " has no value");
    }
    return n;
  }
  if (r.children->empty()) throw Error(ErrorCode::EmptyInternalNode, "internal node " + to_string(path) + " has no children");
  n.function = r.function;
  for (const auto& c : *r.children) {
    if (c.weight && !(*c.weight > 0.0)) {
      throw Error(ErrorCode::NonPositiveWeight, "edge to '" + c.label + "' under " + to_string(path) + " is not positive");
    }
    path.push_back(c.label);
    n.children.push_back(node_from_record(c, path, st));
    path.pop_back();
    n.weights.push_back(c.weight.value_or(1.0));
  }
  return n;
}

void check_functions(const NodeRecord& r, const Registry& registry) {
  if (r.function) (void)registry.at(r.function->name);
  if (r.children) {
    for (const auto& c : *r.children) check_functions(c, registry);
  }
}

}  // namespace

ParseResult load_tree(const TreeDocument& doc, const ParseOptions& options) {
  LoadState st;
  if (doc.data_ref) {
    if (!options.loader) throw Error(ErrorCode::SchemaError, "document references external data but no loader was given");
    const std::string raw = options.loader(*doc.data_ref);
    json data;
    try {
      data = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SyntaxError, "invalid JSON in " + *doc.data_ref + " at byte " + std::to_string(e.byte));
    }
    if (!data.is_object()) schema_error(*doc.data_ref, "leaf data must be an object of path -> value");
    for (const auto& [k, v] : data.items()) st.external.emplace(to_string(parse_path(k)), value_from_json(v, k));
  }
  if (doc.dataset) {
    for (const auto& d : *doc.dataset) element_index(st, d);
    st.closed_dataset = true;
  }

  ParseResult out;
  out.document = doc;
  NodePath path;
  add_record(doc.root, std::nullopt, path, st);
  out.family = std::move(st.family);
  out.report = validate_laminar(out.family);
  for (const auto& name : st.outside_dataset) {
    out.report.violations.push_back(
        {ViolationKind::RootCoverage, "element '" + name + "' is not part of the declared dataset"});
  }

  check_functions(doc.root, options.registry ? *options.registry : Registry::builtin());

  if (!out.report.valid()) {
    if (options.mode == ParseMode::Strict) {
      std::string msg = "document is not a hierarchical clustering:";
      for (const auto& v : out.report.violations) msg += " [" + std::string(to_string(v.kind)) + "] " + v.detail + ";";
      throw Error(ErrorCode::ValidationFailed, msg);
    }
    return out;
  }
  path.clear();
  out.tree = MeasurementTree::from_root(node_from_record(doc.root, path, st));
  return out;
}

ParseResult parse_tree_file(std::string_view bytes, const ParseOptions& options) {
  return load_tree(parse_document(bytes, options.mode), options);
}

// ---------------------------------------------------------------------------
// tree -> document

namespace {

NodeRecord record_from_node(const MeasurementTree& tree, std::size_t idx, const std::vector<Value>* computed,
                            const DocumentDefaults& defaults) {
  const auto& e = tree.entry(idx);
  const Node& n = *e.node;
  NodeRecord r;
  r.label = n.label;
  r.description = n.description;
  r.datum = n.datum;
  if (n.is_leaf()) {
    r.value = n.observation;
    return r;
  }
  r.function = n.function;
  r.explicit_missing_policy = n.function->missing_policy != defaults.missing_policy;
  r.children.emplace();
  for (std::size_t c = 0; c < e.children.size(); ++c) {
    auto child = record_from_node(tree, e.children[c], computed, defaults);
    if (n.weights[c] != 1.0) child.weight = n.weights[c];
    r.children->push_back(std::move(child));
  }
  if (computed) r.computed = (*computed)[idx];
  return r;
}

TreeDocument make_document(const MeasurementTree& tree, const std::vector<Value>* computed,
                           const WriteOptions& options) {
  TreeDocument doc;
  doc.defaults = options.defaults;
  doc.metadata = options.metadata;
  doc.root = record_from_node(tree, 0, computed, options.defaults);
  return doc;
}

}  // namespace

TreeDocument to_document(const MeasurementTree& tree, const WriteOptions& options) {
  return make_document(tree, nullptr, options);
}

TreeDocument to_document(const EvaluatedTree& evaluated, const WriteOptions& options) {
  const std::vector<Value> values(evaluated.values().begin(), evaluated.values().end());
  return make_document(evaluated.tree(), &values, options);
}

std::string write_tree_file(const MeasurementTree& tree, const WriteOptions& options) {
  return write_document(to_document(tree, options));
}

std::string write_tree_file(const EvaluatedTree& evaluated, const WriteOptions& options) {
  return write_document(to_document(evaluated, options));
}

}  // namespace mtree::io
