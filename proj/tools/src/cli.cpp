#include "mtree_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "mtree/catalog.hpp"
#include "mtree/error.hpp"
#include "mtree/io.hpp"
#include "mtree/order.hpp"
#include "mtree/render.hpp"
#include "mtree/signals.hpp"

namespace mtree::cli {

namespace fs = std::filesystem;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// data_ref paths resolve against the referencing document's directory.
io::DataLoader loader_for(const std::string& path) {
  const fs::path base = path == "-" ? fs::path(".") : fs::path(path).parent_path();
  return [base](std::string_view ref) { return read_input((base / fs::path(ref)).string()); };
}

io::ParseResult load(const std::string& path, io::ParseMode mode) {
  io::ParseOptions options;
  options.mode = mode;
  options.loader = loader_for(path);
  return io::load_tree(io::parse_document(read_input(path), mode), options);
}

std::string display_name(const std::string& path) {
  return path == "-" ? std::string("<stdin>") : fs::path(path).stem().string();
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::SchemaError:
    case ErrorCode::TableError:
    case ErrorCode::UnknownNode:
    case ErrorCode::InvalidValue:
      return kInputError;
    default:
      return kValidationFailure;
  }
}

std::vector<double> thresholds_from(const io::TreeDocument& doc) {
  auto it = doc.metadata.find("color_thresholds");
  if (it == doc.metadata.end()) return {};
  const auto j = nlohmann::json::parse(it->second, nullptr, false);
  std::vector<double> out;
  if (!j.is_array()) return out;
  for (const auto& x : j) {
    if (!x.is_number()) return {};
    out.push_back(x.get<double>());
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string file;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const auto result = load(a.file, io::ParseMode::Permissive);
  if (result.report.valid()) {
    const auto& tree = *result.tree;
    std::size_t leaves = 0;
    for (const auto& e : tree.nodes()) leaves += e.node->is_leaf() ? 1 : 0;
    out << "valid: " << tree.size() << " nodes, " << leaves << " leaves, height " << tree.height() << "\n";
    return kOk;
  }
  out << "invalid: " << result.report.violations.size() << " violation(s)\n";
  for (const auto& v : result.report.violations) out << "  " << to_string(v.kind) << ": " << v.detail << "\n";
  return kValidationFailure;
}

struct EvalArgs {
  std::string file;
  std::optional<std::size_t> depth;
  std::string subtree;
  std::string format = "text";
  std::optional<int> precision;
  bool no_color = false;
  bool hide_functions = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto parsed = load(a.file, io::ParseMode::Strict);
  const auto& doc = parsed.document;
  const MeasurementTree& tree = *parsed.tree;
  std::optional<NodePath> sub;
  if (!a.subtree.empty()) sub = parse_path(a.subtree);

  if (a.format == "json") {
    if (a.depth) {
      err << "error: --depth applies to text and dot output only\n";
      return kInputError;
    }
    const auto selected = sub ? subtree(tree, *sub) : tree;
    io::WriteOptions options;
    options.metadata = doc.metadata;
    options.defaults = doc.defaults;
    out << io::write_tree_file(evaluate(selected), options);
    return kOk;
  }

  render::RenderOptions opts;
  opts.max_depth = a.depth;
  opts.subtree_path = sub;
  opts.precision = a.precision.value_or(doc.defaults.display_precision);
  opts.show_functions = !a.hide_functions;
  if (sub) (void)tree.index_of(*sub);  // UnknownNode before evaluation errors
  const auto evaluated = evaluate(tree);
  if (a.format == "dot") {
    if (!a.no_color) opts.color_thresholds = thresholds_from(doc);
    out << render::render_dot(evaluated, opts);
  } else {
    out << render::render_text(evaluated, opts);
  }
  return kOk;
}

CompareScope parse_scope(const std::string& s) {
  return s == "non-leaf" ? CompareScope::NonLeafOnly : CompareScope::AllNodes;
}

struct CompareArgs {
  std::string a;
  std::string b;
  std::string scope = "all";
  std::string format = "text";
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const auto ta = load(a.a, io::ParseMode::Strict);
  const auto tb = load(a.b, io::ParseMode::Strict);
  const auto pre = check_order_compatible(*ta.tree, *tb.tree);
  if (!pre.ok) {
    err << "precondition failed:\n";
    for (const auto& r : pre.reasons) err << "  " << r << "\n";
    return kValidationFailure;
  }
  const auto report = compare(evaluate(*ta.tree), evaluate(*tb.tree), parse_scope(a.scope));
  out << (a.format == "json" ? io::write_comparison(report) : render::render_comparison(report));
  return kOk;
}

struct OrderArgs {
  std::vector<std::string> files;
  std::string scope = "all";
  std::string format = "text";
};

int cmd_order(const OrderArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<EvaluatedTree> trees;
  std::vector<std::string> names;
  for (const auto& f : a.files) {
    trees.push_back(evaluate(*load(f, io::ParseMode::Strict).tree));
    names.push_back(display_name(f));
  }
  for (std::size_t i = 1; i < trees.size(); ++i) {
    const auto pre = check_order_compatible(trees[0].tree(), trees[i].tree());
    if (!pre.ok) {
      err << "precondition failed between " << names[0] << " and " << names[i] << ":\n";
      for (const auto& r : pre.reasons) err << "  " << r << "\n";
      return kValidationFailure;
    }
  }
  const auto result = poset(trees, parse_scope(a.scope));
  if (a.format == "dot") {
    out << render::render_poset_dot(result, names);
  } else if (a.format == "json") {
    out << io::write_poset(result, names);
  } else {
    out << render::render_poset_text(result, names);
  }
  return result.axioms.ok() ? kOk : kValidationFailure;
}

struct IngestArgs {
  std::string file;
  std::string instrument = "corix";
  std::string delimiter = ",";
  std::string out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  if (a.delimiter.size() != 1) {
    err << "error: --delimiter must be a single character\n";
    return kInputError;
  }
  const auto spec = catalog::corix_topology();
  const auto table = io::read_signal_table(read_input(a.file), a.delimiter[0]);
  const auto tree = io::build_instrument_tree(spec, io::ingest_signals(table, spec));
  io::WriteOptions options;
  options.metadata = {{"instrument", "\"" + spec.name + "\""},
                      {"source", nlohmann::json(display_name(a.file)).dump()},
                      {"responses", std::to_string(table.rows.size())},
                      {"color_thresholds", "[2,4,6,8]"}};
  const auto bytes = io::write_tree_file(tree, options);
  if (a.out.empty() || a.out == "-") {
    out << bytes;
    return kOk;
  }
  std::ofstream file(a.out, std::ios::binary);
  if (!(file << bytes)) throw InputError("cannot write '" + a.out + "'");
  out << "wrote " << a.out << " (" << table.rows.size() << " responses)\n";
  return kOk;
}

struct FixturesArgs {
  std::string out_dir = "fixtures";
};

int cmd_fixtures(const FixturesArgs& a, std::ostream& out) {
  fs::create_directories(a.out_dir);
  for (const auto& f : catalog::fixtures()) {
    io::WriteOptions options;
    options.metadata = f.metadata;
    const auto path = fs::path(a.out_dir) / (f.name + ".json");
    std::ofstream file(path, std::ios::binary);
    if (!(file << io::write_tree_file(f.tree, options))) throw InputError("cannot write '" + path.string() + "'");
    out << path.string() << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, evaluate, compare and render measurement trees", "mtree"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mtree 0.1.0");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check that a tree document describes a nested family of sets");
  validate->add_option("file", va.file, "tree document, or - for stdin")->required();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate a tree and render it");
  eval->add_option("file", ea.file, "tree document, or - for stdin")->required();
  eval->add_option("--depth", ea.depth, "show nodes at most this many levels below the view root");
  eval->add_option("--subtree", ea.subtree, "node path such as /FT or FT/annotation");
  eval->add_option("--format", ea.format)->check(CLI::IsMember({"text", "dot", "json"}))->capture_default_str();
  eval->add_option("--precision", ea.precision, "decimals (default: the document's display precision)")
      ->check(CLI::NonNegativeNumber);
  eval->add_flag("--no-color", ea.no_color, "omit fill colors from dot output");
  eval->add_flag("--hide-functions", ea.hide_functions, "omit function names");

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Node-wise dominance comparison of two trees");
  cmp->add_option("a", ca.a)->required();
  cmp->add_option("b", ca.b)->required();
  cmp->add_option("--scope", ca.scope)->check(CLI::IsMember({"all", "non-leaf"}))->capture_default_str();
  cmp->add_option("--format", ca.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  OrderArgs oa;
  auto* order = app.add_subcommand("order", "Partial order and covering pairs over several trees");
  order->add_option("files", oa.files)->required();
  order->add_option("--scope", oa.scope)->check(CLI::IsMember({"all", "non-leaf"}))->capture_default_str();
  order->add_option("--format", oa.format)->check(CLI::IsMember({"text", "dot", "json"}))->capture_default_str();

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Build an instrument tree from a table of individual responses");
  ingest->add_option("signals", ia.file, "delimited signal table, or - for stdin")->required();
  ingest->add_option("--instrument", ia.instrument)->check(CLI::IsMember({"corix"}))->capture_default_str();
  ingest->add_option("--delimiter", ia.delimiter)->capture_default_str();
  ingest->add_option("--out", ia.out, "output document (default: stdout)");

  FixturesArgs fa;
  auto* fixtures = app.add_subcommand("fixtures", "Write the bundled example documents");
  fixtures->add_option("--out-dir", fa.out_dir)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return cmd_validate(va, out);
    if (*eval) return cmd_eval(ea, out, err);
    if (*cmp) return cmd_compare(ca, out, err);
    if (*order) return cmd_order(oa, out, err);
    if (*ingest) return cmd_ingest(ia, out, err);
    if (*fixtures) return cmd_fixtures(fa, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace mtree::cli
