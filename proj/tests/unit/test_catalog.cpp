#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mtree/catalog.hpp"
#include "mtree/error.hpp"
#include "mtree/laminar.hpp"
#include "mtree/order.hpp"
#include "oracles.hpp"
#include "tolerance.hpp"

using namespace mtree;
using catalog::PilotModel;
using catalog::SignalSource;
using catalog::TestingLevel;

namespace {

constexpr PilotModel kModels[] = {PilotModel::A, PilotModel::B, PilotModel::C};

// Aggregates computed directly from the item table: mean or median per
// source over present items, mean over sources per level, max at the root.
std::map<NodePath, double> hand_aggregates(PilotModel m) {
  std::map<std::pair<TestingLevel, SignalSource>, std::vector<double>> by_source;
  for (const auto& [k, v] : catalog::pilot_item_scores(m)) by_source[{k.level, k.source}].push_back(v.as_number());

  auto mean = [](const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  auto median = [](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const auto n = xs.size();
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
  };

  std::map<NodePath, double> out;
  double root = -1;
  for (auto level : {TestingLevel::MT, TestingLevel::RT, TestingLevel::FT}) {
    const std::string l(catalog::to_string(level));
    std::vector<double> sources;
    for (auto src : {SignalSource::Annotation, SignalSource::Perception}) {
      auto it = by_source.find({level, src});
      if (it == by_source.end()) continue;
      const bool use_median = level == TestingLevel::FT && src == SignalSource::Perception;
      const double v = use_median ? median(it->second) : mean(it->second);
      out[{l, std::string(catalog::to_string(src))}] = v;
      sources.push_back(v);
    }
    out[{l}] = mean(sources);
    root = std::max(root, out[{l}]);
  }
  out[{}] = root;
  return out;
}

}  // namespace

TEST_CASE("pilot instrument topology") {
  const auto spec = catalog::corix_topology();
  CHECK(spec.root.function->name == "max");
  REQUIRE(spec.root.children.size() == 3);
  CHECK(spec.root.children[0].label == "MT");
  CHECK(spec.root.children[0].children.size() == 1);  // annotation only
  CHECK(spec.root.children[1].children.size() == 2);

  const auto plan = spec.function_plan();
  CHECK(plan.at({"FT", "perception"}).name == "median");
  CHECK(plan.at({"FT", "perception", "QQ 1.1"}).name == "median");
  CHECK(plan.at({"RT", "perception"}).name == "mean");
  CHECK(plan.at({"FT"}).name == "mean");
  CHECK(plan.at({}).name == "max");

  const auto items = spec.item_paths();
  CHECK(items.size() == 5 + 11 + 2 + 11 + 5);
  CHECK(spec.has_item({"FT", "annotation", "DD 5"}));
  CHECK_FALSE(spec.has_item({"MT", "annotation", "DD 5"}));
  CHECK(catalog::item_path({TestingLevel::RT, SignalSource::Perception, "QQ 2.4"}) ==
        NodePath{"RT", "perception", "QQ 2.4"});

  CHECK(catalog::parse_testing_level("FT") == TestingLevel::FT);
  CHECK_FALSE(catalog::parse_testing_level("ft"));
  CHECK(catalog::parse_signal_source("perception") == SignalSource::Perception);

  const auto tree = catalog::corix_level4_tree({});
  CHECK(validate_laminar(tree).valid());
  CHECK(check_order_compatible(tree, tree).ok);
  CHECK(tree.height() == 3);
  CHECK(tree.dataset_size() == items.size());
  CHECK(evaluate(tree).root_value().is_missing());

  try {
    (void)catalog::corix_from_level4({{{TestingLevel::MT, SignalSource::Perception, "QQ 1.1"}, Value::number(1)}});
    FAIL("expected UnknownItem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownItem);
  }
}

TEST_CASE("pilot aggregates") {
  int checked = 0;
  for (auto m : kModels) {
    CAPTURE(catalog::to_string(m));
    const auto e = catalog::corix_from_level4(catalog::pilot_item_scores(m));
    const auto hand = hand_aggregates(m);
    const auto published = catalog::pilot_reported_aggregates(m);
    CHECK(published.size() == 9);
    for (const auto& [path, want] : published) {
      CAPTURE(to_string(path));
      const double got = node_value(e, path).as_number();
      CHECK(got == doctest::Approx(hand.at(path)).epsilon(1e-12));
      CHECK(tol::within_hundredth(got, want));
      ++checked;
    }
  }
  CHECK(checked == 27);

  const auto b = catalog::corix_from_level4(catalog::pilot_item_scores(PilotModel::B));
  CHECK(tol::within_hundredth(node_value(b, {"FT"}).as_number(), 4.29));
  CHECK(tol::within_hundredth(b.root_value().as_number(), 4.29));
  const auto c = catalog::corix_from_level4(catalog::pilot_item_scores(PilotModel::C));
  CHECK(node_value(c, {"FT", "perception"}).as_number() == 2.03);

  // a blank cell is Missing and skipped, never read as zero
  const auto a = catalog::corix_from_level4(catalog::pilot_item_scores(PilotModel::A));
  CHECK(node_value(a, {"RT", "annotation", "DD 1"}).is_missing());
  CHECK(node_value(a, {"RT", "annotation"}).as_number() == doctest::Approx(28.11 / 8));
  CHECK_FALSE(tol::within_hundredth(28.11 / 9, 3.52));

  CHECK(catalog::pilot_item_scores(PilotModel::B).size() == catalog::pilot_item_scores(PilotModel::A).size() + 1);
}

TEST_CASE("mean win rate example") {
  const auto spec = catalog::helm_topology();
  REQUIRE(spec.root.children.size() == 4);
  CHECK(spec.root.children[0].label == "question answering");
  CHECK(spec.root.children[0].children.size() == 9);
  CHECK(spec.root.children[3].children.at(0).label == "CivilComments (EM)");

  const auto tree = catalog::helm_example_tree();
  const auto e = evaluate(tree);
  const auto& root = tree.root();

  auto competitors = [](const Node& n) {
    std::vector<std::vector<double>> out;
    for (const auto& v : std::get<std::vector<Value>>(n.function->params.at("competitor_scores"))) {
      out.push_back(v.as_vector());
    }
    return out;
  };
  std::vector<double> group_values;
  for (std::size_t g = 0; g < root.children.size(); ++g) {
    const auto& group = root.children[g];
    std::vector<double> mine;
    for (const auto& leaf : group.children) mine.push_back(leaf.observation.as_number());
    const double want = oracle::naive_mwr(mine, competitors(group));
    CHECK(node_value(e, {group.label}).as_number() == doctest::Approx(want).epsilon(1e-12));
    group_values.push_back(want);
  }
  const double root_value = e.root_value().as_number();
  CHECK(root_value == doctest::Approx(oracle::naive_mwr(group_values, competitors(root))).epsilon(1e-12));
  CHECK(root_value >= 0.0);
  CHECK(root_value <= 1.0);
}

TEST_CASE("small examples") {
  CHECK(evaluate(catalog::two_construct_tree("mean")).root_value().as_number() == 2.0);
  CHECK(evaluate(catalog::two_construct_tree("max")).root_value().as_number() == 3.0);
  CHECK(evaluate(catalog::accuracy_tree({1, 0, 1, 1})).root_value().as_number() == 0.75);
  CHECK(evaluate(catalog::flat_tree("sum", {1, 2, 3})).root_value().as_number() == 6.0);

  const auto fx = catalog::fixtures();
  CHECK(fx.size() == 12);
  std::set<std::string> names;
  for (const auto& f : fx) {
    names.insert(f.name);
    CHECK(validate_laminar(f.tree).valid());
  }
  CHECK(names.size() == fx.size());
  CHECK(names.contains("corix_model_a"));
  CHECK(names.contains("helm_topology"));
}
