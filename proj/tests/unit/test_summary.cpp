#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mtree/error.hpp"
#include "mtree/summary.hpp"
#include "oracles.hpp"

using namespace mtree;

namespace {

std::vector<Value> nums(std::initializer_list<double> xs) {
  std::vector<Value> out;
  for (double x : xs) out.push_back(Value::number(x));
  return out;
}

double run(std::string name, const std::vector<Value>& kids, std::vector<double> weights = {}, Params params = {}) {
  FunctionBinding b{std::move(name), std::move(params)};
  return apply(Registry::builtin(), b, kids, weights).as_number();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mtree::Error");
  return ErrorCode::EvaluationFailed;
}

}  // namespace

TEST_CASE("values keep their invariants") {
  CHECK(code_of([] { (void)Value::number(std::numeric_limits<double>::quiet_NaN()); }) == ErrorCode::InvalidValue);
  CHECK(code_of([] { (void)Value::number(std::numeric_limits<double>::infinity()); }) == ErrorCode::InvalidValue);
  auto labels = std::make_shared<LabelSet>(LabelSet{{"low", "mid", "high"}, true});
  CHECK(Value::category("mid", labels).as_category().label == "mid");
  CHECK(code_of([&] { (void)Value::category("extreme", labels); }) == ErrorCode::InvalidValue);
  CHECK(Value::missing() == Value::missing());
  CHECK_FALSE(Value::missing() == Value::number(0));
  CHECK(Value() == Value::missing());
  CHECK(code_of([] { (void)Value::text("x").as_number(); }) == ErrorCode::FunctionDomainMismatch);
}

TEST_CASE("format_value rounds for display only") {
  CHECK(format_value(Value::number(3.5137), 2) == "3.51");
  CHECK(format_value(Value::number(2.0), 2) == "2.00");
  CHECK(format_value(Value::number(-0.001), 2) == "0.00");
  CHECK(format_value(Value::missing(), 2) == "--");
  CHECK(format_value(Value::missing(), 2, "n/a") == "n/a");
}

TEST_CASE("registry") {
  const auto& reg = Registry::builtin();
  CHECK(reg.frozen());
  for (auto name : {"mean", "median", "max", "min", "sum", "count", "weighted_mean"}) {
    const auto& e = reg.at(name);
    CHECK(e.spec.induces_ordering);
    CHECK(e.spec.output_kind == ValueKind::Number);
    CHECK(e.spec.input_kinds.contains(ValueKind::Number));
  }
  CHECK(reg.at("weighted_mean").spec.weight_aware);
  CHECK_FALSE(reg.at("mean").spec.weight_aware);
  CHECK(code_of([&] { (void)reg.at("geometric_mean"); }) == ErrorCode::UnknownFunction);

  SUBCASE("duplicate names are rejected") {
    auto r = Registry::with_builtins();
    CHECK_FALSE(r.frozen());
    CHECK(code_of([&] { r.add({"mean"}, [](const SummaryInput&) { return Value::number(0); }); }) ==
          ErrorCode::DuplicateName);
  }
  SUBCASE("ordering claims must match the output kind") {
    auto r = Registry::with_builtins();
    SummaryFunctionSpec concat{"concat", true, false, {ValueKind::Text}, ValueKind::Text, std::nullopt};
    auto impl = [](const SummaryInput& in) {
      std::string s;
      for (const auto& v : in.values) s += v.as_text();
      return Value::text(s);
    };
    CHECK(code_of([&] { r.add(concat, impl); }) == ErrorCode::InvalidMetadata);
    concat.induces_ordering = false;
    r.add(concat, impl);
    r.freeze();
    const FunctionBinding b{"concat", {}};
    CHECK(apply(r, b, std::vector<Value>{Value::text("a"), Value::text("b")}).as_text() == "ab");

    auto unordered = std::make_shared<LabelSet>(LabelSet{{"x", "y"}, false});
    auto r2 = Registry::with_builtins();
    SummaryFunctionSpec pick{"pick", true, false, {ValueKind::Number}, ValueKind::Category, *unordered};
    CHECK(code_of([&] { r2.add(pick, [](const SummaryInput&) { return Value::missing(); }); }) ==
          ErrorCode::InvalidMetadata);
    pick.output_labels->ordered = true;
    r2.add(pick, [](const SummaryInput&) { return Value::missing(); });
  }
  SUBCASE("frozen registries refuse additions and unfrozen ones refuse evaluation") {
    auto r = Registry::with_builtins();
    CHECK(code_of([&] { (void)apply(r, {"mean"}, nums({1})); }) == ErrorCode::RegistryNotFrozen);
    r.freeze();
    CHECK(code_of([&] { r.add({"extra"}, [](const SummaryInput&) { return Value::number(0); }); }) ==
          ErrorCode::RegistryFrozen);
  }
}

TEST_CASE("built-in arithmetic") {
  CHECK(run("mean", nums({1, 3})) == 2.0);
  CHECK(run("max", nums({3, 2})) == 3.0);
  CHECK(run("min", nums({3, 2})) == 2.0);
  CHECK(run("sum", nums({3, 2, 0.5})) == 5.5);
  CHECK(run("count", nums({3, 2, 0.5})) == 3.0);
  CHECK(run("median", nums({1, 2})) == 1.5);
  CHECK(run("median", nums({1.67, 3.33, 1.67, 1.67, 3.33})) == 1.67);
  CHECK(run("median", nums({5.00, 1.67, 5.00, 5.00, 0.0})) == 5.00);
  CHECK(run("weighted_mean", nums({1, 4}), {3, 1}) == doctest::Approx(1.75));

  // red-teaming annotation items of the first pilot model; one item absent
  auto kids = nums({2.11, 2.38, 3.87, 3.18, 3.64});
  kids.push_back(Value::missing());
  for (double x : {4.98, 3.26, 4.69}) kids.push_back(Value::number(x));
  const double m = run("mean", kids);
  CHECK(m == doctest::Approx(28.11 / 8.0));
  CHECK(format_value(Value::number(m), 2) == "3.51");
}

TEST_CASE("missing-data policies") {
  std::vector<Value> kids{Value::number(2), Value::missing(), Value::number(4)};
  FunctionBinding b{"mean", {}};
  CHECK(apply(Registry::builtin(), b, kids).as_number() == 3.0);
  b.missing_policy = MissingPolicy::AsZero;
  CHECK(apply(Registry::builtin(), b, kids).as_number() == 2.0);
  b.missing_policy = MissingPolicy::Propagate;
  CHECK(apply(Registry::builtin(), b, kids).is_missing());
  b.missing_policy = MissingPolicy::Skip;
  CHECK(apply(Registry::builtin(), b, std::vector<Value>{Value::missing(), Value::missing()}).is_missing());

  // skipped children take their weights with them
  FunctionBinding w{"weighted_mean", {}};
  CHECK(apply(Registry::builtin(), w, kids, std::vector<double>{1, 100, 3}).as_number() == 3.5);

  CHECK(parse_missing_policy("zero") == MissingPolicy::AsZero);
  CHECK(to_string(MissingPolicy::Propagate) == "propagate");
  CHECK_FALSE(parse_missing_policy("ignore"));
}

TEST_CASE("domain checks") {
  CHECK(code_of([] { (void)run("mean", {Value::text("a")}); }) == ErrorCode::FunctionDomainMismatch);
  CHECK(code_of([] { (void)run("mean", {}); }) == ErrorCode::EvaluationFailed);
  CHECK(code_of([] { (void)apply(Registry::builtin(), {"nope"}, nums({1})); }) == ErrorCode::UnknownFunction);
}

TEST_CASE("accuracy") {
  CHECK(run("accuracy", nums({1, 1, 0, 1})) == 0.75);
  CHECK(run("accuracy", nums({1, 1, 1, 1, 1, 1, 1})) == 1.0);
  CHECK(run("accuracy", nums({0, 0})) == 0.0);
  // (prediction, label) pairs with labels coded A=0, B=1, C=2
  CHECK(run("accuracy", {Value::vector({0, 0}), Value::vector({1, 2})}) == 0.5);
  auto labels = std::make_shared<LabelSet>(LabelSet{{"correct", "incorrect"}, false});
  CHECK(run("accuracy", {Value::category("correct", labels), Value::category("incorrect", labels)}) == 0.5);
  auto yn = std::make_shared<LabelSet>(LabelSet{{"yes", "no"}, false});
  Params p;
  p.emplace("positive_label", Value::text("yes"));
  CHECK(run("accuracy", {Value::category("yes", yn), Value::category("yes", yn), Value::category("no", yn)}, {}, p) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(code_of([] { (void)run("accuracy", nums({0.5})); }) == ErrorCode::FunctionDomainMismatch);
  CHECK(code_of([] { (void)run("accuracy", {Value::vector({1, 2, 3})}); }) == ErrorCode::FunctionDomainMismatch);
}

TEST_CASE("mean win rate") {
  auto mwr = [](std::vector<double> mine, std::vector<std::vector<double>> comps, bool higher = true) {
    Params p;
    std::vector<Value> lists;
    for (const auto& c : comps) lists.push_back(Value::vector(c));
    p.emplace("competitor_scores", lists);
    p.emplace("higher_is_better", higher);
    std::vector<Value> kids;
    for (double x : mine) kids.push_back(Value::number(x));
    return run("mean_win_rate", kids, {}, p);
  };
  CHECK(mwr({0.9}, {{0.5, 0.7}}) == 1.0);
  CHECK(mwr({0.5}, {{0.5, 0.5, 0.5}}) == 0.5);
  CHECK(mwr({0.9, 0.1}, {{0.5}, {0.5}}) == 0.5);
  CHECK(mwr({0.9, 0.1}, {{0.5}, {0.5}}, false) == 0.5);
  CHECK(mwr({0.1}, {{0.5, 0.7}}, false) == 1.0);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(0, 10);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(d(rng)) % 5;
    std::vector<double> mine;
    std::vector<std::vector<double>> comps;
    for (std::size_t i = 0; i < n; ++i) {
      mine.push_back(d(rng) / 10.0);
      comps.emplace_back();
      const int k = 1 + d(rng) % 4;
      for (int j = 0; j < k; ++j) comps.back().push_back(d(rng) / 10.0);
    }
    const double got = mwr(mine, comps);
    CHECK(got == doctest::Approx(oracle::naive_mwr(mine, comps)).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }

  CHECK(code_of([] { (void)run("mean_win_rate", nums({1})); }) == ErrorCode::MissingCompetitorData);
  Params short_list;
  short_list.emplace("competitor_scores", std::vector<Value>{Value::vector({1})});
  CHECK(code_of([&] { (void)run("mean_win_rate", nums({1, 2}), {}, short_list); }) == ErrorCode::MissingCompetitorData);

  // positions survive the skip policy: the second child keeps its own list
  Params p;
  p.emplace("competitor_scores", std::vector<Value>{Value::vector({0}), Value::vector({9})});
  CHECK(apply(Registry::builtin(), {"mean_win_rate", p}, std::vector<Value>{Value::missing(), Value::number(5)})
            .as_number() == 0.0);
}

TEST_CASE("properties of the monotone built-ins") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> len(1, 9);
  const std::vector<std::string> fns{"mean", "median", "max", "min", "sum", "weighted_mean"};
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> a(n), b(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::round(u(rng) * 4) / 4;
      b[i] = a[i] + std::round(u(rng)) / 2;  // b dominates a elementwise
      w[i] = 0.5 + std::round(u(rng)) / 4;
    }
    std::vector<Value> va, vb;
    for (std::size_t i = 0; i < n; ++i) {
      va.push_back(Value::number(a[i]));
      vb.push_back(Value::number(b[i]));
    }
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    for (const auto& f : fns) {
      const double ra = run(f, va, w);
      CHECK(ra <= run(f, vb, w));
      CHECK(ra == *oracle::naive_summary(f, a, w));
      if (f != "sum") {
        CHECK(ra >= *lo - 1e-12);
        CHECK(ra <= *hi + 1e-12);
      }
    }
    // permutation invariance (weights move with their values)
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Value> pa;
    std::vector<double> pw;
    for (auto i : perm) {
      pa.push_back(va[i]);
      pw.push_back(w[i]);
    }
    for (const auto& f : {"median", "max", "min"}) CHECK(run(f, pa) == run(f, va));
    CHECK(run("mean", pa) == doctest::Approx(run("mean", va)));
    CHECK(run("weighted_mean", pa, pw) == doctest::Approx(run("weighted_mean", va, w)));
    // singletons
    for (const auto& f : {"mean", "median", "max", "min", "weighted_mean"}) CHECK(run(f, {va[0]}) == a[0]);
  }
}
