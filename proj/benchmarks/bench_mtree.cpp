#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "mtree/catalog.hpp"
#include "mtree/io.hpp"
#include "mtree/laminar.hpp"
#include "mtree/order.hpp"
#include "mtree/render.hpp"

using namespace mtree;

namespace {

// Balanced tree with `fanout` children per node down to `depth`, mean everywhere.
NodeSpec balanced(std::size_t depth, std::size_t fanout, std::size_t& next) {
  if (depth == 0) return NodeSpec::leaf("x" + std::to_string(next), Value::number(static_cast<double>(next++ % 11)));
  std::vector<NodeSpec> kids;
  for (std::size_t i = 0; i < fanout; ++i) {
    auto k = balanced(depth - 1, fanout, next);
    if (k.children) k.label = "c" + std::to_string(next++);
    kids.push_back(std::move(k));
  }
  return NodeSpec::internal("n", {"mean"}, std::move(kids));
}

MeasurementTree balanced_tree(std::size_t depth, std::size_t fanout) {
  std::size_t next = 0;
  auto root = balanced(depth, fanout, next);
  root.label = "root";
  return build_tree(root);
}

void BM_Evaluate(benchmark::State& state) {
  const auto tree = balanced_tree(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(tree));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tree.size()));
}
BENCHMARK(BM_Evaluate)->Arg(3)->Arg(5)->Arg(7);

void BM_Compare(benchmark::State& state) {
  const auto tree = balanced_tree(static_cast<std::size_t>(state.range(0)), 4);
  const auto a = evaluate(tree);
  const auto b = evaluate(tree);
  for (auto _ : state) benchmark::DoNotOptimize(compare(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tree.size()));
}
BENCHMARK(BM_Compare)->Arg(3)->Arg(5)->Arg(7);

void BM_Poset(benchmark::State& state) {
  gen::Rng rng(1);
  const auto topo = gen::random_topology(rng);
  const std::size_t n = gen::count_leaves(topo);
  std::vector<EvaluatedTree> trees;
  for (std::int64_t t = 0; t < state.range(0); ++t) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = static_cast<double>(gen::uniform(rng, 0, 8));
    trees.push_back(evaluate(build_tree(gen::with_numbers(topo, xs))));
  }
  for (auto _ : state) benchmark::DoNotOptimize(poset(trees));
}
BENCHMARK(BM_Poset)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ValidateLaminar(benchmark::State& state) {
  const auto tree = balanced_tree(static_cast<std::size_t>(state.range(0)), 4);
  const auto family = family_of(tree);
  for (auto _ : state) benchmark::DoNotOptimize(validate_laminar(family));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(family.sets.size()));
}
BENCHMARK(BM_ValidateLaminar)->Arg(3)->Arg(5)->Arg(6);

void BM_ParseWrite(benchmark::State& state) {
  const auto text = io::write_tree_file(catalog::corix_level4_tree(catalog::pilot_item_scores(catalog::PilotModel::A)));
  for (auto _ : state) {
    const auto r = io::parse_tree_file(text);
    benchmark::DoNotOptimize(io::write_document(r.document));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseWrite);

void BM_RenderDot(benchmark::State& state) {
  const auto e = evaluate(balanced_tree(5, 4));
  for (auto _ : state) benchmark::DoNotOptimize(render::render_dot(e));
}
BENCHMARK(BM_RenderDot);

}  // namespace

BENCHMARK_MAIN();
