#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "mtree/catalog.hpp"
#include "mtree/laminar.hpp"
#include "oracles.hpp"

using namespace mtree;

namespace {

std::set<ViolationKind> kinds(const LaminarReport& r) {
  std::set<ViolationKind> out;
  for (const auto& v : r.violations) out.insert(v.kind);
  return out;
}

std::set<ViolationKind> expected(const std::set<oracle::NaiveVerdict>& v) {
  std::set<ViolationKind> out;
  for (auto x : v) {
    switch (x) {
      case oracle::NaiveVerdict::Overlap: out.insert(ViolationKind::NonNestedOverlap); break;
      case oracle::NaiveVerdict::IncompletePartition: out.insert(ViolationKind::IncompletePartition); break;
      case oracle::NaiveVerdict::RootCoverage: out.insert(ViolationKind::RootCoverage); break;
      case oracle::NaiveVerdict::MissingSingleton: out.insert(ViolationKind::MissingSingleton); break;
      case oracle::NaiveVerdict::Valid: break;
    }
  }
  return out;
}

// root {0,1,2} over constructs; leaves are singletons
oracle::NaiveFamily three_leaves() {
  oracle::NaiveFamily f;
  f.universe = {0, 1, 2};
  f.sets = {{0, 1, 2}, {0, 1}, {2}, {0}, {1}, {2}};
  f.parent = {-1, 0, 0, 1, 1, 2};
  return f;
}

}  // namespace

TEST_CASE("hand-built families") {
  SUBCASE("valid") {
    auto f = three_leaves();
    CHECK(validate_laminar(gen::to_candidate(f)).valid());
    CHECK(oracle::naive_laminar(f).empty());
  }
  SUBCASE("a leaf shared by two sibling constructs") {
    auto f = three_leaves();
    f.sets[2] = {1, 2};  // second construct now also holds element 1
    const auto r = validate_laminar(gen::to_candidate(f));
    CHECK(r.has(ViolationKind::NonNestedOverlap));
    CHECK(kinds(r) == expected(oracle::naive_laminar(f)));
  }
  SUBCASE("root covering 3 of 4 elements") {
    oracle::NaiveFamily f;
    f.universe = {0, 1, 2, 3};
    f.sets = {{0, 1, 2}, {0}, {1}, {2}, {3}};
    f.parent = {-1, 0, 0, 0, -2};
    const auto c = gen::to_candidate(f);
    const auto r = validate_laminar(c);
    CHECK(r.has(ViolationKind::RootCoverage));
    CHECK_FALSE(r.has(ViolationKind::NonNestedOverlap));
  }
  SUBCASE("children that miss part of their parent") {
    auto f = three_leaves();
    f.sets[1] = {0, 1, 2};
    const auto r = validate_laminar(gen::to_candidate(f));
    CHECK(r.has(ViolationKind::IncompletePartition));
    CHECK(kinds(r) == expected(oracle::naive_laminar(f)));
  }
  SUBCASE("an element without a leaf") {
    auto f = three_leaves();
    f.universe.insert(3);
    f.sets[0].insert(3);
    const auto r = validate_laminar(gen::to_candidate(f));
    CHECK(r.has(ViolationKind::MissingSingleton));
    CHECK(kinds(r) == expected(oracle::naive_laminar(f)));
  }
  CHECK(to_string(ViolationKind::NonNestedOverlap) == "non-nested-overlap");
  CHECK(to_string(ViolationKind::RootCoverage) == "root-coverage");
}

TEST_CASE("trees always imply valid families") {
  CHECK(validate_laminar(catalog::two_construct_tree("mean")).valid());
  CHECK(validate_laminar(catalog::corix_level4_tree({})).valid());
  const auto f = family_of(catalog::two_construct_tree("mean"));
  CHECK(f.universe.size() == 4);
  CHECK(f.sets.size() == 7);
  CHECK(f.sets[f.root].members.size() == 4);
}

TEST_CASE("random families agree with the brute-force oracle") {
  gen::Rng rng(99);
  gen::TopologyOptions o;
  o.max_leaves = 20;
  int overlap = 0, partition = 0;
  for (int t = 0; t < 150; ++t) {
    auto fam = gen::family_from(gen::random_topology(rng, o));
    CHECK(validate_laminar(gen::to_candidate(fam)).valid());
    for (auto kind : {gen::Corruption::Overlap, gen::Corruption::IncompletePartition}) {
      auto bad = fam;
      if (!gen::corrupt(bad, kind, rng)) continue;
      const auto r = validate_laminar(gen::to_candidate(bad));
      const auto want = expected(oracle::naive_laminar(bad));
      CHECK_FALSE(r.valid());
      CHECK(kinds(r) == want);
      if (kind == gen::Corruption::Overlap) {
        CHECK(r.has(ViolationKind::NonNestedOverlap));
        ++overlap;
      } else {
        CHECK(r.has(ViolationKind::IncompletePartition));
        ++partition;
      }
    }
  }
  CHECK(overlap > 50);
  CHECK(partition > 50);
}

TEST_CASE("larger families agree with the oracle") {
  gen::Rng rng(7);
  gen::TopologyOptions o;
  o.min_leaves = 60;
  o.max_leaves = 150;
  o.max_depth = 7;
  for (int t = 0; t < 30; ++t) {
    auto fam = gen::family_from(gen::random_topology(rng, o));
    CHECK(validate_laminar(gen::to_candidate(fam)).valid());
    for (auto kind : {gen::Corruption::Overlap, gen::Corruption::IncompletePartition}) {
      auto bad = fam;
      if (!gen::corrupt(bad, kind, rng)) continue;
      CHECK(kinds(validate_laminar(gen::to_candidate(bad))) == expected(oracle::naive_laminar(bad)));
    }
  }
}
