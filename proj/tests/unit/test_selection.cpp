#include <random>

#include "csfs/error.hpp"
#include "csfs/selection.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace csfs;
using test::names_of;
using test::Strings;

TEST_CASE("relevant_features on the global example ranking") {
  const auto g = test::example_global();
  CHECK(names_of(relevant_features(g, {0.5}), g.features) == Strings{"f2", "f5"});
  CHECK(names_of(relevant_features(g, {0.75}), g.features) == Strings{"f2"});
  CHECK(relevant_features(g, {0.8}).empty());
}

TEST_CASE("relevant_features on the class-specific example ranking") {
  const auto r = test::example_class_ranking();
  const auto sets = relevant_features(r, {0.5});
  REQUIRE(sets.size() == 4);
  CHECK(names_of(sets[0], r.features) == Strings{"f1", "f2", "f5", "f9"});
  CHECK(names_of(sets[1], r.features) == Strings{"f2", "f5", "f7"});
  CHECK(names_of(sets[2], r.features) == Strings{"f2", "f5"});  // f4 sits exactly on 0.5
  CHECK(names_of(sets[3], r.features) == Strings{"f2", "f5"});
}

TEST_CASE("threshold validation") {
  CHECK_NOTHROW(validate(RelevanceThreshold{0.0}));
  CHECK_THROWS_AS(validate(RelevanceThreshold{1.0}), UsageError);
  CHECK_THROWS_AS(validate(RelevanceThreshold{-0.1}), UsageError);
  CHECK_FALSE(RelevanceThreshold{0.5}.relevant(0.5));
  CHECK(RelevanceThreshold{0.5}.relevant(0.5000000001));
}

TEST_CASE("aggregate_pairwise on the example table") {
  const auto table = test::example_pairwise();
  const auto expected = test::example_class_ranking();
  const auto mean = aggregate_pairwise(table);
  CHECK(mean.strategy == Strategy::kOvE);
  REQUIRE(mean.scores.size() == 4);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t j = 0; j < 9; ++j)
      CHECK(mean.scores[p][j] == doctest::Approx(expected.scores[p][j]).epsilon(1e-12));

  const auto lo = aggregate_pairwise(table, {AggregateKind::kMin});
  const auto hi = aggregate_pairwise(table, {AggregateKind::kMax});
  CHECK(lo.scores[0][0] == 0.4);  // A/f1 over AB, AC, AD
  CHECK(hi.scores[0][0] == 0.9);
  CHECK(hi.scores[3][5] == 0.9);  // D/f6 over AD, BD, CD
}

TEST_CASE("pair indexing") {
  const auto pairs = class_pairs(4);
  REQUIRE(pairs.size() == 6);
  PairwiseRelevanceTable t;
  t.classes = {"A", "B", "C", "D"};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(t.pair_index(pairs[i].first, pairs[i].second) == i);
    CHECK(t.pair_index(pairs[i].second, pairs[i].first) == i);
  }
  CHECK(pairs[2] == std::pair<ClassId, ClassId>{0, 3});
  CHECK(pairs[3] == std::pair<ClassId, ClassId>{1, 2});
}

TEST_CASE("ova, ove and dove agree with per-view measurements") {
  std::mt19937_64 rng(5);
  const MeasureSpec spec;
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = test::random_dataset(rng, 30 + trial, 4, 3);
    const auto a = ova(d, spec);
    const auto t = dove(d, spec);
    for (ClassId p = 0; p < 3; ++p)
      for (std::size_t j = 0; j < 4; ++j) CHECK(a.scores[p][j] == measure(binarize(d, d.class_name(p)), j, spec));
    for (const auto& [p, q] : t.pairs)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(t.score(p, q, j) == measure(pair_view(d, d.class_name(p), d.class_name(q)), j, spec));
    const auto e = ove(d, spec);
    CHECK(e.scores == aggregate_pairwise(t).scores);
  }
}

TEST_CASE("binary collapse: two classes make ova, ove and dove coincide") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = test::random_dataset(rng, 6 + trial * 2, 1 + trial % 12, 2);
    const MeasureSpec spec;
    const auto a = ova(d, spec);
    const auto e = ove(d, spec);
    const auto t = dove(d, spec);
    REQUIRE(t.scores.size() == 1);
    CHECK(a.scores[0] == a.scores[1]);
    CHECK(a.scores[0] == t.scores[0]);
    CHECK(e.scores[0] == t.scores[0]);
    CHECK(e.scores[1] == t.scores[0]);
  }
}

TEST_CASE("invocation counts") {
  std::mt19937_64 rng(3);
  for (std::size_t classes : {2u, 3u, 5u}) {
    const auto d = test::random_dataset(rng, 40, 7, classes);
    MeasureCounter c;
    (void)ova(d, {}, {{}, &c});
    CHECK(c.calls == 7 * classes);
    CHECK(c.examples == 7 * classes * 40);
    c.reset();
    (void)dove(d, {}, {{}, &c});
    CHECK(c.calls == 7 * classes * (classes - 1) / 2);
    // Every example sits in L-1 pairs.
    CHECK(c.examples == 7 * 40 * (classes - 1));
    c.reset();
    (void)rank_global(d, {}, {{}, &c});
    CHECK(c.calls == 7);
  }
}

TEST_CASE("results do not depend on the thread count") {
  std::mt19937_64 rng(11);
  const auto d = test::random_dataset(rng, 80, 10, 4);
  MeasureSpec spec;
  spec.discretization.global = true;
  const auto one = dove(d, spec, {{1}, nullptr});
  const auto many = dove(d, spec, {{7}, nullptr});
  CHECK(one.scores == many.scores);
  CHECK(ova(d, spec, {{1}, nullptr}).scores == ova(d, spec, {{5}, nullptr}).scores);
}

TEST_CASE("collapse") {
  const auto r = test::example_class_ranking();
  const auto g = collapse(r, {AggregateKind::kMax});
  CHECK(g.scores[0] == 0.7);
  CHECK(g.scores[8] == 0.8);
  const auto m = collapse(r);
  CHECK(m.scores[1] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("selection rejects single-class data") {
  const auto d = Dataset::from_labels({"e1", "e2"}, {"x"}, {1.0, 2.0}, {"A", "A"});
  CHECK_THROWS_AS(ova(d, {}), DataError);
  CHECK_THROWS_AS(dove(d, {}), DataError);
}

TEST_CASE("strategy and aggregate names") {
  for (auto s : {Strategy::kGlobal, Strategy::kOvA, Strategy::kOvE, Strategy::kDOvE})
    CHECK(parse_strategy(to_string(s)) == s);
  for (auto a : {AggregateKind::kMean, AggregateKind::kMin, AggregateKind::kMax})
    CHECK(parse_aggregate(to_string(a)) == a);
  CHECK_THROWS_AS(parse_strategy("ovo"), UsageError);
  CHECK_THROWS_AS(parse_aggregate("median"), UsageError);
}
