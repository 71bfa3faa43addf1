#include <random>

#include "csfs/error.hpp"
#include "csfs/evaluation.hpp"
#include "csfs/schemes.hpp"
#include "csfs/synth.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace csfs;

namespace {

SchemeNode node(NodeRole role, ClassId p, ClassId q, FeatureSet features) {
  SchemeNode n;
  n.role = role;
  n.p = p;
  n.q = q;
  n.features = std::move(features);
  return n;
}

// Untrained three-class scheme skeleton for exercising combine() directly.
TrainedScheme skeleton(Topology t, std::vector<SchemeNode> nodes) {
  TrainedScheme s;
  s.topology = t;
  s.classes = {"A", "B", "C"};
  s.features = {"x"};
  s.priors = {0.2, 0.5, 0.3};
  s.nodes = std::move(nodes);
  return s;
}

Dataset blobs(std::size_t classes, std::uint64_t seed = 1) {
  BlobSpec spec;
  spec.n = 30 * classes;
  spec.classes = classes;
  spec.features = 3;
  spec.seed = seed;
  return synth_blobs(spec);
}

}  // namespace

TEST_CASE("combine: one-layer takes each node's POS probability") {
  const auto s = skeleton(Topology::kOneLayerOvA, {node(NodeRole::kOneVsRest, 0, 0, {0}),
                                                   node(NodeRole::kOneVsRest, 1, 1, {0}),
                                                   node(NodeRole::kOneVsRest, 2, 2, {0})});
  const auto pred = combine(s, std::vector<double>{0.2, 0.7, 0.4});
  CHECK(pred.scores == std::vector<double>{0.2, 0.7, 0.4});
  CHECK(pred.label == 1);
}

TEST_CASE("combine: two-layer averages pairwise probabilities") {
  const auto s = skeleton(Topology::kTwoLayerDOvE, {node(NodeRole::kPairwise, 0, 1, {0}),
                                                    node(NodeRole::kPairwise, 0, 2, {0}),
                                                    node(NodeRole::kPairwise, 1, 2, {0})});
  const auto pred = combine(s, std::vector<double>{0.9, 0.6, 0.3});
  CHECK(pred.scores[0] == doctest::Approx((0.9 + 0.6) / 2).epsilon(1e-15));
  CHECK(pred.scores[1] == doctest::Approx((0.1 + 0.3) / 2).epsilon(1e-15));
  CHECK(pred.scores[2] == doctest::Approx((0.4 + 0.7) / 2).epsilon(1e-15));
  CHECK(pred.label == 0);
}

TEST_CASE("combine: three-layer weights the diagonal node") {
  auto s = skeleton(Topology::kThreeLayer,
                    {node(NodeRole::kDiagonal, 0, 0, {0}), node(NodeRole::kDiagonal, 1, 1, {0}),
                     node(NodeRole::kDiagonal, 2, 2, {0}), node(NodeRole::kOffDiagonal, 0, 1, {0}),
                     node(NodeRole::kOffDiagonal, 0, 2, {0}), node(NodeRole::kOffDiagonal, 1, 2, {0})});
  const std::vector<double> out{0.8, 0.1, 0.3, 0.6, 0.7, 0.2};
  auto pred = combine(s, out);
  CHECK(pred.scores[0] == doctest::Approx((0.8 + 0.6 + 0.7) / 3).epsilon(1e-15));
  CHECK(pred.scores[1] == doctest::Approx((0.1 + 0.4 + 0.2) / 3).epsilon(1e-15));
  CHECK(pred.scores[2] == doctest::Approx((0.3 + 0.3 + 0.8) / 3).epsilon(1e-15));

  s.diag_weight = 3.0;
  pred = combine(s, out);
  CHECK(pred.scores[0] == doctest::Approx((3 * 0.8 + 0.6 + 0.7) / 5).epsilon(1e-15));
}

TEST_CASE("combine: empty nodes under neutral and omit") {
  auto s = skeleton(Topology::kThreeLayer,
                    {node(NodeRole::kDiagonal, 0, 0, {0}), node(NodeRole::kDiagonal, 1, 1, {}),
                     node(NodeRole::kDiagonal, 2, 2, {0}), node(NodeRole::kOffDiagonal, 0, 1, {0}),
                     node(NodeRole::kOffDiagonal, 0, 2, {}), node(NodeRole::kOffDiagonal, 1, 2, {0})});
  // Values at empty nodes are ignored either way.
  const std::vector<double> out{0.8, 0.99, 0.3, 0.6, 0.01, 0.2};
  auto pred = combine(s, out);
  CHECK(pred.scores[0] == doctest::Approx((0.8 + 0.6 + 0.5) / 3).epsilon(1e-15));
  CHECK(pred.scores[1] == doctest::Approx((0.5 + 0.4 + 0.2) / 3).epsilon(1e-15));

  s.empty_policy = EmptyNodePolicy::kOmit;
  pred = combine(s, out);
  CHECK(pred.scores[0] == doctest::Approx((0.8 + 0.6) / 2).epsilon(1e-15));
  CHECK(pred.scores[1] == doctest::Approx((0.4 + 0.2) / 2).epsilon(1e-15));
  CHECK(pred.scores[2] == doctest::Approx((0.3 + 0.8) / 2).epsilon(1e-15));
}

TEST_CASE("combine: ties go to the larger prior, then class order") {
  auto s = skeleton(Topology::kOneLayerOvA, {node(NodeRole::kOneVsRest, 0, 0, {0}),
                                             node(NodeRole::kOneVsRest, 1, 1, {0}),
                                             node(NodeRole::kOneVsRest, 2, 2, {0})});
  CHECK(combine(s, std::vector<double>{0.6, 0.6, 0.6}).label == 1);
  CHECK(combine(s, std::vector<double>{0.6, 0.1, 0.6}).label == 2);
  s.priors = {0.4, 0.2, 0.4};
  CHECK(combine(s, std::vector<double>{0.6, 0.1, 0.6}).label == 0);
  CHECK_THROWS_AS(combine(s, std::vector<double>{0.5}), DataError);
}

TEST_CASE("node counts per topology") {
  for (std::size_t L = 2; L <= 6; ++L) {
    const auto d = blobs(L);
    for (auto t : {Topology::kTraditional, Topology::kOneLayerOvA, Topology::kTwoLayerDOvE,
                   Topology::kThreeLayer}) {
      Pipeline p;
      p.scheme.topology = t;
      p.strategy = default_strategy(t);
      const auto s = fit(d, p);
      const std::size_t expected = t == Topology::kTraditional   ? 1
                                   : t == Topology::kOneLayerOvA ? L
                                   : t == Topology::kTwoLayerDOvE ? test::binomial(L, 2)
                                                                  : test::binomial(L + 1, 2);
      CHECK(s.count_nodes() == expected);
      CHECK(s.count_aggregation_units() == (t == Topology::kTraditional ? 0 : L));
    }
  }
}

TEST_CASE("three-layer scheme from the example matrix keeps empty cells") {
  // A dataset with the example's class and feature axes; the values only
  // need to be trainable.
  std::mt19937_64 rng(4);
  auto d = test::random_dataset(rng, 40, 9, 4);
  const auto matrix = build_matrix(test::example_pairwise());
  SchemeSpec spec;
  const auto s = build_scheme(d, spec, matrix);
  CHECK(s.count_nodes() == 10);
  std::size_t empty = 0;
  for (const auto& n : s.nodes) {
    if (n.empty()) {
      ++empty;
      CHECK_FALSE(n.model.has_value());
    } else {
      CHECK(n.model.has_value());
    }
  }
  CHECK(empty == 2);  // diag(C) and (A,D)
  CHECK(s.warnings.size() == 2);

  const auto row = d.row(0);
  const auto outs = node_outputs(s, row);
  CHECK(outs[2] == 0.5);
  const auto pred = predict(s, row);
  CHECK(pred.scores.size() == 4);

  spec.empty_policy = EmptyNodePolicy::kOmit;
  const auto omitted = build_scheme(d, spec, matrix);
  CHECK(omitted.count_nodes() == 10);
}

TEST_CASE("omit fails when a class loses every input") {
  auto matrix = build_matrix(test::example_pairwise());
  matrix.diagonal[2].clear();
  for (auto& cell : matrix.offdiag)
    if (cell.p == 2 || cell.q == 2) cell.features.clear();
  std::mt19937_64 rng(4);
  const auto d = test::random_dataset(rng, 40, 9, 4);
  SchemeSpec spec;
  spec.empty_policy = EmptyNodePolicy::kOmit;
  CHECK_THROWS_AS(build_scheme(d, spec, matrix), DataError);
  spec.empty_policy = EmptyNodePolicy::kNeutral;
  CHECK_NOTHROW(build_scheme(d, spec, matrix));
}

TEST_CASE("one-layer and traditional fall back to the top feature") {
  std::mt19937_64 rng(9);
  const auto d = test::random_dataset(rng, 30, 9, 4);
  SchemeSpec spec;
  spec.topology = Topology::kOneLayerOvA;
  spec.threshold.tau = 0.85;
  const auto one = build_scheme(d, spec, test::example_class_ranking());
  for (const auto& n : one.nodes) {
    CHECK(n.features.size() >= 1);
  }
  CHECK(one.nodes[1].fallback);
  CHECK(one.nodes[1].features == FeatureSet{1});  // B's best is f2 (0.8)
  CHECK_FALSE(one.warnings.empty());

  spec.topology = Topology::kTraditional;
  const auto trad = build_scheme(d, spec, test::example_global());
  REQUIRE(trad.nodes.size() == 1);
  CHECK(trad.nodes[0].fallback);
  CHECK(trad.nodes[0].features == FeatureSet{1});
}

TEST_CASE("build_scheme rejects mismatched inputs") {
  std::mt19937_64 rng(2);
  const auto d = test::random_dataset(rng, 30, 9, 4);
  SchemeSpec spec;
  CHECK_THROWS_AS(build_scheme(d, spec, test::example_pairwise()), UsageError);
  spec.topology = Topology::kTwoLayerDOvE;
  auto table = test::example_pairwise();
  table.features[0] = "renamed";
  CHECK_THROWS_AS(build_scheme(d, spec, table), DataError);
  spec.diag_weight = 0.0;
  CHECK_THROWS_AS(build_scheme(d, spec, test::example_pairwise()), UsageError);
}

TEST_CASE("prediction input checks") {
  const auto d = blobs(3);
  const auto s = fit(d, {});
  CHECK_THROWS_AS(predict(s, std::vector<double>{1.0}), DataError);
  CHECK_THROWS_AS(predict(s, std::vector<double>{1.0, std::nan(""), 0.0}), DataError);
}

TEST_CASE("fitted schemes separate blobs and are thread-count independent") {
  const auto d = blobs(4, 3);
  for (auto t : {Topology::kTraditional, Topology::kOneLayerOvA, Topology::kTwoLayerDOvE,
                 Topology::kThreeLayer}) {
    Pipeline p;
    p.scheme.topology = t;
    p.strategy = default_strategy(t);
    const auto a = fit(d, p, {{1}, nullptr});
    const auto b = fit(d, p, {{4}, nullptr});
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.num_examples(); ++i) {
      const auto pa = predict(a, d.row(i));
      CHECK(pa.scores == predict(b, d.row(i)).scores);
      correct += pa.label == d.label(i) ? 1 : 0;
    }
    CHECK(static_cast<double>(correct) / static_cast<double>(d.num_examples()) >= 0.95);
  }
}

TEST_CASE("name round trips") {
  for (auto t : {Topology::kTraditional, Topology::kOneLayerOvA, Topology::kTwoLayerDOvE,
                 Topology::kThreeLayer})
    CHECK(parse_topology(to_string(t)) == t);
  for (auto r : {NodeRole::kMulticlass, NodeRole::kOneVsRest, NodeRole::kPairwise, NodeRole::kDiagonal,
                 NodeRole::kOffDiagonal})
    CHECK(parse_node_role(to_string(r)) == r);
  CHECK(parse_empty_policy("omit") == EmptyNodePolicy::kOmit);
  CHECK_THROWS_AS(parse_topology("four-layer"), UsageError);
}

TEST_CASE("three-layer node count up to ten classes") {
  for (std::size_t L = 2; L <= 10; ++L) {
    const auto s = fit(blobs(L, L), {});
    CHECK(s.count_nodes() == test::binomial(L + 1, 2));
  }
}

TEST_CASE("one-layer feature isolation") {
  // In the example ranking f7 is relevant to class B only, so moving f7
  // changes node B's output and nothing else.
  std::mt19937_64 rng(12);
  const auto d = test::random_dataset(rng, 60, 9, 4, 8);
  SchemeSpec spec;
  spec.topology = Topology::kOneLayerOvA;
  const auto s = build_scheme(d, spec, test::example_class_ranking());
  REQUIRE(s.nodes[1].features == FeatureSet{1, 4, 6});
  for (std::size_t i = 0; i < d.num_examples(); i += 5) {
    std::vector<double> row(d.row(i).begin(), d.row(i).end());
    const auto before = node_outputs(s, row);
    row[6] += 3.7;
    const auto after = node_outputs(s, row);
    CHECK(after[0] == before[0]);
    CHECK(after[2] == before[2]);
    CHECK(after[3] == before[3]);
    CHECK(after[1] != before[1]);
  }
}

TEST_CASE("two classes: layered schemes agree with the traditional scheme") {
  // With L=2 and identical feature sets every topology reduces to one
  // A-versus-B decision.
  BlobSpec spec;
  spec.n = 80;
  spec.classes = 2;
  spec.features = 3;
  spec.seed = 6;
  const auto d = synth_blobs(spec);
  const FeatureSet all{0, 1, 2};

  GlobalRanking g{d.classes(), d.feature_names(), {0.9, 0.9, 0.9}};
  ClassSpecificRanking r{d.classes(), d.feature_names(), Strategy::kOvA, {{0.9, 0.9, 0.9}, {0.9, 0.9, 0.9}}};
  PairwiseRelevanceTable t{d.classes(), d.feature_names(), class_pairs(2), {{0.9, 0.9, 0.9}}};
  const auto m = build_matrix(t);
  REQUIRE(m.diagonal[0] == all);

  SchemeSpec s;
  s.topology = Topology::kTraditional;
  const auto trad = build_scheme(d, s, g);
  s.topology = Topology::kOneLayerOvA;
  const auto one = build_scheme(d, s, r);
  s.topology = Topology::kTwoLayerDOvE;
  const auto two = build_scheme(d, s, t);
  s.topology = Topology::kThreeLayer;
  const auto three = build_scheme(d, s, m);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 12.0);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> row{u(rng), u(rng), u(rng)};
    const auto expected = predict(trad, row).label;
    CHECK(predict(one, row).label == expected);
    CHECK(predict(two, row).label == expected);
    CHECK(predict(three, row).label == expected);
  }
}
