#include <filesystem>
#include <random>

#include "csfs/error.hpp"
#include "csfs/evaluation.hpp"
#include "csfs/format.hpp"
#include "csfs/io.hpp"
#include "csfs/synth.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace csfs;

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);
}

TEST_CASE("csv_field quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("artifact documents round-trip") {
  const auto table = test::example_pairwise();
  const std::string tj = to_json(table);
  CHECK(to_json(parse_pairwise_table(tj)) == tj);

  const auto matrix = build_matrix(table);
  const std::string mj = to_json(matrix);
  const auto back = std::get<ClassSpecificRelevanceMatrix>(parse_artifact(mj));
  CHECK(back.diagonal == matrix.diagonal);
  CHECK(to_json(back) == mj);

  const auto g = test::example_global();
  CHECK(to_json(std::get<GlobalRanking>(parse_artifact(to_json(g)))) == to_json(g));
  const auto r = test::example_class_ranking();
  CHECK(std::get<ClassSpecificRanking>(parse_artifact(to_json(r))).scores == r.scores);
}

TEST_CASE("tables with reordered pair rows load into canonical order") {
  const std::string doc = R"({
    "classes": ["A", "B", "C"], "features": ["x"], "strategy": "dove",
    "pairs": [["B", "C"], ["C", "A"], ["A", "B"]],
    "scores": [[0.3], [0.2], [0.1]]})";
  const auto t = parse_pairwise_table(doc);
  CHECK(t.scores == std::vector<std::vector<double>>{{0.1}, {0.2}, {0.3}});
}

TEST_CASE("malformed documents are data errors") {
  CHECK_THROWS_AS(parse_artifact("{"), DataError);
  CHECK_THROWS_AS(parse_artifact("[]"), DataError);
  CHECK_THROWS_AS(parse_artifact(R"({"classes":["A","B"],"features":["x"],"strategy":"bogus","scores":[[0.1]]})"),
                  DataError);
  CHECK_THROWS_AS(parse_artifact(R"({"classes":["A","B"],"features":["x"],"strategy":"ova","scores":[[0.1]]})"),
                  DataError);
  CHECK_THROWS_AS(parse_artifact(R"({"classes":["A","B"],"features":["x"],"strategy":"ova","scores":[[0.1],[1.5]]})"),
                  DataError);
  CHECK_THROWS_AS(parse_pairwise_table(to_json(test::example_global())), DataError);
  CHECK_THROWS_AS(parse_pairwise_table(R"({"classes":["A","B","C"],"features":["x"],"strategy":"dove",
      "pairs":[["A","B"],["A","B"],["B","C"]],"scores":[[0.1],[0.2],[0.3]]})"),
                  DataError);
  CHECK_THROWS_AS(parse_scheme(R"({"format":"other"})"), DataError);
}

TEST_CASE("csv renderings") {
  const auto g = test::example_global();
  CHECK(to_csv(g).rfind("class,f1,f2,f3,f4,f5,f6,f7,f8,f9\nglobal,0.4,0.8,", 0) == 0);
  const auto m = build_matrix(test::example_pairwise());
  const auto csv = to_csv(m);
  CHECK(csv.find("B,B,f2;f5\n") != std::string::npos);
  CHECK(csv.find("C,C,\n") != std::string::npos);
  CHECK(csv.find("B,C,f4;f7\n") != std::string::npos);
}

TEST_CASE("trained schemes round-trip through JSON and predict identically") {
  BlobSpec spec;
  spec.n = 120;
  spec.classes = 3;
  const auto d = synth_blobs(spec);
  for (auto t : {Topology::kTraditional, Topology::kOneLayerOvA, Topology::kTwoLayerDOvE,
                 Topology::kThreeLayer}) {
    for (auto base : {BaseKind::kGaussianNaiveBayes, BaseKind::kNearestCentroid}) {
      Pipeline p;
      p.scheme.topology = t;
      p.strategy = default_strategy(t);
      p.scheme.base.kind = base;
      const auto s = fit(d, p);
      const std::string doc = to_json(s);
      const auto back = parse_scheme(doc);
      CHECK(to_json(back) == doc);
      for (std::size_t i = 0; i < d.num_examples(); i += 7) {
        CHECK(predict(back, d.row(i)).scores == predict(s, d.row(i)).scores);
      }
    }
  }
}

TEST_CASE("evaluation report JSON leaves timing out unless asked") {
  BlobSpec spec;
  spec.n = 60;
  spec.classes = 3;
  const auto d = synth_blobs(spec);
  const auto r = evaluate(d, {}, 3, 1);
  CHECK(to_json(r).find("wall_seconds") == std::string::npos);
  CHECK(to_json(r, true).find("wall_seconds") != std::string::npos);
  CHECK(to_json(r) == to_json(evaluate(d, {}, 3, 1)));
}

TEST_CASE("write_file_atomic replaces the target") {
  const auto dir = std::filesystem::temp_directory_path() / "csfs_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_text_file(path.string()) == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS(write_file_atomic(dir / "missing" / "x.txt", "x"));
}
