#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "csfs/dataset.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace fs = std::filesystem;
using csfs::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("csfs_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& file) const { return (dir / file).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(call({}).code == 1);
  CHECK(call({"rank"}).code == 1);
  CHECK(call({"rank", "--no-such-flag", "x.csv"}).code == 1);
  CHECK(call({"evaluate", "x.csv"}).code == 1);  // --seed is required
  CHECK(call({"rank", "x.csv", "--bins", "1"}).code == 1);
  CHECK(call({"matrix", "x.json", "--tau", "1.5"}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("data errors exit with 2") {
  Scratch s("data_errors");
  CHECK(call({"rank", s / "missing.csv"}).code == 2);
  csfs::write_file_atomic(s / "one_class.csv", "x,class\n1,A\n2,A\n");
  const auto r = call({"rank", s / "one_class.csv"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  csfs::write_file_atomic(s / "bad.json", "{");
  CHECK(call({"matrix", s / "bad.json"}).code == 2);
}

TEST_CASE("matrix command on the example table") {
  const auto r = call({"matrix", csfs::test::fixture_path("example_pairwise.json"), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("A,A,f9\n") != std::string::npos);
  CHECK(r.out.find("C,C,\n") != std::string::npos);
  CHECK(r.out.find("A,D,\n") != std::string::npos);
  CHECK(r.out.find("C,D,f6\n") != std::string::npos);
}

TEST_CASE("synth, rank, train, predict, evaluate end to end") {
  Scratch s("pipeline");
  REQUIRE(call({"synth", "--kind", "blobs", "--seed", "3", "--n", "120", "--classes", "3", "-o", s / "data.csv"})
              .code == 0);

  for (const char* strategy : {"global", "ova", "ove", "dove"}) {
    const auto r = call({"rank", s / "data.csv", "--strategy", strategy});
    CHECK(r.code == 0);
    CHECK(r.out.find(std::string("\"strategy\": \"") + strategy + "\"") != std::string::npos);
  }
  CHECK(call({"rank", s / "data.csv", "--strategy", "dove", "-o", s / "table.json"}).code == 0);
  CHECK(call({"matrix", s / "table.json", "-o", s / "matrix.json"}).code == 0);
  CHECK(call({"rank", s / "data.csv", "--strategy", "dove", "--collapse"}).code == 1);

  // Training from a saved matrix equals training from the data directly.
  REQUIRE(call({"train", s / "data.csv", "-o", s / "direct.json"}).code == 0);
  REQUIRE(call({"train", s / "data.csv", "--artifact", s / "matrix.json", "-o", s / "from_artifact.json"}).code == 0);
  CHECK(csfs::read_text_file(s / "direct.json") == csfs::read_text_file(s / "from_artifact.json"));
  CHECK(call({"train", s / "data.csv", "--artifact", s / "table.json"}).code == 1);

  const auto pred = call({"predict", s / "data.csv", "--scheme", s / "direct.json"});
  REQUIRE(pred.code == 0);
  CHECK(pred.out.rfind("example_id,predicted,score_A,score_B,score_C\ne1,", 0) == 0);

  const auto eval = call({"evaluate", s / "data.csv", "--seed", "1", "--k", "3", "--topology", "two-layer",
                          "--dump-artifacts", s / "folds"});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.find("\"accuracy\"") != std::string::npos);
  CHECK(fs::exists(s.dir / "folds" / "fold0.json"));
  CHECK(fs::exists(s.dir / "folds" / "fold2.json"));
  CHECK(call({"evaluate", s / "data.csv", "--seed", "1", "--topology", "two-layer", "--strategy", "ova"}).code == 1);
}

TEST_CASE("label and id column options") {
  Scratch s("columns");
  csfs::write_file_atomic(s / "d.csv",
                          "id,label,x,y\n"
                          "r1,A,0,1\nr2,A,0.1,1.2\nr3,B,5,1\nr4,B,5.2,0.9\nr5,C,9,8\nr6,C,9.5,8.1\n");
  const auto r = call({"rank", s / "d.csv", "--label", "label", "--id-column", "id", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("class,x,y\nA,", 0) == 0);
  REQUIRE(call({"train", s / "d.csv", "--label", "1", "--id-column", "id", "--topology", "one-layer", "--bins", "2",
                "-o", s / "scheme.json"})
              .code == 0);
  const auto p = call({"predict", s / "d.csv", "--scheme", s / "scheme.json", "--id-column", "id"});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("\nr6,") != std::string::npos);
}

TEST_CASE("dove subcommand matches rank --strategy dove") {
  Scratch s("dove");
  REQUIRE(call({"synth", "--seed", "2", "--n", "80", "-o", s / "d.csv"}).code == 0);
  const auto a = call({"dove", s / "d.csv"});
  const auto b = call({"rank", s / "d.csv", "--strategy", "dove"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}
