#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "hypdc/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hypdc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("hypdc_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
};

void expect_one_line_json(const std::string& err, const std::string& kind) {
  ASSERT_FALSE(err.empty());
  EXPECT_EQ(err.find('\n'), err.size() - 1);
  const json j = json::parse(err);
  EXPECT_EQ(j["error"], kind);
  EXPECT_TRUE(j["message"].is_string());
}

}  // namespace

TEST_F(Cli, GenWritesPatch) {
  const Result r = run({"gen", "--rings", "1", "--edge", "0.01", "--out", path("m.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const json summary = json::parse(r.out);
  EXPECT_EQ(summary["vertices"], 7);
  EXPECT_EQ(summary["faces"], 6);
  const hypdc::MeshFile file = hypdc::parse_mesh_json(hypdc::read_file(path("m.json")));
  EXPECT_EQ(file.mesh.vertices().size(), 7u);
  EXPECT_EQ(file.mesh.faces().size(), 6u);
}

TEST_F(Cli, GenRejectsBadParameters) {
  const Result r = run({"gen", "--rings", "0", "--edge", "0.01", "--out", path("m.json")});
  EXPECT_EQ(r.code, 2);
  expect_one_line_json(r.err, "input");
}

TEST_F(Cli, CheckRoundTrip) {
  ASSERT_EQ(run({"gen", "--rings", "2", "--edge", "0.05", "--out", path("m.json")}).code, 0);
  const Result r = run({"check", "--mesh", path("m.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty());
  const json j = json::parse(r.out);
  EXPECT_EQ(j["violations"], 0);
  EXPECT_TRUE(j["delaunay"]["delaunay"].get<bool>());
  EXPECT_TRUE(j["embedding"]["embedded"].get<bool>());
  EXPECT_NEAR(j["min_angle"].get<double>(), 1.047, 0.01);

  const hypdc::MeshFile file = hypdc::parse_mesh_json(hypdc::read_file(path("m.json")));
  EXPECT_EQ(hypdc::write_mesh_json(file.mesh, file.map), hypdc::read_file(path("m.json")));

  const json only = json::parse(run({"check", "--mesh", path("m.json"), "--min-angle"}).out);
  EXPECT_FALSE(only.contains("delaunay"));
  EXPECT_TRUE(only.contains("min_angle"));
}

TEST_F(Cli, CheckReportsViolations) {
  hypdc::write_file(path("flip.json"), R"({"vertices": [{"id": 0, "x": 0, "y": 0}, {"id": 1, "x": 0, "y": 0.1},
    {"id": 2, "x": 0.1, "y": 0}], "faces": [[0, 1, 2]]})");
  const Result r = run({"check", "--mesh", path("flip.json"), "--embedding"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["violations"], 1);

  hypdc::write_file(path("square.json"), R"({"vertices": [{"id": 0, "x": 0.3, "y": 0.3}, {"id": 1, "x": -0.12, "y": 0.12},
    {"id": 2, "x": -0.3, "y": -0.3}, {"id": 3, "x": 0.3, "y": -0.3}], "faces": [[0, 1, 2], [0, 2, 3]]})");
  const Result d = run({"check", "--mesh", path("square.json"), "--delaunay"});
  EXPECT_EQ(d.code, 1);
  EXPECT_EQ(json::parse(d.out)["delaunay"]["violations"], json::parse("[[0, 2]]"));
}

TEST_F(Cli, CheckCorruptedMeshIsParseError) {
  hypdc::write_file(path("corrupted.json"), "{\"vertices\": [1, 2,");
  const Result r = run({"check", "--mesh", path("corrupted.json")});
  EXPECT_EQ(r.code, 2);
  expect_one_line_json(r.err, "parse");
  EXPECT_EQ(run({"check", "--mesh", path("missing.json")}).code, 2);
}

TEST_F(Cli, UsageErrors) {
  Result r = run({});
  EXPECT_EQ(r.code, 2);
  expect_one_line_json(r.err, "usage");
  r = run({"check", "--mesh", "x.json", "--bogus"});
  EXPECT_EQ(r.code, 2);
  expect_one_line_json(r.err, "usage");
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run({"gen", "--rings", "1", "--edge", "0.1", "--out", "a", "verify", "--suite", "all"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, ConformalBothModes) {
  ASSERT_EQ(run({"gen", "--rings", "1", "--edge", "0.1", "--out", path("m.json")}).code, 0);
  const hypdc::MeshFile file = hypdc::parse_mesh_json(hypdc::read_file(path("m.json")));
  hypdc::FactorField u = hypdc::FactorField::zeros(file.mesh.id_bound());
  u[0] = 1.0;
  hypdc::write_file(path("u.json"), hypdc::write_factors_json(file.mesh, u));

  Result r = run({"conformal", "--mesh", path("m.json"), "--factors", path("u.json"), "--mode", "hyp", "--out",
                  path("l.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const hypdc::LengthField l = hypdc::parse_lengths_json(hypdc::read_file(path("l.json")), file.mesh);
  const hypdc::LengthField expect =
      hypdc::hyp_change(file.mesh, hypdc::induced_lengths(file.mesh, file.map), u);
  EXPECT_EQ(l.values, expect.values);
  EXPECT_TRUE(json::parse(r.out)["non_realizable_faces"].empty());

  r = run({"conformal", "--mesh", path("m.json"), "--factors", path("u.json"), "--mode", "euc", "--out",
           path("c.json")});
  EXPECT_EQ(r.code, 0);
  const hypdc::LengthField c = hypdc::parse_lengths_json(hypdc::read_file(path("c.json")), file.mesh);
  const int e = file.mesh.edge_index(0, 1);
  EXPECT_NEAR(c.values[e], std::exp(0.5) * std::abs(file.map[1].z() - file.map[0].z()), 1e-15);

  // Shrinking the spokes far enough breaks realizability; reported, not enforced.
  u[0] = -6.0;
  hypdc::write_file(path("big.json"), hypdc::write_factors_json(file.mesh, u));
  r = run({"conformal", "--mesh", path("m.json"), "--factors", path("big.json"), "--mode", "hyp", "--out",
           path("l2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["non_realizable_faces"].size(), 6u);

  EXPECT_EQ(run({"conformal", "--mesh", path("m.json"), "--factors", path("u.json"), "--mode", "sph", "--out",
                 path("l.json")})
                .code,
            2);
}

TEST_F(Cli, SolveConvergesAndLogs) {
  ASSERT_EQ(run({"gen", "--rings", "3", "--edge", "0.02", "--out", path("m.json")}).code, 0);
  const Result r = run({"solve", "--mesh", path("m.json"), "--pin-boundary", "0", "--init", "random:7", "--out",
                        path("u.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const json log = json::parse(r.out);
  EXPECT_TRUE(log["converged"].get<bool>());
  EXPECT_LE(log["residual"].get<double>(), 1e-10);
  EXPECT_LE(log["max_abs_factor"].get<double>(), 1e-8);
  EXPECT_GT(log["log"].size(), 1u);
  const hypdc::MeshFile file = hypdc::parse_mesh_json(hypdc::read_file(path("m.json")));
  const hypdc::FactorField u = hypdc::parse_factors_json(hypdc::read_file(path("u.json")), file.mesh);
  EXPECT_LE(u.max_norm(file.mesh), 1e-8);

  // Same seed, same bytes.
  ASSERT_EQ(run({"solve", "--mesh", path("m.json"), "--pin-boundary", "0", "--init", "random:7", "--out",
                 path("u2.json")})
                .code,
            0);
  EXPECT_EQ(hypdc::read_file(path("u.json")), hypdc::read_file(path("u2.json")));

  EXPECT_EQ(run({"solve", "--mesh", path("m.json"), "--pin-boundary", "0", "--init", "random:x", "--out",
                 path("u.json")})
                .code,
            2);
  EXPECT_EQ(run({"solve", "--mesh", path("m.json"), "--pin-boundary", "0", "--init", "ones", "--out",
                 path("u.json")})
                .code,
            2);
}

TEST_F(Cli, SolveInfeasibleIsSolverFailure) {
  ASSERT_EQ(run({"gen", "--rings", "1", "--edge", "0.1", "--out", path("m.json")}).code, 0);
  const Result r = run({"solve", "--mesh", path("m.json"), "--pin-boundary", "8", "--init", "zero", "--out",
                        path("u.json")});
  EXPECT_EQ(r.code, 3);
  expect_one_line_json(r.err, "infeasible_step");
}

TEST_F(Cli, VerifySuites) {
  Result r = run({"verify", "--suite", "chain", "--samples", "100000", "--seed", "42"});
  EXPECT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["samples"], 100000);
  EXPECT_EQ(j["seed"], 42);

  r = run({"verify", "--suite", "all", "--samples", "200", "--seed", "1"});
  EXPECT_EQ(r.code, 0);
  j = json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 6u);
  for (const auto& report : j) EXPECT_EQ(report["violations"], 0) << report["suite"];

  r = run({"verify", "--suite", "s3chain", "--samples", "50", "--seed", "3", "--epsilon", "0.1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["witness"]["epsilon"], 0.1);

  r = run({"verify", "--suite", "s3chain", "--samples", "5", "--epsilon", "1.5"});
  EXPECT_EQ(r.code, 2);
  expect_one_line_json(r.err, "hypothesis");

  EXPECT_EQ(run({"verify", "--suite", "chain", "--samples", "0"}).code, 2);
}

TEST_F(Cli, VerifyIsDeterministic) {
  const Result a = run({"verify", "--suite", "maxprinciple", "--samples", "300", "--seed", "11"});
  const Result b = run({"verify", "--suite", "maxprinciple", "--samples", "300", "--seed", "11", "--threads", "1"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, RenderDeterministic) {
  ASSERT_EQ(run({"gen", "--rings", "2", "--edge", "0.2", "--out", path("m.json")}).code, 0);
  ASSERT_EQ(run({"render", "--mesh", path("m.json"), "--out", path("a.svg"), "--companion"}).code, 0);
  ASSERT_EQ(run({"render", "--mesh", path("m.json"), "--out", path("b.svg"), "--companion"}).code, 0);
  EXPECT_EQ(hypdc::read_file(path("a.svg")), hypdc::read_file(path("b.svg")));
  ASSERT_EQ(run({"render", "--mesh", path("m.json"), "--out", path("c.svg")}).code, 0);
  EXPECT_EQ(hypdc::read_file(path("c.svg")).find("class=\"chord\""), std::string::npos);
}

TEST_F(Cli, BinaryExitCodesAndStreams) {
  const std::string bin = HYPDC_CLI_PATH;
  const std::string mesh = path("m.json");
  EXPECT_EQ(std::system((bin + " gen --rings 1 --edge 0.01 --out " + mesh + " > /dev/null").c_str()), 0);
  hypdc::write_file(path("bad.json"), "not json");
  const int status = std::system((bin + " check --mesh " + path("bad.json") + " > /dev/null 2> " + path("err.txt")).c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  expect_one_line_json(hypdc::read_file(path("err.txt")), "parse");
  const int unknown = std::system((bin + " render --mesh " + mesh + " --out x.svg --color red 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(unknown), 2);
}
