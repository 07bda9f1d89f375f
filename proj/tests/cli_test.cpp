// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bafsynth/cli.hpp"
#include "bafsynth/decision_list.hpp"
#include "test_support.hpp"

namespace bafsynth {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("bafsynth-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, SynthFourClauseExample) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  Outcome r = run({"synth", spec, "--dl", path("four.dl"), "--json", path("four.json")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("realizable"), std::string::npos);
  DecisionList dl = parse_decision_list(slurp(path("four.dl")));
  EXPECT_EQ(dl.size(), 2u);
  json j = json::parse(slurp(path("four.json")));
  EXPECT_EQ(j["schema"], "bafsynth-stats");
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["instance"], "four.qdimacs");
  EXPECT_EQ(j["mode"], "back-and-forth");
  EXPECT_EQ(j["status"], "realizable");
  EXPECT_EQ(j["decisions"], 2);
  EXPECT_EQ(j["iterations"], 2);
  EXPECT_EQ(j["mss_recorded"], 2);
  EXPECT_EQ(j["partitions"], 1);
  EXPECT_EQ(j["verified"], true);
  EXPECT_TRUE(j["witness"].is_null());
  for (const char* key : {"sat_calls", "maxsat_calls", "time_ms"}) EXPECT_TRUE(j[key].is_number()) << key;
}

TEST_F(CliTest, SynthWritesListToStdoutByDefault) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  Outcome r = run({"synth", spec});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out.rfind("dl 1\n", 0), 0u);
  Outcome j = run({"synth", spec, "--dl", path("x.dl"), "--json", "-"});
  EXPECT_EQ(json::parse(j.out)["status"], "realizable");
}

TEST_F(CliTest, SynthUnrealizable) {
  const std::string spec = write("xor.qdimacs", testing::xor_unrealizable_qdimacs());
  Outcome r = run({"synth", spec, "--dl", path("xor.dl"), "--json", "-"});
  EXPECT_EQ(r.code, cli::kUnrealizable);
  EXPECT_FALSE(fs::exists(path("xor.dl")));
  json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "unrealizable");
  EXPECT_EQ(j["witness"]["mfs"], json::parse("[1,2]"));
  EXPECT_EQ(j["witness"]["component"], 1);
  EXPECT_EQ(j["witness"]["input"], json::parse(R"({"1":0})"));
}

TEST_F(CliTest, SynthIdentityFamilyPartitioned) {
  const std::string spec = write("id16.qdimacs", testing::identity_qdimacs(16));
  Outcome r = run({"synth", spec, "--dl", path("id16.dl"), "--json", "-"});
  ASSERT_EQ(r.code, cli::kOk);
  json j = json::parse(r.out);
  EXPECT_EQ(j["partitions"], 16);
  EXPECT_EQ(j["decisions"], 32);
  EXPECT_EQ(parse_decision_lists(slurp(path("id16.dl"))).size(), 16u);
  Outcome v = run({"verify", spec, path("id16.dl")});
  EXPECT_EQ(v.code, cli::kOk) << v.out;
}

TEST_F(CliTest, SynthModesAndLimits) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  for (const char* mode : {"mfs-enum", "mss-enum"}) {
    Outcome r = run({"synth", spec, "--mode", mode, "--dl", path("m.dl"), "--json", "-"});
    EXPECT_EQ(r.code, cli::kOk) << mode;
    EXPECT_EQ(json::parse(r.out)["decisions"], 3);
    EXPECT_EQ(json::parse(r.out)["mode"], mode);
  }
  const std::string id = write("id5.qdimacs", testing::identity_qdimacs(5));
  Outcome lim = run({"synth", id, "--no-partition", "--mode", "mfs-enum", "--mis-limit", "4",
                     "--json", "-"});
  EXPECT_EQ(lim.code, cli::kTimeoutOrLimit);
  EXPECT_EQ(json::parse(lim.out)["status"], "limit");
  Outcome nv = run({"synth", spec, "--no-verify", "--maxsat", "maximal", "--json", "-",
                    "--dl", path("nv.dl")});
  EXPECT_EQ(nv.code, cli::kOk);
  EXPECT_EQ(json::parse(nv.out)["verified"], false);
}

TEST_F(CliTest, SynthTimeout) {
  const std::string spec = write("id24.qdimacs", testing::identity_qdimacs(24));
  Outcome r = run({"synth", spec, "--no-partition", "--timeout", "0.3", "--json", "-"});
  EXPECT_EQ(r.code, cli::kTimeoutOrLimit);
  EXPECT_EQ(json::parse(r.out)["status"], "timeout");
}

TEST_F(CliTest, UsageAndParseErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"synth"}).code, cli::kUsage);
  EXPECT_EQ(run({"synth", path("missing.qdimacs")}).code, cli::kUsage);
  const std::string bad = write("bad.qdimacs", "p cnf 2 1\ne 2 0\na 1 0\n1 2 0\n");
  Outcome r = run({"synth", bad});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("universal block"), std::string::npos);
  const std::string ok = write("four.qdimacs", testing::four_clause_qdimacs());
  EXPECT_EQ(run({"synth", ok, "--mode", "fast"}).code, cli::kUsage);
  EXPECT_EQ(run({"synth", ok, "--jobs", "0"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, Analyze) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  Outcome r = run({"analyze", spec, "--budget", "100"});
  ASSERT_EQ(r.code, cli::kOk);
  json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "bafsynth-analysis");
  EXPECT_EQ(j["maximal_cliques"], 3);
  EXPECT_EQ(j["consensus_chordal"], true);
  EXPECT_EQ(j["fragment"], "yes");
  EXPECT_EQ(j["conflict_edges"], 4);

  const std::string id = write("id12.qdimacs", testing::identity_qdimacs(12));
  j = json::parse(run({"analyze", id, "--budget", "1000"}).out);
  EXPECT_EQ(j["budget_exceeded"], true);
  EXPECT_TRUE(j["maximal_cliques"].is_null());
  // The identity consensus graph is a complete multipartite graph with
  // induced 4-cycles, so the chordal shortcut does not apply.
  EXPECT_EQ(j["fragment"], "unknown");

  const std::string flat = write("flat.qdimacs", "p cnf 3 2\na 1 0\ne 2 3 0\n1 2 0\n1 3 0\n");
  j = json::parse(run({"analyze", flat}).out);
  EXPECT_EQ(j["maximal_cliques"], 1);
  EXPECT_EQ(j["fragment"], "yes");
}

TEST_F(CliTest, VerifyDetectsTampering) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  ASSERT_EQ(run({"synth", spec, "--dl", path("four.dl")}).code, cli::kOk);
  Outcome ok = run({"verify", spec, path("four.dl")});
  EXPECT_EQ(ok.code, cli::kOk);
  EXPECT_EQ(json::parse(ok.out)["status"], "verified");

  std::string text = slurp(path("four.dl"));
  text.replace(text.find("| 3=0 4=0"), 9, "| 3=1 4=0");
  write("bad.dl", text);
  Outcome bad = run({"verify", spec, path("bad.dl")});
  EXPECT_EQ(bad.code, cli::kVerificationFailed);
  json j = json::parse(bad.out);
  EXPECT_EQ(j["status"], "counterexample");
  EXPECT_EQ(j["counterexample"]["kind"], "soundness");
  EXPECT_EQ(j["counterexample"]["decision"], 2);

  const std::string other = write("xor.qdimacs", testing::xor_unrealizable_qdimacs());
  EXPECT_NE(run({"verify", other, path("four.dl")}).code, cli::kOk);
  write("trunc.dl", text.substr(0, text.size() - 3));
  EXPECT_EQ(run({"verify", spec, path("trunc.dl")}).code, cli::kUsage);
}

TEST_F(CliTest, Decompose) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  Outcome r = run({"decompose", spec, "--out-dir", path("out")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "bafsynth-decompose");
  EXPECT_EQ(j["z_vars"], 4);
  EXPECT_EQ(j["good"]["equivalent"], true);
  EXPECT_EQ(j["good"]["image_in_domain"], true);
  EXPECT_EQ(j["composition"]["status"], "decomposition-unrealizable");
  EXPECT_EQ(j["composition"]["fallback_verified"], true);
  EXPECT_TRUE(fs::exists(path("out/four.f1.cnf")));
  Specification f2 = read_qdimacs_file(path("out/four.f2.qdimacs"));
  EXPECT_EQ(f2.inputs(), (std::vector<Var>{5, 6, 7, 8}));
}

TEST_F(CliTest, BenchFixtures) {
  write("bench/a_four.qdimacs", testing::four_clause_qdimacs());
  write("bench/b_xor.qdimacs", testing::xor_unrealizable_qdimacs());
  write("bench/c_id3.qdimacs", testing::identity_qdimacs(3));
  Outcome r = run({"bench", path("bench"), "--family", "a_=small", "--family", "b_=small"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream lines(r.out);
  std::vector<json> records;
  for (std::string line; std::getline(lines, line);) records.push_back(json::parse(line));
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0]["status"], "realizable");
  EXPECT_EQ(records[1]["status"], "unrealizable");
  EXPECT_EQ(records[2]["status"], "realizable");
  EXPECT_EQ(records[0]["family"], "small");
  EXPECT_EQ(records[2]["family"], "other");
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(records[i]["schema"], "bafsynth-bench");
    for (const char* key : {"instance", "mode", "status", "decisions", "iterations", "sat_calls",
                            "maxsat_calls", "time_ms"})
      EXPECT_TRUE(records[i].contains(key)) << key;
  }
  const json& summary = records[3];
  EXPECT_EQ(summary["schema"], "bafsynth-bench-summary");
  EXPECT_EQ(summary["instances"], 3);
  EXPECT_EQ(summary["families"]["small"]["solved"], 2);
  EXPECT_EQ(summary["families"]["other"]["realizable"], 1);
}

TEST_F(CliTest, BenchEmptyDirectoryAndBadFiles) {
  fs::create_directories(path("empty"));
  Outcome r = run({"bench", path("empty")});
  EXPECT_EQ(r.code, cli::kOk);
  json s = json::parse(r.out);
  EXPECT_EQ(s["instances"], 0);
  EXPECT_TRUE(s["families"].empty());

  write("mixed/good.qdimacs", testing::four_clause_qdimacs());
  write("mixed/junk.qdimacs", "not a formula\n");
  r = run({"bench", path("mixed"), "--json", path("mixed.jsonl")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.err.find("warning: junk.qdimacs"), std::string::npos);
  std::istringstream lines(slurp(path("mixed.jsonl")));
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(json::parse(first)["status"], "realizable");
  EXPECT_EQ(json::parse(second)["status"], "error");
}

TEST_F(CliTest, BenchTimeoutRecord) {
  write("slow/id24.qdimacs", testing::identity_qdimacs(24));
  Outcome r = run({"bench", path("slow"), "--no-partition", "--timeout", "1"});
  ASSERT_EQ(r.code, cli::kOk);
  std::istringstream lines(r.out);
  std::string first;
  std::getline(lines, first);
  EXPECT_EQ(json::parse(first)["status"], "timeout");
}

TEST_F(CliTest, EnvironmentOverrides) {
  const std::string spec = write("four.qdimacs", testing::four_clause_qdimacs());
  ::setenv("BAFSYNTH_MODE", "mss-enum", 1);
  Outcome r = run({"synth", spec, "--dl", path("e.dl"), "--json", "-"});
  ::unsetenv("BAFSYNTH_MODE");
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(json::parse(r.out)["mode"], "mss-enum");
  // An explicit flag wins over the environment.
  ::setenv("BAFSYNTH_MODE", "mss-enum", 1);
  r = run({"synth", spec, "--mode", "mfs-enum", "--dl", path("e.dl"), "--json", "-"});
  ::unsetenv("BAFSYNTH_MODE");
  EXPECT_EQ(json::parse(r.out)["mode"], "mfs-enum");
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5; ++i) {
    Specification s = testing::random_spec(rng);
    const std::string spec = write("r.qdimacs", to_qdimacs(s));
    Outcome a = run({"synth", spec, "--dl", path("a.dl"), "--json", path("a.json")});
    Outcome b = run({"synth", spec, "--dl", path("b.dl"), "--json", path("b.json")});
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(slurp(path("a.dl")), slurp(path("b.dl")));
    json ja = json::parse(slurp(path("a.json")));
    json jb = json::parse(slurp(path("b.json")));
    ja.erase("time_ms");
    jb.erase("time_ms");
    EXPECT_EQ(ja, jb);
    fs::remove(path("a.dl"));
    fs::remove(path("b.dl"));
  }
}

}  // namespace
}  // namespace bafsynth
