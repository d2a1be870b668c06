#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "dot_check.hpp"
#include "example_types.hpp"

namespace sessub {
namespace {

namespace fs = std::filesystem;
using namespace sessub::testing;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) result.push_back(l);
  return result;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs each test in a scratch directory so relative outputs stay contained.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    old_ = fs::current_path();
    dir_ = fs::temp_directory_path() /
           ("sessub_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    fs::current_path(dir_);
  }
  void TearDown() override {
    fs::current_path(old_);
    fs::remove_all(dir_);
  }

  fs::path old_;
  fs::path dir_;
};

const std::regex kVerdict(R"(^(sync|async|fair): (true|false|maybe) \(\d+ ms\)$)");

TEST_F(CliTest, DefaultIsSync) {
  const Outcome r = run({kHospitalClient2, kHospitalClient});
  EXPECT_EQ(r.code, 0);
  ASSERT_EQ(lines(r.out).size(), 1u);
  EXPECT_TRUE(std::regex_match(lines(r.out)[0], kVerdict));
  EXPECT_EQ(r.out.rfind("sync: true (", 0), 0u);
}

TEST_F(CliTest, AllPrintsThreeLines) {
  const Outcome r = run({"--all", kSatelliteControl2, kSatelliteControl});
  EXPECT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  for (const auto& l : ls) EXPECT_TRUE(std::regex_match(l, kVerdict)) << l;
  EXPECT_EQ(ls[0].rfind("sync: false", 0), 0u);
  EXPECT_EQ(ls[1].rfind("async: false", 0), 0u);
  EXPECT_EQ(ls[2].rfind("fair: true", 0), 0u);
}

TEST_F(CliTest, ReadsFiles) {
  std::ofstream("sub.st") << kHospitalClient3 << "\n";
  std::ofstream("sup.st") << kHospitalClient;
  const Outcome r = run({"--async", "--nofallback", "sub.st", "sup.st"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("async: true", 0), 0u);
}

TEST_F(CliTest, ParseErrorExitsTwo) {
  const Outcome r = run({"+{a;", "end"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("t1:"), std::string::npos);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"end"}).code, 2);
  EXPECT_EQ(run({"--gayhole", "--kozen", "end", "end"}).code, 2);
  EXPECT_EQ(run({"--async", "end", "end", "0"}).code, 2);
  EXPECT_EQ(run({"--nosuchflag", "end", "end"}).code, 2);
  EXPECT_EQ(run({"--oracle", "lossy", "end", "end"}).code, 2);
}

TEST_F(CliTest, UncontrollableExitsThree) {
  const Outcome r = run({"--fair", kHospitalClient3, kHospitalClient});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("not controllable"), std::string::npos);
  // Under --all the other checks still report.
  const Outcome all = run({"--all", kHospitalClient3, kHospitalClient});
  EXPECT_EQ(all.code, 0);
  EXPECT_EQ(lines(all.out).size(), 2u);
}

TEST_F(CliTest, Dual) {
  const Outcome r = run({"--dual", kSatelliteControl2, kSatelliteControl});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "rec X.+{tm;X, over;rec Y.&{tc;Y, done;end}}\n"
            "rec X.&{tc;X, done;rec Y.+{tm;Y, over;end}}\n");
}

TEST_F(CliTest, PicsWritesValidDot) {
  const Outcome r = run({"--pics", kHospitalClient2Bad, kHospitalClient});
  EXPECT_EQ(r.code, 0);
  const std::string dot = slurp("tmp/simulation_tree.dot");
  EXPECT_EQ(dot_error(dot), "");
  EXPECT_NE(dot.find("fillcolor=red"), std::string::npos);

  run({"--pics", "--out", "again.dot", kHospitalClient2Bad, kHospitalClient});
  EXPECT_EQ(slurp("again.dot"), dot);
}

TEST_F(CliTest, PicsWithAllNamesPerAlgorithm) {
  run({"--all", "--debug", "--out", "g/sim.dot", kSatelliteControl2, kSatelliteControl});
  for (const char* f : {"g/sim_sync.dot", "g/sim_async.dot", "g/sim_fair.dot"}) {
    ASSERT_TRUE(fs::exists(f)) << f;
    EXPECT_EQ(dot_error(slurp(f)), "") << f;
  }
}

TEST_F(CliTest, LtsFiles) {
  const Outcome r = run({"--lts", kHospitalServer, kSatelliteControl});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(dot_error(slurp("tmp/lts_t1.dot")), "");
  EXPECT_EQ(dot_error(slurp("tmp/lts_t2.dot")), "");
  EXPECT_NE(slurp("tmp/lts_t1.dot").find("digraph t1"), std::string::npos);
}

TEST_F(CliTest, Oracle) {
  const Outcome ok = run({"--oracle", "rendezvous", kHospitalClient2, kHospitalClient});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("oracle (rendezvous): no violation (", 0), 0u);
  const Outcome bad = run({"--oracle", "rendezvous", kHospitalClient2Bad, kHospitalClient});
  EXPECT_EQ(bad.out.rfind("oracle (rendezvous): unreceivable after [1:!nd", 0), 0u) << bad.out;
}

TEST_F(CliTest, Help) {
  const Outcome r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--nofallback"), std::string::npos);
}

}  // namespace
}  // namespace sessub
