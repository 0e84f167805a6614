#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "winvex/cli.hpp"

using namespace winvex;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  auto p = fs::temp_directory_path() / ("winvex_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kConfig = R"([functions]
h = "z1"
eta = "z1 - y1 + 6"
w = "y1 + 6"

[domain]
kind = full-space
sampling_box = "-10,10"

[check]
pair_samples = 200
)";

}  // namespace

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(run({"--help"}).code, 0);
  auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(kToolVersion), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check", "--class", "w-preinvex"}).code, 2);
  EXPECT_EQ(run({"catalog", "run", "no-such-fixture"}).code, 2);
  EXPECT_EQ(run({"--eta-mode", "sideways", "catalog", "list"}).code, 2);
}

TEST(Cli, CatalogList) {
  auto r = run({"catalog", "list"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("preinvex-minus7"), std::string::npos);
  EXPECT_NE(r.out.find("piecewise-11"), std::string::npos);
}

TEST(Cli, CheckRefutedExitsOne) {
  auto dir = temp_dir();
  write(dir / "run.cfg", kConfig);
  auto r = run({"--config", (dir / "run.cfg").string(), "check", "--class", "w-preinvex"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("refuted"), std::string::npos);
  auto ok = run({"--config", (dir / "run.cfg").string(), "check", "--class", "w-prequasi"});
  EXPECT_EQ(ok.code, 1);
  auto q = run({"--config", (dir / "run.cfg").string(), "check", "--class", "w-set-invex"});
  EXPECT_EQ(q.code, 0);
}

TEST(Cli, BadConfigExitsTwo) {
  auto dir = temp_dir();
  write(dir / "bad.cfg", "[functions]\nh = \"z1 +\"\neta = \"z1\"\nw = \"y1\"\n[domain]\nsampling_box = \"0,1\"\n");
  auto r = run({"--config", (dir / "bad.cfg").string(), "check", "--class", "w-preinvex"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("functions.h"), std::string::npos);
  EXPECT_EQ(run({"--config", (dir / "missing.cfg").string(), "classify"}).code, 2);
}

TEST(Cli, CatalogRunJsonIsDeterministicAndReverifies) {
  auto dir = temp_dir();
  auto a = run({"--seed", "7", "--json", "catalog", "run", "--all"});
  auto b = run({"--seed", "7", "--json", "catalog", "run", "--all"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = Json::parse(a.out);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(j.at("fixture_reports").size(), 6u);

  write(dir / "report.json", a.out);
  auto rv = run({"report", "--in", (dir / "report.json").string(), "--reverify"});
  EXPECT_EQ(rv.code, 0) << rv.out << rv.err;
}

TEST(Cli, OutFileMatchesStdout) {
  auto dir = temp_dir();
  const auto path = (dir / "out.json").string();
  auto r = run({"--json", "--out", path, "catalog", "run", "shifted-plus6"});
  EXPECT_EQ(r.code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(Json::parse(ss.str()), Json::parse(r.out));
}

TEST(Cli, ExportedConfigsDriveClassify) {
  auto dir = temp_dir();
  EXPECT_EQ(run({"catalog", "export", "--dir", dir.string()}).code, 0);
  for (const char* id : {"preinvex-minus7", "quintic"}) {
    const auto cfg = (dir / (std::string(id) + ".cfg")).string();
    ASSERT_TRUE(fs::exists(cfg)) << cfg;
    auto r = run({"--config", cfg, "--samples", "300", "classify"});
    EXPECT_EQ(r.code, 0) << id << "\n" << r.out << r.err;
  }
}

TEST(Cli, ClassifyExpectMismatchExitsOne) {
  auto dir = temp_dir();
  write(dir / "run.cfg", std::string(kConfig) + "\n[expect]\nw-preinvex = consistent\n");
  auto r = run({"--config", (dir / "run.cfg").string(), "classify"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, SetCheckBothModes) {
  auto dir = temp_dir();
  write(dir / "set.cfg", R"cfg([functions]
eta = "z1 * (y1 - 2)"
w = "y1 + 2"

[domain]
kind = half-line
lower = 0
sampling_box = "0,100"
)cfg");
  auto w = run({"--config", (dir / "set.cfg").string(), "set-check", "--mode", "w"});
  EXPECT_EQ(w.code, 0);
  auto both = run({"--config", (dir / "set.cfg").string(), "set-check", "--mode", "both"});
  EXPECT_EQ(both.code, 1);
}

TEST(Cli, TheoremsAndOptimize) {
  auto dir = temp_dir();
  write(dir / "opt.cfg", R"([functions]
h = "z1 + 5"
eta = "z1 - y1 - 6"
w = "y1 - 7"

[domain]
sampling_box = "-10,10"

[check]
pair_samples = 300

[problem]
g1 = "1 - z1"
box = "-10,10"
)");
  auto t = run({"--config", (dir / "opt.cfg").string(), "theorems"});
  EXPECT_EQ(t.code, 0) << t.out << t.err;
  auto o = run({"--config", (dir / "opt.cfg").string(), "--json", "optimize"});
  EXPECT_EQ(o.code, 0) << o.err;
  auto j = Json::parse(o.out);
  ASSERT_FALSE(j.at("solve_results").empty());
}
