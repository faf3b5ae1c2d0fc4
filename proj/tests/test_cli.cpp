#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qsc/report.hpp"

using namespace qsc;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + QSC_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) { return ::testing::TempDir() + "qsc_cli_" + name; }

}  // namespace

TEST(Cli, CouponSpectrumCsv) {
  const auto r = run("spectrum coupon 3 2 1 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "s,eigenvalue,multiplicity\n0,0.66666666666666663,1\n1,0.16666666666666666,2\n");
  const auto e = run("spectrum coupon 3 2 1 --tower exact");
  EXPECT_EQ(e.out, "s,eigenvalue,multiplicity\n0,2/3,1\n1,1/6,2\n");
}

TEST(Cli, PacSpectrumExactAndJson) {
  const auto r = run("spectrum pac 2 1/8 2 --tower exact");
  EXPECT_EQ(r.out, "h,eigenvalue,multiplicity\n0,19/32,1\n1,3/16,2\n2,1/32,1\n");
  const auto j = Json::parse(run("--format json spectrum pac 2 1/8 2 --tower exact").out);
  EXPECT_EQ(j.at("trace"), "1");
  EXPECT_EQ(j.at("entries").size(), 3u);
  EXPECT_EQ(j.at("entries")[1].at("multiplicity"), "2");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("verify walk_identity").code, 0);
  EXPECT_EQ(run("verify unknown_lemma").code, 2);
  EXPECT_EQ(run("verify control_inverted").code, 1);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("spectrum pac 1 1/8").code, 2);
  EXPECT_EQ(run("spectrum pac 1 1/2 1").code, 2);      // eps outside (0, 1/4)
  EXPECT_EQ(run("spectrum coupon 6 2 1").code, 2);     // k < m
  EXPECT_EQ(run("spectrum agnostic 2 1/8 2 --tower exact").code, 2);
  EXPECT_EQ(run("--format xml spectrum pac 1 1/8 1").code, 2);
  EXPECT_EQ(run("verify expct_ub --grid /nonexistent.grid").code, 2);
  EXPECT_EQ(run("distinguish pgm pac 13 1/8 1").code, 2);  // beyond the dense limit
  EXPECT_EQ(run("bound nope").code, 2);
  EXPECT_EQ(run("bound miab_ub n=100 m=50 c=1").code, 2);  // outside hypotheses
}

TEST(Cli, VerifyDeterministicAndRoundTrips) {
  const std::string grid = tmp_path("dom.grid");
  std::ofstream(grid) << "n = [40, 80]\nm = 1..2\ntf = 5\n";
  const std::string args = "verify dom1 --grid " + grid + " --seed 5 --trials 300 --format json";
  const auto a = run(args);
  const auto b = run(args);
  const auto c = run(args, "QSC_WORKERS=3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto parsed = report_from_json(Json::parse(a.out));
  VerifyOptions o;
  o.seed = 5;
  o.mc_trials = 300;
  auto mem = verify("dom1", load_grid(grid), o);
  mem.runtime_ms = 0;
  EXPECT_TRUE(parsed == mem);

  const auto csv = run("verify dom1 --grid " + grid + " --seed 5 --trials 300");
  EXPECT_TRUE(report_from_csv(csv.out) == mem);
  EXPECT_EQ(csv.out.find("runtime_ms"), std::string::npos);
  EXPECT_NE(run("verify dom1 --grid " + grid + " --timing").out.find("# runtime_ms: "), std::string::npos);
}

TEST(Cli, WorkersEnv) {
  EXPECT_EQ(run("verify walk_identity", "QSC_WORKERS=0").code, 2);
  EXPECT_EQ(run("verify walk_identity", "QSC_WORKERS=abc").code, 2);
  EXPECT_EQ(run("verify walk_identity", "QSC_WORKERS=2").code, 0);
}

TEST(Cli, OutFile) {
  const std::string path = tmp_path("out.csv");
  std::remove(path.c_str());
  const auto r = run("spectrum coupon 3 2 1 --out " + path);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_file(path), "s,eigenvalue,multiplicity\n0,0.66666666666666663,1\n1,0.16666666666666666,2\n");
}

TEST(Cli, Distinguish) {
  auto value = [](const std::string& out) {
    const auto line = out.substr(out.find('\n') + 1);
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    return std::stod(line.substr(c1 + 1, c2 - c1 - 1));
  };
  EXPECT_NEAR(value(run("distinguish pgm coupon 3 2 1").out), 8.0 / 9.0, 1e-9);
  EXPECT_NEAR(value(run("distinguish hc coupon 3 2 1").out), 0.94281, 1e-5);
  const double opt = value(run("distinguish opt coupon 3 2 1").out);
  EXPECT_GE(opt, 8.0 / 9.0 - 1e-9);
  EXPECT_LE(opt, 0.94281 + 1e-5);
  // The CLI takes the spectrum route here; the Gram matrix gives the same number.
  EXPECT_NEAR(value(run("distinguish hc coupon 6 4 2").out), hc_from_gram(gram_coupon(6, 4, 2)), 1e-9);
  EXPECT_NEAR(value(run("distinguish hc coupon 6 2 2").out), hc_from_gram(gram_coupon(6, 2, 2)), 1e-9);
}

TEST(Cli, EntropyAndWalk) {
  const auto e = run("entropy coupon 3 2 1");
  EXPECT_EQ(e.code, 0);
  const auto at = e.out.find("entropy,");
  ASSERT_NE(at, std::string::npos);
  EXPECT_NEAR(std::stod(e.out.substr(at + 8)), 1.2516291673878228, 1e-14);
  const auto w = run("walk dp w 3 2 1 --tower exact");
  EXPECT_EQ(w.out, "t,s,probability\n1,0,2/3\n1,1,1/3\n");
  const auto all = run("walk dp coupon 2 1 2 --tower exact --all");
  EXPECT_EQ(all.out, "t,s,probability\n0,0,1\n0,1,0\n1,0,1/2\n1,1,1/2\n2,0,1/4\n2,1,3/4\n");
  const auto mc1 = run("walk mc w 20 18 10 --seed 4 --trials 2000");
  const auto mc2 = run("walk mc w 20 18 10 --seed 4 --trials 2000");
  EXPECT_EQ(mc1.code, 0);
  EXPECT_EQ(mc1.out, mc2.out);
  EXPECT_NE(mc1.out, run("walk mc w 20 18 10 --seed 5 --trials 2000").out);
  const auto diff = run("walk dp diff 20 2 3");
  EXPECT_EQ(diff.code, 0);
  EXPECT_EQ(diff.out.rfind("t,s,probability\n3,-3,", 0), 0u);
}

TEST(Cli, DemoAndBound) {
  const auto g = run("demo gap --n 16,25,36 --kappa 1,2,4");
  EXPECT_EQ(g.code, 0);
  EXPECT_NE(g.out.find("# first: n=16 kappa=1"), std::string::npos);
  const auto j = Json::parse(run("--format json demo gap").out);
  EXPECT_EQ(j.at("ok"), true);
  const auto t = run("demo threshold --nu 1/2000");
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find(",4320,"), std::string::npos);
  const auto b = run("bound qcc_c0 delta=1/40");
  EXPECT_NE(b.out.find("qcc_c0,0.0989"), std::string::npos);
  EXPECT_EQ(run("bound --list").code, 0);
  EXPECT_EQ(run("verify --list").code, 0);
}

TEST(Cli, ShippedGridFilesParse) {
  for (const char* name : {"walk_identity.grid", "dom1.grid", "dom2.grid", "walk_bounds.grid", "expct_lb.grid",
                           "hc_sandwich.grid", "entropy_pac.grid", "mi_lb.grid", "mi_ub.grid", "qcc_chain.grid",
                           "mm_bds.grid"}) {
    const std::string path = std::string(QSC_GRID_DIR) + "/" + name;
    EXPECT_NO_THROW(load_grid(path)) << path;
  }
}
