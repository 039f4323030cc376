#include <gtest/gtest.h>

#include <unistd.h>

#include <json.hpp>

#include "cli_runner.hpp"
#include "fixtures.hpp"

using namespace heistsp;
using cli_runner::run;
using cli_runner::slurp;

namespace {

nlohmann::json json_of(const cli_runner::Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, BetaCommand) {
  cli_runner::TempDir dir("beta");
  const auto seg = dir.write("seg.txt", fixtures::segment_x(8));
  auto r = run("beta " + seg + " --ball \"0.5 0 0 1\"");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json_of(r);
  EXPECT_EQ(j["beta"].get<double>(), 0.0);
  EXPECT_EQ(j["provenance"]["command"], "beta");

  const auto pair = dir.write("pair.txt", {HeisPoint(0, 0, 0), HeisPoint(0, 0, 1)});
  r = run("beta " + pair + " --ball \"0 0 0 1\" --certify 60");
  ASSERT_EQ(r.code, 0) << r.out;
  j = json_of(r);
  EXPECT_GE(j["beta"].get<double>(), 1.0 / 32.0 - j["certified_gap"].get<double>());
}

TEST(Cli, UsageAndInputErrors) {
  cli_runner::TempDir dir("err");
  auto r = run("beta " + dir.file("missing.txt") + " --ball \"0 0 0 1\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find(dir.file("missing.txt")), std::string::npos);

  std::ofstream(dir.file("bad.txt")) << "0 0 0\n1 2 oops\n";
  r = run("build " + dir.file("bad.txt"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("bad.txt:2:5"), std::string::npos) << r.out;

  const auto seg = dir.write("seg.txt", fixtures::segment_x(5));
  EXPECT_EQ(run("beta " + seg + " --ball \"0 0 1\"").code, 2);
  EXPECT_EQ(run("beta " + seg + " --ball \"0 0 0 -1\"").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("theorem-a " + seg + " --r 5").code, 2);
  EXPECT_EQ(run("build " + seg + " --eps0 1.5").code, 2);
  EXPECT_EQ(run("build " + seg + " --k-min 3").code, 2);
  EXPECT_EQ(run("carleson " + seg + " --r 9").code, 2);
  EXPECT_EQ(run("carleson " + seg + " --r 5").code, 0);
}

TEST(Cli, BuildCommand) {
  cli_runner::TempDir dir("build");
  const auto two = dir.write("two.txt", {HeisPoint(0, 0, 0), HeisPoint(0.5, 0.25, 0.125)});
  auto r = run("build " + two + " --curve-out " + dir.file("curve.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json_of(r)["curve"].size(), 2u);
  EXPECT_EQ(io::load_point_set(dir.file("curve.txt")).points.size(), 2u);

  const auto seg = dir.write("seg.txt", fixtures::segment_x(20));
  r = run("build " + seg);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json_of(r);
  EXPECT_NEAR(j["length"].get<double>(), j["diam"].get<double>(), 1e-6);
  EXPECT_EQ(j["provenance"]["config"]["C1"].get<double>(), 16.0);
  EXPECT_FALSE(j["ledger"].empty());
}

TEST(Cli, CarlesonCsv) {
  cli_runner::TempDir dir("carleson");
  const auto seg = dir.write("seg.txt", fixtures::segment_x(9));
  auto r = run("carleson " + seg + " --density 8");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("k,P.x,P.y,P.z,beta,contribution\n"), std::string::npos);
  EXPECT_NE(r.out.find("# total=0\n"), std::string::npos);

  const auto corner = dir.write("corner.txt", fixtures::corner_curve().vertices());
  r = run("carleson " + corner + " --curve --density 32");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("# length=1\n"), std::string::npos) << r.out;
  const auto pos = r.out.find("# total=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GT(std::stod(r.out.substr(pos + 8)), 0.0);
}

TEST(Cli, VerifyExitCodes) {
  cli_runner::TempDir dir("verify");
  auto r = run("verify --samples 2000 --out " + dir.file("a.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  r = run("verify --samples 2000 --debug-tamper --out " + dir.file("b.json"));
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(slurp(dir.file("b.json")));
  EXPECT_FALSE(j["exact_ok"].get<bool>());
}

TEST(Cli, ByteDeterministic) {
  cli_runner::TempDir dir("det");
  const auto pts = dir.write("pts.txt", fixtures::uniform_in_ball(Ball(HeisPoint(), 1.0), 25, 5));
  const auto corner = dir.write("corner.txt", fixtures::corner_curve().vertices());
  const std::vector<std::string> cmds{
      "beta " + pts + " --ball \"0 0 0 1\"",
      "build " + pts,
      "carleson " + pts + " --density 4",
      "carleson " + corner + " --curve --density 16 --seed 3",
      "theorem-a " + pts,
      "theorem-b " + corner + " --density 16 --seed 3",
      "verify --samples 1000",
  };
  for (const auto& c : cmds) {
    const auto a = run(c);
    const auto b = run(c);
    ASSERT_EQ(a.code, 0) << c << "\n" << a.out;
    EXPECT_EQ(a.out, b.out) << c;
  }
}
