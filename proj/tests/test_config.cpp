#include "vhj/config.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace vhj;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const fs::path& dir)
{
  const std::string cmd = "cd '" + dir.string() + "' && '" VHJLAB_PATH "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name)
{
  const fs::path d = fs::temp_directory_path() / ("vhjlab_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

} // namespace

TEST(Config, DerivedExponents)
{
  const auto c = Config::parse("gamma=3\nsigma=1\n");
  EXPECT_DOUBLE_EQ(c.gamma_prime(), 1.5);
  EXPECT_DOUBLE_EQ(c.q0(), 3.0 / 1.5);
  EXPECT_DOUBLE_EQ(c.alpha0(), 0.5);
}

TEST(Config, GammaMustExceedTwo)
{
  try {
    Config::parse("gamma=2");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "gamma must exceed 2");
  }
}

TEST(Config, RejectsUnknownAndMalformed)
{
  EXPECT_THROW(Config::parse("gama=3"), std::invalid_argument);
  EXPECT_THROW(Config::parse("gamma"), std::invalid_argument);
  EXPECT_THROW(Config::parse("gamma=abc"), std::invalid_argument);
  EXPECT_THROW(Config::parse("sigma=1.5"), std::invalid_argument);
  EXPECT_THROW(Config::parse("h0=2\nh1=1"), std::invalid_argument);
  EXPECT_THROW(Config::parse("gamma=3\ngamma=4"), std::invalid_argument);
}

TEST(Config, EmptyFileGivesDefaults)
{
  const auto c = Config::parse("# nothing\n\n");
  EXPECT_EQ(c.canonical(), Config().canonical());
  EXPECT_EQ(c.get("gamma"), "3");
  const fs::path d = scratch("manifest");
  write_manifest((d / "m.txt").string(), c, "ldiff", {}, {});
  const std::string m = slurp(d / "m.txt");
  EXPECT_THAT(m, testing::HasSubstr("param.gamma=3\n"));
  EXPECT_THAT(m, testing::HasSubstr("config_hash=" + c.hash()));
  EXPECT_THAT(m, testing::HasSubstr("seed="));
}

TEST(Config, HashIgnoresSpellingAndOutputPrefix)
{
  EXPECT_EQ(Config::parse("gamma=3").hash(), Config::parse("gamma = 3.0").hash());
  EXPECT_EQ(Config::parse("out=a").hash(), Config::parse("out=b").hash());
  EXPECT_NE(Config::parse("gamma=3").hash(), Config::parse("gamma=4").hash());
  EXPECT_EQ(Config().hash().size(), 16u);
}

TEST(Cli, UnknownSubcommandIsUsageError)
{
  EXPECT_EQ(run("frobnicate", scratch("unknown")), 2);
  EXPECT_EQ(run("", scratch("none")), 2);
}

TEST(Cli, InvalidValueIsUsageError)
{
  EXPECT_EQ(run("ldiff --set gamma=2", scratch("gamma")), 2);
}

TEST(Cli, SweepRowCountAndManifest)
{
  const fs::path d = scratch("sweep");
  ASSERT_EQ(run("sweep-maxreg --out s --q 1.6,2.0,2.4 --eps 0.25,0.125,0.0625 --dx 0.03125", d), 0);
  std::ifstream in(d / "s_maxreg.csv");
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    rows += !line.empty() && line[0] != '#';
  EXPECT_EQ(rows, 9);
  EXPECT_TRUE(fs::exists(d / "s_manifest.txt"));
}

TEST(Cli, IdenticalConfigGivesIdenticalCsv)
{
  const fs::path d = scratch("determinism");
  for (const char* out : {"a", "b"}) {
    const std::string o = std::string(" --out ") + out;
    ASSERT_EQ(run("solve-hj --grid 1,1,0.0625,1,0.015625" + o, d), 0);
    ASSERT_EQ(run("seminorm --set pair_budget=1000 --set pair_samples=5000" + o, d), 0);
    ASSERT_EQ(run("ldiff --samples 2000" + o, d), 0);
  }
  for (const char* f : {"solution.csv", "log.csv", "report.csv", "seminorm.csv", "ldiff.csv"})
    EXPECT_EQ(slurp(d / (std::string("a_") + f)), slurp(d / (std::string("b_") + f))) << f;
}

TEST(Cli, EveryRowCarriesTheHash)
{
  const fs::path d = scratch("hash");
  ASSERT_EQ(run("ldiff --samples 500 --out h", d), 0);
  const std::string manifest = slurp(d / "h_manifest.txt");
  const auto pos = manifest.find("config_hash=");
  const std::string hash = manifest.substr(pos + 12, 16);
  std::ifstream in(d / "h_ldiff.csv");
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#')
      EXPECT_EQ(line.substr(0, 16), hash);
}

TEST(Cli, NumericalFailureExitCode)
{
  const fs::path d = scratch("numerical");
  // A right-hand side of 1e300 overflows the Hamiltonian.
  std::ofstream f(d / "f.csv");
  f << "# grid: 1,1,0.5,1,0.5,box\n";
  for (double t : {0.0, 0.5, 1.0})
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
      f << t << ',' << x << ",1e300\n";
  f.close();
  EXPECT_EQ(run("solve-hj --grid 1,1,0.5,1,0.5 --f-file f.csv --out n", d), 3);
}
