#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "amb/cli.hpp"

namespace amb {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const char* name) { return (fs::path(AMB_CORPUS_DIR) / name).string(); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// A scratch file removed at scope exit.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& text) : path_(fs::temp_directory_path() / name) {
    std::ofstream(path_) << text;
  }
  ~TempFile() { fs::remove(path_); }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
  ~EnvGuard() { unsetenv(name_); }

 private:
  const char* name_;
};

TEST(Cli, CheckGtos) {
  auto r = run({"check", corpus("gtos.amb")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  auto ls = lines(r.out);
  EXPECT_GE(ls.size(), 8u);
  for (const auto& l : ls) {
    if (l.rfind("main", 0) == 0) continue;
    EXPECT_NE(l.find("accepted"), std::string::npos) << l;
  }
}

TEST(Cli, CheckRejectsIllTypedDefinition) {
  TempFile f("amb_cli_bad.amb", "def bad : nat = Amb(0, 1);\ndef good : nat = 0;\n");
  auto r = run({"check", f.str()});
  EXPECT_EQ(r.code, cli::kDomainError);
  EXPECT_NE(r.out.find("bad : nat  rejected"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("good : nat  accepted"), std::string::npos) << r.out;
}

TEST(Cli, GrayToSdWithUndefinedFirstDigit) {
  auto r = run({"gray2sd", "--x", "0/1", "--bot-at", "0", "--digits", "10"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u) << r.out;
  EXPECT_EQ(ls[0], "# schedule: rr");
  std::string zeros;
  for (int i = 0; i < 10; ++i) zeros += " 0";
  EXPECT_EQ(ls[1], zeros);
}

TEST(Cli, DataOfAmb01) {
  auto r = run({"data", corpus("amb01.amb"), "--depth", "4"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"0", "1"}));
}

TEST(Cli, RunPrintsValue) {
  auto r = run({"run", corpus("amb01.amb")});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 2u);
  EXPECT_EQ(ls[0], "# schedule: rr");
  EXPECT_TRUE(ls[1] == "value: 0" || ls[1] == "value: 1") << ls[1];
}

TEST(Cli, SeedIsEchoed) {
  auto r = run({"run", corpus("amb01.amb"), "--seed", "42"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(lines(r.out)[0], "# schedule: seeded, seed: 42");
  auto j = nlohmann::json::parse(run({"run", corpus("amb01.amb"), "--seed", "42", "--json"}).out);
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["schedule"], "seeded");
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const std::vector<std::vector<std::string>> commands{
      {"run", corpus("gtos.amb"), "--seed", "7", "--depth", "20", "--fuel", "3000"},
      {"trace", corpus("amb01.amb"), "--seed", "1"},
      {"gray2sd", "--x", "1/3", "--seed", "5", "--digits", "12"},
      {"gray2sd", "--x", "-2/7", "--delays", "3,1,4", "--digits", "8"},
      {"enumerate", corpus("amb01.amb"), "--steps", "6"},
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << c[0];
  }
}

TEST(Cli, JsonForEverySubcommand) {
  const std::vector<std::vector<std::string>> commands{
      {"check", corpus("gtos.amb"), "--json"},
      {"run", corpus("amb01.amb"), "--json"},
      {"trace", corpus("amb01.amb"), "--json"},
      {"data", corpus("amb01.amb"), "--json", "--depth", "4"},
      {"enumerate", corpus("amb01.amb"), "--json"},
      {"logic", corpus("reals.cfp"), "--show", "tau", "--json"},
      {"gray2sd", "--x", "1/3", "--digits", "4", "--json"},
  };
  for (const auto& c : commands) {
    auto r = run(c);
    EXPECT_EQ(r.code, cli::kOk) << c[0] << ": " << r.err;
    nlohmann::json j;
    ASSERT_NO_THROW(j = nlohmann::json::parse(r.out)) << c[0] << ": " << r.out;
    EXPECT_EQ(j["command"], c[0]);
  }
}

TEST(Cli, JsonMirrorsText) {
  auto j = nlohmann::json::parse(run({"data", corpus("amb01.amb"), "--json", "--depth", "4"}).out);
  EXPECT_EQ(j["elements"], nlohmann::json::array({"0", "1"}));
  j = nlohmann::json::parse(run({"gray2sd", "--x", "0", "--bot-at", "0", "--digits", "5", "--json"}).out);
  EXPECT_EQ(j["digits"], nlohmann::json::array({0, 0, 0, 0, 0}));
  EXPECT_EQ(j["complete"], true);
}

TEST(Cli, LogicShowsTau) {
  auto r = run({"logic", corpus("reals.cfp"), "--show", "tau", "--name", "S", "--name", "G"});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"S: stream(3)", "G: stream(2)"}));
  r = run({"logic", corpus("reals.cfp"), "--show", "admissible", "--name", "NonAdm"});
  EXPECT_EQ(lines(r.out), (std::vector<std::string>{"NonAdm: no"}));
}

TEST(Cli, TraceFile) {
  fs::path p = fs::temp_directory_path() / "amb_cli_trace.txt";
  auto r = run({"run", corpus("amb01.amb"), "--trace", p.string()});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  std::ifstream in(p);
  std::string first;
  ASSERT_TRUE(std::getline(in, first));
  EXPECT_EQ(first, "0  c-iii  root  Left");
  fs::remove(p);
}

TEST(Cli, TraceOnStdout) {
  auto r = run({"trace", corpus("amb01.amb")});
  EXPECT_EQ(r.code, cli::kOk);
  auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 3u);
  EXPECT_EQ(ls[1], "0  c-iii  root  Left");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(run({"run"}).code, cli::kUsageError);
  EXPECT_EQ(run({"run", corpus("amb01.amb"), "--fuel", "0"}).code, cli::kUsageError);
  EXPECT_EQ(run({"run", corpus("amb01.amb"), "--seed", "1", "--schedule", "rr"}).code, cli::kUsageError);
  EXPECT_EQ(run({"logic", corpus("reals.cfp"), "--show", "colour"}).code, cli::kUsageError);
  EXPECT_EQ(run({"check", "/no/such/file.amb"}).code, cli::kUsageError);
  auto r = run({"gray2sd"});
  EXPECT_EQ(r.code, cli::kUsageError);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, cli::kOk); }

TEST(Cli, DomainErrors) {
  EXPECT_EQ(run({"gray2sd", "--x", "3/2"}).code, cli::kDomainError);
  TempFile f("amb_cli_loop.amb", "main = rec \\x. x;\n");
  EXPECT_EQ(run({"run", f.str(), "--fuel", "50"}).code, cli::kOk);
  auto r = run({"run", f.str(), "--fuel", "50", "--strict"});
  EXPECT_EQ(r.code, cli::kDomainError);
  TempFile g("amb_cli_syntax.amb", "main = (;\n");
  r = run({"run", g.str()});
  EXPECT_EQ(r.code, cli::kDomainError);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
}

TEST(Cli, EnvironmentDefaults) {
  {
    EnvGuard e("AMB_FUEL", "7");
    auto j = nlohmann::json::parse(run({"run", corpus("gtos.amb"), "--json"}).out);
    EXPECT_EQ(j["fuel"], 7);
    EXPECT_LE(j["steps"].get<int>(), 7);
    j = nlohmann::json::parse(run({"run", corpus("gtos.amb"), "--json", "--fuel", "9"}).out);
    EXPECT_EQ(j["fuel"], 9);
  }
  {
    EnvGuard e("AMB_SEED", "11");
    EXPECT_EQ(lines(run({"run", corpus("amb01.amb")}).out)[0], "# schedule: seeded, seed: 11");
  }
  {
    EnvGuard e("AMB_DEPTH", "zero");
    EXPECT_EQ(run({"run", corpus("amb01.amb")}).code, cli::kUsageError);
  }
}

TEST(Cli, ParallelWarns) {
  auto r = run({"run", corpus("amb01.amb"), "--parallel"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.err.find("not reproducible"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace amb
