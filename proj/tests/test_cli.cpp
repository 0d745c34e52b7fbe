#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args) {
  const std::string cmd = std::string(SPECGAP_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "specgap_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Bounds, HardSpheres) {
  const auto r = cli("bounds --gamma 1");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  const double R = std::sqrt(1.0 / 8.0);
  EXPECT_NEAR(j["S_Bo_lower"].get<double>(), M_PI * R * std::exp(-0.5) / 24.0, 1e-12);
  EXPECT_NEAR(j["S_La_lower"].get<double>() / j["S_Bo_lower"].get<double>(), 6.0, 1e-12);
  EXPECT_NEAR(j["lambda0_Bo"].get<double>(), 4.0 * M_PI / 3.0, 1e-12);
}

TEST(Bounds, SmallGammaLimit) {
  const auto r = cli("bounds --gamma 1e-4");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["optimized_Bo"]["bound"].get<double>(), M_PI / 24.0, 1e-3);
}

TEST(ExitCodes, HypothesisViolationIsTwo) {
  EXPECT_EQ(cli("bounds --phi constant:0").status, 2);
  EXPECT_EQ(cli("verify --suite lemma3 --b linear --n 1").status, 2);
}

TEST(ExitCodes, BadInputIsOne) {
  EXPECT_EQ(cli("gap --truncation 1").status, 1);
  EXPECT_EQ(cli("grazing --h v1v2 --eps 0.1,0.2").status, 1);
  EXPECT_EQ(cli("verify --suite nonsense --n 1").status, 1);
}

TEST(Verify, CmcvAtGammaZero) {
  const auto r = cli("verify --suite cmcv --gamma 0 --n 2");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line, last;
  int records = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    last = line;
    ++records;
  }
  EXPECT_EQ(records, 3);
  const auto s = nlohmann::json::parse(last)["summary"];
  EXPECT_EQ(s["k_gamma"].get<double>(), 0.25);
  EXPECT_EQ(s["fail"].get<int>(), 0);
  EXPECT_EQ(s["pass"].get<int>(), 2);
}

TEST(Gap, LandauMaxwell) {
  const auto r = cli("gap --operator landau --phi constant:1 --truncation 4");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["gap"].get<double>(), 8.0, 1e-10);
  EXPECT_EQ(j["multiplicity"].get<int>(), 4);
  EXPECT_EQ(j["normalization"], "unit-mass");
}

TEST(Dissipation, LandauInvariantVanishes) {
  const auto r = cli("dissipation --operator landau --h energy --phi constant:1");
  ASSERT_EQ(r.status, 0);
  EXPECT_LT(std::abs(nlohmann::json::parse(r.out)["value"].get<double>()), 1e-8);
}

TEST(Grazing, CsvShape) {
  const auto r = cli("grazing --h v1v2 --phi constant:1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("eps,d_boltzmann,c_times_d_landau,rel_error\n", 0), 0u);
  const auto pos = r.out.find("# fitted_order=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(r.out.substr(pos + 15)), 0.8);
}

TEST(Grazing, InvariantGivesZeros) {
  const auto r = cli("grazing --h energy --phi constant:1");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line) && line[0] != '#') {
    EXPECT_EQ(line.substr(line.find(',')), ",0,0,0") << line;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Grazing, Lambda0Mode) {
  const auto r = cli("grazing --lambda0");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("eps,lambda0,limit,rel_error\n", 0), 0u);
}

TEST(Config, RerunIsByteIdentical) {
  const auto a = scratch("mc.json"), b = scratch("mc_rerun.json");
  ASSERT_EQ(cli("dissipation --h v1v2 --method monte-carlo --samples 20000 --seed 5 --threads 1 --out " + a.string())
                .status,
            0);
  ASSERT_TRUE(std::filesystem::exists(a.string() + ".config.json"));
  ASSERT_EQ(cli("--config " + a.string() + ".config.json --threads 3 --out " + b.string()).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}
