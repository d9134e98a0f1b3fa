// Runs the mhdcert binary end to end and inspects exit codes and outputs.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBinary = MHDCERT_BINARY;
const std::string kConstants3 = std::string(MHDCERT_CONFIG_DIR) + "/constants_d3.json";
const std::string kTrkal = "--kind trkal --alpha 0.3 --beta 0.4 --gamma 0.1 --kappa 1 --lambda 2 --cutoff 2";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mhdcert_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = kBinary + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }
  std::string read(const std::string& rel) const {
    std::ifstream in(dir_ / rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  json read_json(const std::string& rel) const { return json::parse(read(rel)); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("simulate --format xml --random"), 1);
  EXPECT_EQ(run("simulate --dt -1 --random"), 1);
  EXPECT_EQ(run("simulate --config " + out("missing.toml") + " --random"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, CertifyWithoutConstantsIsConfigError) {
  EXPECT_EQ(run("certify " + kTrkal + " --t-end 0.5 --dt 0.01 --datum-error 0 --out " + out("c")), 1);
  EXPECT_NE(read("stderr.txt").find("constants"), std::string::npos);
}

TEST_F(Cli, InadmissiblePairExitsThree) {
  EXPECT_EQ(run("beltrami --kind scaled --base sine --W 1 0 0 --k 1 0 0 --scale 2 --slot 0 --cutoff 2 --out " +
                out("b")),
            3);
  EXPECT_EQ(run("beltrami --kind sinusoidal --V 1 0 0 --k 0 1 0 --C 0 1 0 --ell 1 0 0 --cutoff 2 --out " + out("b")),
            3);
}

TEST_F(Cli, BeltramiPairVerifies) {
  ASSERT_EQ(run("beltrami " + kTrkal + " --out " + out("b")), 0);
  const json doc = read_json("b/pair.json");
  EXPECT_TRUE(doc.contains("config_digest"));
}

TEST_F(Cli, SimulateIsDeterministicAndCarriesDigest) {
  const std::string args = "simulate --random --seed 7 --amplitude 0.05 --cutoff 2 --t-end 0.2 --dt 0.01 --format csv";
  ASSERT_EQ(run(args + " --out " + out("a")), 0);
  ASSERT_EQ(run(args + " --out " + out("b")), 0);
  const std::string a = read("a/trajectory.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, read("b/trajectory.csv"));
  EXPECT_EQ(a.rfind("# config_digest ", 0), 0u);
  EXPECT_FALSE(fs::exists(out("a/trajectory.json")));
  ASSERT_EQ(run("simulate --random --seed 8 --amplitude 0.05 --cutoff 2 --t-end 0.2 --dt 0.01 --format csv --out " +
                out("c")),
            0);
  EXPECT_NE(a.substr(0, a.find('\n')), read("c/trajectory.csv").substr(0, a.find('\n')));
}

TEST_F(Cli, ConfigFileBelowFlags) {
  {
    std::ofstream cfg(dir_ / "run.toml");
    cfg << "cutoff = 2\nt-end = 0.3\ndt = 0.01\nseed = 3\namplitude = 0.05\nrandom = true\nformat = \"json\"\n";
  }
  ASSERT_EQ(run("simulate --config " + out("run.toml") + " --out " + out("f")), 0);
  const json from_file = read_json("f/trajectory.json");
  EXPECT_DOUBLE_EQ(from_file["times"].back().get<double>(), 0.3);
  ASSERT_EQ(run("simulate --config " + out("run.toml") + " --t-end 0.1 --out " + out("g")), 0);
  const json overridden = read_json("g/trajectory.json");
  EXPECT_DOUBLE_EQ(overridden["times"].back().get<double>(), 0.1);
  EXPECT_NE(from_file["config_digest"], overridden["config_digest"]);
}

TEST_F(Cli, SimulatedEnergyStaysBelowDissipativeEnvelope) {
  ASSERT_EQ(run("simulate --random --seed 5 --amplitude 0.1 --cutoff 2 --t-end 1 --dt 0.005 --format json --out " +
                out("s")),
            0);
  const json doc = read_json("s/trajectory.json");
  const auto& times = doc["times"];
  const auto& norms = doc["norms"]["0"];
  const double u0 = norms[0].get<double>();
  EXPECT_NEAR(u0, 0.1, 1e-12);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_LE(norms[i].get<double>(), u0 * std::exp(-times[i].get<double>()) * (1.0 + 1e-12));
  }
}

TEST_F(Cli, CertifyExactBaseIsGlobal) {
  ASSERT_EQ(run("certify " + kTrkal + " --t-end 1 --dt 0.01 --datum-error 0 --constants " + kConstants3 +
                " --out " + out("c")),
            0);
  const json doc = read_json("c/certificate.json");
  EXPECT_TRUE(doc["global"].get<bool>());
  EXPECT_TRUE(doc["T_c"].is_null());
  for (const auto& r : doc["series"]["Rn"]) EXPECT_EQ(r.get<double>(), 0.0);
  EXPECT_EQ(read("c/certificate.csv").rfind("# config_digest " + doc["config_digest"].get<std::string>(), 0), 0u);
}

TEST_F(Cli, CertifyHugeDatumHasFiniteBlowUp) {
  ASSERT_EQ(run("certify " + kTrkal + " --t-end 1 --dt 0.001 --datum-error 5 --constants " + kConstants3 +
                " --format json --out " + out("c")),
            0);
  const json doc = read_json("c/certificate.json");
  EXPECT_FALSE(doc["global"].get<bool>());
  const double tc = doc["T_c"].get<double>();
  EXPECT_GT(tc, 0.0);
  EXPECT_LT(tc, 1.0);
}

TEST_F(Cli, RadiusOfZeroBaseIsThreshold) {
  ASSERT_EQ(run("radius --kind trkal --alpha 0 --beta 0 --gamma 0 --kappa 1 --lambda 1 --cutoff 2 --constants " +
                kConstants3 + " --out " + out("r")),
            0);
  const json doc = read_json("r/stability.json");
  const json table = json::parse(std::ifstream(kConstants3));
  double G33 = 0.0;
  for (const auto& e : table["entries"]) {
    if (e["p"].get<double>() == 3.0 && e["n"].get<double>() == 3.0) G33 = e["G"].get<double>();
  }
  ASSERT_GT(G33, 0.0);
  EXPECT_NEAR(doc["rho_n"].get<double>(), 1.0 / (std::sqrt(2.0) * G33), 1e-15);
}

TEST_F(Cli, RadiusOfTrkalBaseHandEvaluated) {
  ASSERT_EQ(run("radius " + kTrkal + " --constants " + kConstants3 + " --datum-error 1e-4 --p 4 --out " + out("r")),
            0);
  const json doc = read_json("r/stability.json");
  const json table = json::parse(std::ifstream(kConstants3));
  double G33 = 0.0, K33 = 0.0;
  for (const auto& e : table["entries"]) {
    if (e["p"].get<double>() == 3.0 && e["n"].get<double>() == 3.0) {
      G33 = e["G"].get<double>();
      K33 = e["K"].get<double>();
    }
  }
  // J_3 = 0.7 and J_4 = 0.9 for this pair, closed form
  const double Gh = std::sqrt(2.0) * G33, Kh = std::sqrt(2.0) * K33;
  EXPECT_NEAR(doc["rho_n"].get<double>(), std::exp(-Gh * 0.7 - Kh * 0.9) / Gh, 1e-15);
  EXPECT_EQ(doc["regime"], "inside_half");
  EXPECT_TRUE(doc["envelopes"]["C_p"].contains("4"));
}

TEST_F(Cli, UnresolvedGridExitsTwoAndRefinementRecovers) {
  const std::string args = "certify --random --seed 3 --amplitude 0.05 --cutoff 2 --t-end 0.5 --stride 1 "
                           "--residual galerkin --datum-error 0 --format json --constants " + kConstants3;
  EXPECT_EQ(run(args + " --dt 0.01 --out " + out("coarse")), 2);
  EXPECT_NE(read("stderr.txt").find("refine"), std::string::npos);
  ASSERT_EQ(run(args + " --dt 0.001 --out " + out("fine")), 0);
  const json doc = read_json("fine/certificate.json");
  EXPECT_EQ(doc["method"], "ode");
  EXPECT_TRUE(doc["global"].get<bool>());
}
