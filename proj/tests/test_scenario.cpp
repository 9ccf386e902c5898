#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "poisym/errors.hpp"
#include "poisym/scenario.hpp"

using namespace poisym;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class ScenarioTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() /
            ("poisym_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string usage_field(const json& j) {
  try {
    ScenarioConfig::from_json(j);
  } catch (const UsageError& e) {
    return e.path();
  }
  return "<no error>";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + POISYM_CLI + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, DefaultsAreFilledIn) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "su2"}});
  EXPECT_EQ(c.param("epsilon"), 0.2);
  EXPECT_TRUE(c.outputs.empty());
  EXPECT_EQ(c.to_json()["params"]["t_end"], 1.0);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(usage_field({{"model", "su2"}, {"color", 1}}), "color");
  EXPECT_EQ(usage_field({{"model", "su3"}}), "model");
  EXPECT_EQ(usage_field({{"model", "su2"}, {"params", {{"x", 1}}}}), "params.x");
  EXPECT_EQ(usage_field({{"model", "su2"}, {"params", {{"epsilon", "big"}}}}), "params.epsilon");
  EXPECT_EQ(usage_field({{"model", "su2"}, {"outputs", {"trajectory", "certificate", "scattering"}}}), "outputs[2]");
  EXPECT_EQ(usage_field({{"model", "kappa"}, {"outputs", {"profile", "profile"}}}), "outputs[1]");
  EXPECT_EQ(usage_field({{"model", "su2"}, {"seed", -3}}), "seed");
  EXPECT_EQ(usage_field({{"model", "su2"}, {"params", {{"hamiltonian", "K"}}}}), "params.hamiltonian");
}

TEST(Config, WithParamRevalidates) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "kappa"}});
  EXPECT_EQ(c.with_param("p_max", 6.0).param("p_max"), 6.0);
  EXPECT_THROW(c.with_param("nonexistent", 1.0), UsageError);
}

TEST_F(ScenarioTest, EmptyOutputsWriteOnlyTheManifest) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "minkowski2d"}, {"outputs", json::array()}});
  EXPECT_TRUE(evaluate(c).empty());
  const RunManifest m = run(c, root_);
  EXPECT_TRUE(m.all_checks_pass);
  EXPECT_EQ(m.files, std::vector<std::string>{"manifest.json"});
  EXPECT_TRUE(m.document["artifacts"].empty());
}

TEST_F(ScenarioTest, ManifestListsEveryFileAndCheck) {
  const ScenarioConfig c = ScenarioConfig::from_json(
      {{"model", "minkowski2d"}, {"seed", 5}, {"outputs", {"trajectory", "projection", "scattering", "certificate"}}});
  const RunManifest m = run(c, root_);
  std::set<std::string> on_disk;
  for (const auto& e : fs::directory_iterator(root_)) on_disk.insert(e.path().filename().string());
  EXPECT_EQ(on_disk, std::set<std::string>(m.files.begin(), m.files.end()));
  const json doc = json::parse(slurp(root_ / "manifest.json"));
  EXPECT_EQ(doc["tool"], "poisym");
  EXPECT_EQ(doc["rng"]["name"], "mt19937_64/top53-uniform");
  EXPECT_EQ(doc["rng"]["seed"], 5);
  EXPECT_EQ(doc["config"]["params"]["epsilon"], 0.5);
  EXPECT_EQ(doc["artifacts"].size(), 4u);
  for (const json& a : doc["artifacts"]) {
    EXPECT_TRUE(a["pass"].get<bool>()) << a.dump();
    for (const json& ch : a["checks"]) EXPECT_TRUE(ch.contains("threshold"));
  }
  EXPECT_TRUE(doc["all_checks_pass"].get<bool>());
}

TEST_F(ScenarioTest, RerunReplacesOwnFilesAndRefusesForeignOnes) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "kappa"}, {"outputs", {"profile"}}});
  run(c, root_);
  EXPECT_NO_THROW(run(c, root_));
  std::ofstream(root_ / "notes.txt") << "mine";
  EXPECT_THROW(run(c, root_), UsageError);
  EXPECT_TRUE(fs::exists(root_ / "notes.txt"));
}

TEST_F(ScenarioTest, JsonFormatWritesNullForNonFinite) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "su2"}, {"outputs", {"projection"}}});
  run(c, root_, Format::json);
  const json t = json::parse(slurp(root_ / "su2_projection.json"));
  EXPECT_EQ(t["columns"].back(), "body_velocity_error");
  EXPECT_TRUE(t["rows"][0].back().is_null());
}

TEST_F(ScenarioTest, RunsAreByteIdentical) {
  const ScenarioConfig c = ScenarioConfig::from_json(
      {{"model", "su2"}, {"seed", 9}, {"outputs", {"trajectory", "projection", "certificate"}}});
  const RunManifest a = run(c, root_ / "a");
  run(c, root_ / "b");
  for (const std::string& f : a.files) EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
}

TEST_F(ScenarioTest, CliRunsAreByteIdentical) {
  const fs::path config = root_ / "kappa.json";
  std::ofstream(config) << json{{"model", "kappa"}, {"seed", 3}, {"outputs", {"trajectory", "profile", "certificate"}}};
  for (const char* out : {"a", "b"})
    ASSERT_EQ(run_cli("run \"" + config.string() + "\" --out \"" + (root_ / out).string() + "\""), 0);
  int compared = 0;
  for (const auto& e : fs::directory_iterator(root_ / "a")) {
    EXPECT_EQ(slurp(e.path()), slurp(root_ / "b" / e.path().filename()));
    ++compared;
  }
  EXPECT_EQ(compared, 3);  // certificate writes no table
}

TEST_F(ScenarioTest, CliExitCodes) {
  EXPECT_EQ(run_cli("--version"), 0);
  EXPECT_EQ(run_cli("run"), 2);
  EXPECT_EQ(run_cli("run \"" + (root_ / "missing.json").string() + "\" --out \"" + root_.string() + "\""), 2);
  const fs::path bad = root_ / "bad.json";
  std::ofstream(bad) << R"({"model": "su2", "outputs": ["scattering"]})";
  EXPECT_EQ(run_cli("run \"" + bad.string() + "\" --out \"" + (root_ / "o").string() + "\""), 2);
  EXPECT_EQ(run_cli("certify su2 --epsilon 0.3 --seed 1"), 0);
}

TEST_F(ScenarioTest, Su2TrajectoryMatchesGolden) {
  const ScenarioConfig c =
      ScenarioConfig::from_json({{"model", "su2"}, {"params", {{"epsilon", 0.2}, {"t_end", 1.0}}}, {"outputs", {"trajectory"}}});
  run(c, root_);
  const auto got = read_csv(root_ / "su2_trajectory.csv");
  const auto want = read_csv(fs::path(POISYM_GOLDEN_DIR) / "su2_trajectory.csv");
  ASSERT_EQ(got.size(), want.size());
  ASSERT_EQ(got[0], want[0]);
  for (std::size_t r = 1; r < got.size(); ++r) {
    ASSERT_EQ(got[r].size(), want[r].size());
    for (std::size_t k = 0; k < got[r].size(); ++k) {
      const double g = std::stod(got[r][k]), w = std::stod(want[r][k]);
      EXPECT_NEAR(g, w, 1e-9 * std::max(1.0, std::abs(w))) << "row " << r << " column " << want[0][k];
    }
  }
}

TEST_F(ScenarioTest, CsvUsesRoundTripPrecision) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST_F(ScenarioTest, SweepIncludesUndeformedBaseline) {
  ScenarioConfig c = ScenarioConfig::from_json(
      {{"model", "su2"}, {"params", {{"hamiltonian", "H''"}}}, {"outputs", {"trajectory"}}});
  const SweepResult s = sweep(c, "epsilon", {0.0, 0.1}, root_, Format::csv, 2);
  EXPECT_TRUE(s.all_ok) << s.manifest.dump();
  const auto rows = read_csv(root_ / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[1][1], "ok");
  EXPECT_EQ(rows[2][0], "0.10000000000000001");
}

TEST_F(ScenarioTest, SweepSlopeForMinkowski) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "minkowski2d"}, {"outputs", {"trajectory"}}});
  const SweepResult s = sweep(c, "epsilon", {1e-2, 5e-3, 2.5e-3}, root_, Format::csv, 3);
  const json& slopes = s.manifest["convergence_slopes"];
  ASSERT_TRUE(slopes.contains("trajectory.classical_limit_deviation")) << slopes.dump();
  EXPECT_NEAR(slopes["trajectory.classical_limit_deviation"].get<double>(), 2.0, 0.2);
}

TEST_F(ScenarioTest, SweepOverKappaMomentumRange) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "kappa"}, {"outputs", {"profile"}}});
  const SweepResult s = sweep(c, "p_max", {3.0, 6.0}, root_, Format::csv, 2);
  EXPECT_TRUE(s.manifest["convergence_slopes"].empty());
  const auto rows = read_csv(root_ / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);
  const auto col = std::find(rows[0].begin(), rows[0].end(), "profile.monotonic_right");
  ASSERT_NE(col, rows[0].end());
  const auto k = static_cast<std::size_t>(col - rows[0].begin());
  EXPECT_EQ(rows[1][k], "1");
  EXPECT_EQ(rows[2][k], "0");
}

TEST_F(ScenarioTest, FailedSweepRowIsReported) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "su2"}, {"outputs", {"trajectory"}}});
  const SweepResult s = sweep(c, "epsilon", {0.2, 0.0}, root_, Format::csv, 2);
  EXPECT_FALSE(s.all_ok);
  ASSERT_EQ(s.manifest["failures"].size(), 1u);
  EXPECT_EQ(s.manifest["failures"][0]["index"], 1);
  const auto rows = read_csv(root_ / "sweep.csv");
  EXPECT_EQ(rows[1][1], "ok");
  EXPECT_EQ(rows[2][1], "failed");
}

TEST_F(ScenarioTest, SweepRejectsUnknownParameter) {
  const ScenarioConfig c = ScenarioConfig::from_json({{"model", "su2"}});
  EXPECT_THROW(sweep(c, "temperature", {1.0}, root_), UsageError);
  EXPECT_THROW(sweep(c, "epsilon", {}, root_), UsageError);
}

TEST(Certify, EveryModelPasses) {
  for (Model m : {Model::minkowski2d, Model::kappa, Model::su2}) {
    const CertificateReport r = certify(m, 0.4, 17);
    EXPECT_TRUE(r.all_checks_pass) << r.document.dump(2);
    EXPECT_FALSE(r.document["checks"].empty());
  }
}

TEST(Certify, IsDeterministic) {
  EXPECT_EQ(certify(Model::su2, 0.3, 2).document.dump(), certify(Model::su2, 0.3, 2).document.dump());
}
