#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace poisym {

inline constexpr const char* kToolName = "poisym";
inline constexpr const char* kToolVersion = "1.0.0";

enum class Model { minkowski2d, kappa, su2 };
enum class OutputKind { trajectory, projection, profile, certificate, scattering };
enum class Format { csv, json };

std::string to_string(Model m);
std::string to_string(OutputKind k);
Model parse_model(const std::string& s);
Format parse_format(const std::string& s);

/// A validated scenario: model, parameters (defaults filled in), requested outputs, seed.
struct ScenarioConfig {
  Model model = Model::su2;
  std::map<std::string, double> params;
  std::string hamiltonian = "H";  // su2 only: "H", "H'" or "H''"
  std::vector<OutputKind> outputs;
  std::uint64_t seed = 0;

  /// Throws UsageError with the offending field path.
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::filesystem::path& path);

  /// Normalized echo with every default made explicit.
  nlohmann::json to_json() const;

  double param(const std::string& name) const;
  /// Overrides one numeric parameter, re-validating the result.
  ScenarioConfig with_param(const std::string& name, double value) const;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Artifact {
  OutputKind kind = OutputKind::trajectory;
  std::vector<Table> tables;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Check> checks;

  bool passes() const;
};

/// Computes every requested artifact without touching the filesystem.
std::vector<Artifact> evaluate(const ScenarioConfig& config);

struct RunManifest {
  nlohmann::json document;
  std::vector<std::string> files;
  bool all_checks_pass = true;
};

/// Runs the scenario, writes one file per table plus manifest.json into out_dir.
RunManifest run(const ScenarioConfig& config, const std::filesystem::path& out_dir, Format format = Format::csv);

struct SweepResult {
  nlohmann::json manifest;
  std::vector<std::string> files;
  bool all_ok = true;
};

/// One scenario per value (in input order, evaluated by `workers` threads), aggregated
/// into sweep.csv / sweep.json plus manifest.json.
SweepResult sweep(const ScenarioConfig& config, const std::string& parameter, const std::vector<double>& values,
                  const std::filesystem::path& out_dir, Format format = Format::csv, int workers = 1);

/// Worker count from POISYM_WORKERS, falling back to the hardware concurrency.
int default_worker_count();

/// Certificate-only run for a model; returns the report and whether every check passed.
struct CertificateReport {
  nlohmann::json document;
  bool all_checks_pass = true;
};
CertificateReport certify(Model model, double epsilon, std::uint64_t seed);

/// "%.17g" formatting used for every CSV number.
std::string format_number(double v);

}  // namespace poisym
