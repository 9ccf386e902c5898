#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poisym/errors.hpp"
#include "poisym/scenario.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  std::size_t index = 0;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size())
      throw poisym::UsageError("values[" + std::to_string(index) + "]", "not a number: \"" + item + "\"");
    values.push_back(v);
    ++index;
  }
  if (values.empty()) throw poisym::UsageError("values", "at least one value required");
  return values;
}

void report_checks(const nlohmann::json& artifacts) {
  for (const auto& a : artifacts)
    for (const auto& c : a["checks"]) {
      std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << a["kind"].get<std::string>() << "."
                << c["name"].get<std::string>() << " value=" << c["value"].dump()
                << " threshold=" << c["threshold"].dump() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed free-motion scenarios: flows, projections, certificates and sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(poisym::kToolVersion));

  std::string config_path;
  std::string out_dir;
  std::string format = "csv";

  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario and write its artifacts");
  run_cmd->add_option("config", config_path, "Scenario config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));

  std::string parameter;
  std::string values_text;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep_cmd->add_option("config", config_path, "Scenario config (JSON)")->required();
  sweep_cmd->add_option("--param", parameter, "Parameter to vary")->required();
  sweep_cmd->add_option("--values", values_text, "Comma-separated values")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
  sweep_cmd->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));

  std::string model;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  CLI::App* certify_cmd = app.add_subcommand("certify", "Run only the Jacobi and invariant certificates");
  certify_cmd->add_option("model", model, "minkowski2d, kappa or su2")->required();
  certify_cmd->add_option("--epsilon", epsilon, "Deformation parameter")->required();
  certify_cmd->add_option("--seed", seed, "Seed for the certificate points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) {
      const poisym::ScenarioConfig config = poisym::ScenarioConfig::load(config_path);
      const poisym::RunManifest manifest = poisym::run(config, out_dir, poisym::parse_format(format));
      report_checks(manifest.document["artifacts"]);
      std::cout << "wrote " << manifest.files.size() << " file(s) to " << out_dir << "\n";
      return manifest.all_checks_pass ? 0 : kExitChecksFailed;
    }
    if (*sweep_cmd) {
      const poisym::ScenarioConfig config = poisym::ScenarioConfig::load(config_path);
      const std::vector<double> values = parse_values(values_text);
      const poisym::SweepResult result = poisym::sweep(config, parameter, values, out_dir, poisym::parse_format(format),
                                                       poisym::default_worker_count());
      for (const auto& f : result.manifest["failures"])
        std::cerr << "row " << f["index"].get<std::size_t>() << " failed: " << f["error"].get<std::string>() << "\n";
      for (const auto& [column, slope] : result.manifest["convergence_slopes"].items())
        std::cout << "slope " << column << " = " << slope.dump() << "\n";
      std::cout << "wrote " << result.files.size() << " file(s) to " << out_dir << "\n";
      return result.all_ok ? 0 : kExitChecksFailed;
    }
    if (*certify_cmd) {
      const poisym::CertificateReport report = poisym::certify(poisym::parse_model(model), epsilon, seed);
      std::cout << report.document.dump(2) << "\n";
      return report.all_checks_pass ? 0 : kExitChecksFailed;
    }
  } catch (const poisym::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
