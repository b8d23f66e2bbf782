// layerfid command line: campaigns, chain search, theory checks and device
// validation. Results go to stdout as JSON; errors go to stderr as
// {"error": {"type": ..., "message": ...}} with a nonzero exit code.

#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "layerfid/campaign/campaigns.hpp"
#include "layerfid/campaign/config.hpp"
#include "layerfid/campaign/output.hpp"
#include "layerfid/campaign/theory.hpp"
#include "layerfid/topology/chains.hpp"
#include "layerfid/topology/device.hpp"

namespace {

using nlohmann::json;
using namespace layerfid;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kPartial = 3 };

int report_error(const std::string& type, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
  return code;
}

struct RunArgs {
  std::string campaign;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> shots;
  std::optional<int> workers;
};

int cmd_run(const RunArgs& a) {
  CampaignConfig cfg;
  if (!a.config.empty()) {
    cfg = load_campaign_config(a.config);
    if (std::string(to_string(cfg.kind)) != a.campaign) {
      throw std::invalid_argument("config is for campaign '" + std::string(to_string(cfg.kind)) + "', not '" + a.campaign + "'");
    }
  } else {
    cfg.kind = parse_campaign_kind(a.campaign);
  }
  if (!a.out.empty()) cfg.out_dir = a.out;
  if (a.seed) cfg.seed = *a.seed;
  if (a.shots) cfg.shots = *a.shots;
  if (a.workers) cfg.workers = *a.workers;
  if (cfg.out_dir.empty()) throw std::invalid_argument("no output directory; pass --out or set \"out\" in the config");
  cfg.validate();

  const auto output = run_campaign(cfg);
  const json manifest = write_campaign_outputs(cfg.out_dir, cfg, output);
  std::cout << json{{"campaign", manifest.at("campaign")}, {"out", cfg.out_dir}, {"files", manifest.at("files")}, {"failures", manifest.at("failures")}}.dump(2) << "\n";
  if (!output.failures.empty()) {
    return report_error("partial_failure", std::to_string(output.failures.size()) + " series failed; see manifest.json", kPartial);
  }
  return kOk;
}

int cmd_chains(const std::string& device_path, int n_max, int k, int beam, double ratio) {
  const DeviceModel device = load_device(device_path);
  const auto pruned = prune_long_gates(device, ratio);
  const auto result = find_candidate_chains(pruned.device, n_max, k, beam);
  std::cout << json{{"pruned_edges", pruned.removed}, {"warnings", pruned.warnings}, {"search", result}}.dump(2) << "\n";
  return kOk;
}

int cmd_theory(const std::string& name, std::uint64_t seed) {
  json out = json::array();
  bool passed = true;
  const auto names = name == "all" ? theory_check_names() : std::vector<std::string>{name};
  for (const auto& n : names) {
    const auto c = run_theory_check(n, seed);
    passed = passed && c.passed;
    out.push_back(c);
  }
  std::cout << (name == "all" ? out : out[0]).dump(2) << "\n";
  return passed ? kOk : report_error("check_failed", "theory check '" + name + "' failed", kFailed);
}

int cmd_validate(const std::string& device_path) {
  const DeviceModel device = load_device(device_path);
  std::cout << json{{"valid", true}, {"qubits", device.num_qubits()}, {"edges", device.edges.size()}, {"connected", device.connected()}}.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layer fidelity benchmarking toolkit"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a campaign and write results, CSV panels and a manifest");
  run_cmd->add_option("campaign", run.campaign, "Campaign kind")->required()->check(CLI::IsMember(campaign_names()));
  run_cmd->add_option("--config", run.config, "Campaign config JSON")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--seed", run.seed, "Seed for circuit generation and sampling");
  run_cmd->add_option("--shots", run.shots, "Shots per circuit; 0 keeps exact probabilities")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--workers", run.workers, "Worker threads; 0 uses every core")->check(CLI::NonNegativeNumber);

  std::string device;
  int n_max = 0;
  int k = 3;
  int beam = kDefaultBeamWidth;
  double ratio = kDefaultPruneRatio;
  auto* chains_cmd = app.add_subcommand("chains", "Find candidate chains on a device");
  chains_cmd->add_option("--device", device, "Device JSON")->required();
  chains_cmd->add_option("--nmax", n_max, "Chain length")->required()->check(CLI::PositiveNumber);
  chains_cmd->add_option("--k", k, "Number of chains")->check(CLI::PositiveNumber);
  chains_cmd->add_option("--beam-width", beam, "States kept per endpoint")->check(CLI::PositiveNumber);
  chains_cmd->add_option("--prune-ratio", ratio, "Drop gates longer than ratio x mean duration")->check(CLI::PositiveNumber);

  std::string check;
  std::uint64_t seed = 0;
  auto* theory_cmd = app.add_subcommand("theory", "Run a closed-form theory check");
  std::vector<std::string> checks = theory_check_names();
  checks.push_back("all");
  theory_cmd->add_option("--check", check, "Check name or 'all'")->required()->check(CLI::IsMember(checks));
  theory_cmd->add_option("--seed", seed, "Seed for randomized checks");

  auto* validate_cmd = app.add_subcommand("validate", "Validate a device file");
  validate_cmd->add_option("--device", device, "Device JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kUsage);
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*chains_cmd) return cmd_chains(device, n_max, k, beam, ratio);
    if (*theory_cmd) return cmd_theory(check, seed);
    if (*validate_cmd) return cmd_validate(device);
  } catch (const std::invalid_argument& e) {
    return report_error("invalid_argument", e.what(), kFailed);
  } catch (const std::exception& e) {
    return report_error("runtime_error", e.what(), kFailed);
  }
  return kUsage;
}
