#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layerfid/circuits/circuit.hpp"
#include "layerfid/noise/noise_model.hpp"

namespace layerfid {

enum class CampaignKind { LfScan, Figure4, Figure5, Figure6, MirrorCompare, LayerCountSweep, GammaCompare, TheoryCheck };

std::string_view to_string(CampaignKind kind);
CampaignKind parse_campaign_kind(std::string_view name);
std::vector<std::string> campaign_names();

/// JSON layout (unknown keys are rejected):
///   {"campaign": "figure4", "device": "dev.json", "preset": "incoherent",
///    "rb": {...RBConfig...}, "out": "dir", "seed": 7, "shots": 0,
///    "workers": 0, "params": {...campaign specific...}}
/// Only "campaign" is required. rb.seed and rb.shots are replaced by the
/// top-level seed and shots.
struct CampaignConfig {
  CampaignKind kind = CampaignKind::TheoryCheck;
  std::string device;  // path, empty when unused
  std::string preset;  // built-in noise preset, empty when unused
  std::optional<RBConfig> rb;
  std::string out_dir;
  std::uint64_t seed = 0;
  int shots = 0;
  int workers = 0;
  nlohmann::json params = nlohmann::json::object();

  void validate() const;
};

void to_json(nlohmann::json& j, const CampaignConfig& c);
void from_json(const nlohmann::json& j, CampaignConfig& c);

CampaignConfig load_campaign_config(const std::filesystem::path& path);

/// "noiseless" (4 qubits), "incoherent", "scenario_a" .. "scenario_i".
NoiseModel noise_preset(std::string_view name);
std::vector<std::string> noise_preset_names();

/// Typed access to a params object that remembers which keys were read.
class ParamReader {
 public:
  ParamReader(const nlohmann::json& params, std::string owner);

  template <class T>
  T get(const std::string& key, T fallback) {
    read_.insert(key);
    if (!params_.contains(key)) return fallback;
    try {
      return params_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(owner_ + ": params." + key + " has the wrong type");
    }
  }

  /// Throws on the first key that was never read.
  void finish() const;

 private:
  nlohmann::json params_;
  std::string owner_;
  std::set<std::string> read_;
};

}  // namespace layerfid
