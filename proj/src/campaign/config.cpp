#include "layerfid/campaign/config.hpp"

#include <fstream>
#include <stdexcept>

namespace layerfid {
namespace {

using nlohmann::json;

struct KindName {
  CampaignKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {CampaignKind::LfScan, "lf_scan"},
    {CampaignKind::Figure4, "figure4"},
    {CampaignKind::Figure5, "figure5"},
    {CampaignKind::Figure6, "figure6"},
    {CampaignKind::MirrorCompare, "mirror_compare"},
    {CampaignKind::LayerCountSweep, "layer_count_sweep"},
    {CampaignKind::GammaCompare, "gamma_compare"},
    {CampaignKind::TheoryCheck, "theory_check"},
};

constexpr const char* kConfigKeys[] = {"campaign", "device", "preset", "rb", "out", "seed", "shots", "workers", "params"};

}  // namespace

std::string_view to_string(CampaignKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  throw std::invalid_argument("unknown campaign kind");
}

CampaignKind parse_campaign_kind(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (name == k.name) return k.kind;
  }
  throw std::invalid_argument("unknown campaign '" + std::string(name) + "'");
}

std::vector<std::string> campaign_names() {
  std::vector<std::string> out;
  for (const auto& k : kKindNames) out.emplace_back(k.name);
  return out;
}

void CampaignConfig::validate() const {
  if (shots < 0) throw std::invalid_argument("campaign config: shots must be non-negative");
  if (workers < 0) throw std::invalid_argument("campaign config: workers must be non-negative");
  if (!params.is_object()) throw std::invalid_argument("campaign config: params must be an object");
  if (!preset.empty()) noise_preset(preset);
  if (!device.empty() && !preset.empty()) throw std::invalid_argument("campaign config: give either a device or a preset, not both");
  if (rb) rb->validate();
}

void to_json(json& j, const CampaignConfig& c) {
  j = {{"campaign", std::string(to_string(c.kind))}, {"seed", c.seed}, {"shots", c.shots}, {"workers", c.workers}, {"params", c.params}};
  if (!c.device.empty()) j["device"] = c.device;
  if (!c.preset.empty()) j["preset"] = c.preset;
  if (c.rb) j["rb"] = *c.rb;
  if (!c.out_dir.empty()) j["out"] = c.out_dir;
}

void from_json(const json& j, CampaignConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("campaign config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kConfigKeys) known = known || key == k;
    if (!known) throw std::invalid_argument("campaign config: unknown field '" + key + "'");
  }
  try {
    c.kind = parse_campaign_kind(j.at("campaign").get<std::string>());
    c.device = j.contains("device") && !j.at("device").is_null() ? j.at("device").get<std::string>() : "";
    c.preset = j.contains("preset") && !j.at("preset").is_null() ? j.at("preset").get<std::string>() : "";
    c.rb.reset();
    if (j.contains("rb")) c.rb = j.at("rb").get<RBConfig>();
    c.out_dir = j.value("out", std::string());
    c.seed = j.value("seed", std::uint64_t{0});
    c.shots = j.value("shots", 0);
    c.workers = j.value("workers", 0);
    c.params = j.value("params", json::object());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("campaign config: ") + e.what());
  }
  c.validate();
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open campaign config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("campaign config '" + path.string() + "': " + e.what());
  }
  return j.get<CampaignConfig>();
}

NoiseModel noise_preset(std::string_view name) {
  if (name == "noiseless") return NoiseModel::noiseless(4);
  if (name == "incoherent") return incoherent_preset();
  if (name.size() == 10 && name.substr(0, 9) == "scenario_" && name[9] >= 'a' && name[9] <= 'i') return scenario_preset(name[9]);
  throw std::invalid_argument("unknown noise preset '" + std::string(name) + "'");
}

std::vector<std::string> noise_preset_names() {
  std::vector<std::string> out = {"noiseless", "incoherent"};
  for (char s = 'a'; s <= 'i'; ++s) out.push_back(std::string("scenario_") + s);
  return out;
}

ParamReader::ParamReader(const json& params, std::string owner) : params_(params), owner_(std::move(owner)) {
  if (!params_.is_object()) throw std::invalid_argument(owner_ + ": params must be an object");
}

void ParamReader::finish() const {
  for (const auto& [key, value] : params_.items()) {
    if (!read_.count(key)) throw std::invalid_argument(owner_ + ": unknown param '" + key + "'");
  }
}

}  // namespace layerfid
