#include "layerfid/campaign/output.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace layerfid {
namespace {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << data;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

PlotPanel& CampaignOutput::panel(const std::string& name, const std::string& x_label, const std::string& y_label) {
  for (auto& p : panels) {
    if (p.name == name) return p;
  }
  panels.push_back({name, x_label, y_label, {}});
  return panels.back();
}

const PlotPanel* CampaignOutput::find_panel(std::string_view name) const {
  for (const auto& p : panels) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::string panel_csv(const PlotPanel& panel) {
  std::string out = "series,x,y,y_err\n";
  for (const auto& r : panel.rows) {
    out += csv_field(r.series) + ',' + format_number(r.x) + ',' + format_number(r.y) + ',' + format_number(r.y_err) + '\n';
  }
  return out;
}

std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json write_campaign_outputs(const std::filesystem::path& dir, const CampaignConfig& config, const CampaignOutput& output) {
  std::filesystem::create_directories(dir);
  json files = json::array();
  auto emit = [&](const std::string& name, const std::string& data) {
    write_file(dir / name, data);
    files.push_back({{"name", name}, {"bytes", data.size()}, {"fnv1a64", fnv1a64_hex(data)}});
  };

  emit("results.json", output.results.dump(2) + "\n");
  json panels = json::array();
  for (const auto& p : output.panels) {
    const std::string name = p.name + ".csv";
    emit(name, panel_csv(p));
    panels.push_back({{"name", p.name}, {"file", name}, {"x", p.x_label}, {"y", p.y_label}, {"columns", {"series", "x", "y", "y_err"}}, {"rows", p.rows.size()}});
  }

  CampaignConfig recorded = config;
  recorded.out_dir.clear();
  json manifest = {
      {"tool", "layerfid"},
      {"version", kToolVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION)},
      {"campaign", std::string(to_string(config.kind))},
      {"seed", config.seed},
      {"mode", config.shots > 0 ? "shots" : "exact"},
      {"shots", config.shots},
      {"config", recorded},
      {"panels", panels},
      {"failures", output.failures},
      {"files", files},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

void to_json(json& j, const SeriesFailure& f) { j = {{"series", f.series}, {"error", f.error}}; }

}  // namespace layerfid
