#pragma once

#include <deque>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layerfid/campaign/config.hpp"

namespace layerfid {

inline constexpr const char* kToolVersion = "0.1.0";

/// One plotted point. CSV columns: series, x, y, y_err.
struct PlotRow {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double y_err = 0.0;
};

struct PlotPanel {
  std::string name;  // file stem
  std::string x_label;
  std::string y_label;
  std::vector<PlotRow> rows;

  void add(std::string series, double x, double y, double y_err = 0.0) { rows.push_back({std::move(series), x, y, y_err}); }
};

struct SeriesFailure {
  std::string series;
  std::string error;
};

struct CampaignOutput {
  nlohmann::json results = nlohmann::json::object();
  std::deque<PlotPanel> panels;  // references from panel() stay valid
  std::vector<SeriesFailure> failures;

  PlotPanel& panel(const std::string& name, const std::string& x_label, const std::string& y_label);
  const PlotPanel* find_panel(std::string_view name) const;
};

/// Header line plus one row per point, numbers with 17 significant digits.
std::string panel_csv(const PlotPanel& panel);

std::string fnv1a64_hex(std::string_view data);

/// Writes results.json, <panel>.csv for every panel and manifest.json into
/// `dir` (created if needed) and returns the manifest. Nothing written
/// depends on the clock or the output path.
nlohmann::json write_campaign_outputs(const std::filesystem::path& dir, const CampaignConfig& config, const CampaignOutput& output);

void to_json(nlohmann::json& j, const SeriesFailure& f);

}  // namespace layerfid
