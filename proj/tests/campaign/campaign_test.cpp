#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "layerfid/campaign/campaigns.hpp"
#include "layerfid/campaign/measure.hpp"
#include "layerfid/campaign/theory.hpp"
#include "layerfid/estimation/layer_fidelity.hpp"

namespace layerfid {
namespace {

using nlohmann::json;

CampaignConfig parse(const json& j) { return j.get<CampaignConfig>(); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("layerfid_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(CampaignConfig, ParsesEveryField) {
  const auto c = parse({{"campaign", "figure4"},
                        {"rb", {{"depths", {1, 2, 4, 8}}, {"randomizations", 3}}},
                        {"out", "x"},
                        {"seed", 9},
                        {"shots", 100},
                        {"workers", 2},
                        {"params", {{"coherence_us", 20}}}});
  EXPECT_EQ(c.kind, CampaignKind::Figure4);
  ASSERT_TRUE(c.rb.has_value());
  EXPECT_EQ(c.rb->randomizations, 3);
  EXPECT_EQ(c.out_dir, "x");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.shots, 100);
  EXPECT_EQ(c.workers, 2);
  EXPECT_EQ(c.params.at("coherence_us"), 20);

  const auto back = parse(json(c));
  EXPECT_EQ(json(back), json(c));
}

TEST(CampaignConfig, RejectsBadInput) {
  EXPECT_THROW(parse({{"campaign", "figure4"}, {"bogus", 1}}), std::invalid_argument);
  EXPECT_THROW(parse({{"campaign", "figure9"}}), std::invalid_argument);
  EXPECT_THROW(parse({{"seed", 1}}), std::invalid_argument);
  EXPECT_THROW(parse({{"campaign", "lf_scan"}, {"device", "d.json"}, {"preset", "incoherent"}}), std::invalid_argument);
  EXPECT_THROW(parse({{"campaign", "mirror_compare"}, {"preset", "scenario_z"}}), std::invalid_argument);
  EXPECT_THROW(parse({{"campaign", "figure4"}, {"shots", -1}}), std::invalid_argument);
  EXPECT_THROW(parse({{"campaign", "figure4"}, {"params", 3}}), std::invalid_argument);
  EXPECT_THROW(parse(json::array()), std::invalid_argument);
  EXPECT_THROW(load_campaign_config("/nonexistent/config.json"), std::invalid_argument);
}

TEST(CampaignConfig, KindNamesRoundTrip) {
  for (const auto& name : campaign_names()) EXPECT_EQ(to_string(parse_campaign_kind(name)), name);
  EXPECT_EQ(campaign_names().size(), 8u);
}

TEST(CampaignConfig, NoisePresets) {
  for (const auto& name : noise_preset_names()) EXPECT_NO_THROW(noise_preset(name).validate()) << name;
  EXPECT_EQ(noise_preset_names().size(), 11u);
  EXPECT_THROW(noise_preset("scenario_j"), std::invalid_argument);
}

TEST(ParamReader, TracksReadKeys) {
  ParamReader r({{"a", 2}, {"b", "text"}}, "owner");
  EXPECT_EQ(r.get<int>("a", 5), 2);
  EXPECT_EQ(r.get<int>("missing", 5), 5);
  EXPECT_THROW(r.get<int>("b", 0), std::invalid_argument);
  EXPECT_NO_THROW(r.finish());

  ParamReader unread({{"a", 2}, {"typo", 1}}, "owner");
  unread.get<int>("a", 0);
  EXPECT_THROW(unread.finish(), std::invalid_argument);
}

TEST(Output, CsvUsesFullPrecision) {
  PlotPanel p{"p", "x", "y", {}};
  p.add("s", 1.0, 0.1, 0.0);
  EXPECT_EQ(panel_csv(p), "series,x,y,y_err\ns,1,0.10000000000000001,0\n");
}

TEST(Output, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64_hex("a"), "af63dc4c8601ec8c");
}

TEST(Output, PanelReferencesSurviveGrowth) {
  CampaignOutput out;
  auto& first = out.panel("first", "x", "y");
  for (int i = 0; i < 50; ++i) out.panel("p" + std::to_string(i), "x", "y");
  first.add("s", 0, 1);
  ASSERT_NE(out.find_panel("first"), nullptr);
  EXPECT_EQ(out.find_panel("first")->rows.size(), 1u);
  EXPECT_EQ(&out.panel("first", "x", "y"), &first);
  EXPECT_EQ(out.find_panel("nope"), nullptr);
}

CampaignConfig small_gamma_config() {
  return parse({{"campaign", "gamma_compare"},
                {"seed", 4},
                {"rb", {{"depths", {10, 20, 40, 80}}, {"randomizations", 2}}},
                {"params", {{"n_qubits", 4}}}});
}

TEST(Campaign, ReRunIsBitIdentical) {
  const auto config = small_gamma_config();
  const auto a = scratch_dir("det_a");
  const auto b = scratch_dir("det_b");
  const auto ma = write_campaign_outputs(a, config, run_campaign(config));
  const auto mb = write_campaign_outputs(b, config, run_campaign(config));
  EXPECT_EQ(ma, mb);
  for (const auto& f : ma.at("files")) {
    const auto name = f.at("name").get<std::string>();
    const auto bytes = slurp(a / name);
    EXPECT_EQ(bytes, slurp(b / name)) << name;
    EXPECT_EQ(fnv1a64_hex(bytes), f.at("fnv1a64").get<std::string>()) << name;
  }
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  EXPECT_EQ(ma.at("version"), kToolVersion);
  EXPECT_FALSE(ma.at("config").contains("out"));
}

TEST(Campaign, WorkerCountDoesNotChangeResults) {
  auto one = small_gamma_config();
  one.workers = 1;
  auto three = small_gamma_config();
  three.workers = 3;
  EXPECT_EQ(run_campaign(one).results, run_campaign(three).results);
}

TEST(Campaign, UnknownParamIsRejectedBeforeSimulation) {
  auto c = small_gamma_config();
  c.params["n_qubit"] = 4;
  EXPECT_THROW(run_campaign(c), std::invalid_argument);
}

TEST(Campaign, NoiseSourceRules) {
  EXPECT_THROW(run_campaign(parse({{"campaign", "lf_scan"}})), std::invalid_argument);
  EXPECT_THROW(run_campaign(parse({{"campaign", "figure4"}, {"preset", "incoherent"}})), std::invalid_argument);
}

TEST(Campaign, GammaCompareSmallChain) {
  const auto out = run_campaign(small_gamma_config());
  EXPECT_TRUE(out.failures.empty());
  EXPECT_LT(out.results.at("relative_gap").get<double>(), 0.01);
  ASSERT_NE(out.find_panel("gamma_vs_n"), nullptr);
}

TEST(Campaign, MirrorCompareNoiselessHasNoError) {
  const auto out = run_campaign(parse({{"campaign", "mirror_compare"},
                                       {"preset", "noiseless"},
                                       {"rb", {{"depths", {2, 4, 6, 8}}, {"randomizations", 2}}}}));
  ASSERT_TRUE(out.failures.empty());
  const auto* p = out.find_panel("mirror_errors");
  ASSERT_NE(p, nullptr);
  ASSERT_FALSE(p->rows.empty());
  for (const auto& row : p->rows) EXPECT_NEAR(row.y, 0.0, 1e-6) << row.series;
}

TEST(Campaign, LfScanOnLadder) {
  const auto out = run_campaign(parse({{"campaign", "lf_scan"},
                                       {"device", std::string(LAYERFID_FIXTURE_DIR) + "/ladder_12.json"},
                                       {"rb", {{"depths", {10, 20, 40, 80}}, {"randomizations", 2}}},
                                       {"params", {{"n_max", 6}, {"k", 2}, {"isolated", false}}}}));
  ASSERT_TRUE(out.failures.empty());
  const auto& curve = out.results.at("lf_vs_n");
  ASSERT_EQ(curve.size(), 5u);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i].at("lf").get<double>(), curve[i - 1].at("lf").get<double>());
  EXPECT_NE(out.find_panel("eplg_vs_n"), nullptr);
}

TEST(Campaign, TheoryCheckCampaignPasses) {
  const auto out = run_campaign(parse({{"campaign", "theory_check"}, {"seed", 3}}));
  EXPECT_TRUE(out.results.at("all_passed").get<bool>());
  EXPECT_NE(out.find_panel("lemma_gap"), nullptr);
}

TEST(Theory, EveryCheckPasses) {
  for (const auto& name : theory_check_names()) {
    const auto c = run_theory_check(name, 11);
    EXPECT_TRUE(c.passed) << name << ": " << c.details.dump();
  }
  EXPECT_THROW(run_theory_check("nope"), std::invalid_argument);
}

TEST(Measure, OneQubitLayerLength) {
  EXPECT_DOUBLE_EQ(mean_1q_layer_units(1), 1.0);
  // P(max = 0) = (1/6)^2, P(max = 2) = 1 - (5/6)^2
  EXPECT_NEAR(mean_1q_layer_units(2), (1.0 - 1.0 / 36 - 11.0 / 36) + 2 * 11.0 / 36, 1e-12);
  EXPECT_NEAR(mean_1q_layer_units(4), 1.5170, 1e-4);
  EXPECT_LT(mean_1q_layer_units(100), 2.0);
}

TEST(Measure, IdleFidelity) {
  EXPECT_DOUBLE_EQ(idle_fidelity({}, 1.0), 1.0);
  const QubitCoherence c{50e-6, 30e-6};
  const double t = 1e-6;
  EXPECT_NEAR(idle_fidelity(c, t), 0.25 + 0.5 * std::exp(-t / 30e-6) + 0.25 * std::exp(-t / 50e-6), 1e-15);
}

DeviceModel two_qubit_device(double t1, double error) {
  DeviceModel d;
  d.qubits = {{0, t1, t1, 1.0}, {1, t1, t1, 1.0}};
  d.edges = {{0, 1, TwoQubitGateType::CX, error, 400e-9}};
  return d;
}

TEST(Measure, ChainNoiseDividesOutDecoherence) {
  const double inf = std::numeric_limits<double>::infinity();
  auto pure = chain_noise(two_qubit_device(inf, 0.01), {0, 1});
  ASSERT_EQ(pure.gate_depolarizing.size(), 1u);
  EXPECT_NEAR(fidelity_from_alpha(pure.gate_depolarizing[0].alpha, 4), 0.99, 1e-12);

  const auto d = two_qubit_device(500e-6, 0.01);
  const auto mixed = chain_noise(d, {0, 1});
  const double decay = std::pow(idle_fidelity({500e-6, 500e-6}, 400e-9), 2);
  EXPECT_NEAR(fidelity_from_alpha(mixed.gate_depolarizing[0].alpha, 4) * decay, 0.99, 1e-12);

  // Decoherence alone already exceeds the reported error: no extra channel.
  const auto capped = chain_noise(two_qubit_device(1e-6, 0.01), {0, 1});
  EXPECT_NEAR(capped.gate_depolarizing[0].alpha, 1.0, 1e-12);

  EXPECT_THROW(chain_noise(d, {0, 0}), std::invalid_argument);
}

TEST(Measure, DecoherenceOnlyLf) {
  const auto spec = LayerSpec::chain(4);
  const auto noise = noise_preset("incoherent");
  const double unit = kPresetUnitTime;
  const double t = (8 + mean_1q_layer_units(4)) * unit;
  const double f = idle_fidelity(noise.qubits[0], t);
  EXPECT_NEAR(decoherence_only_lf(spec, noise, unit), std::pow(f, 8), 1e-12);
  EXPECT_GT(decoherence_only_lf(spec, noise, unit, false), decoherence_only_lf(spec, noise, unit));
}

TEST(Measure, ParallelForCoversEveryJobOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i, int) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Measure, ExactDepolarizingLayerIsRecovered) {
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.gate_depolarizing.push_back({0, 1, alpha_from_fidelity(0.98, 4)});
  const auto spec = LayerSpec::chain(2);
  EXPECT_NEAR(exact_layer_fidelity(spec, noise, 3, 1, {}), 0.98, 1e-9);

  RBConfig cfg;
  cfg.depths = {10, 20, 40, 80};
  cfg.randomizations = 4;
  const auto r = measure_layer(spec, noise, cfg, {});
  EXPECT_NEAR(r.lf, 0.98, 3 * r.lf_err + 1e-5);
}

}  // namespace
}  // namespace layerfid
