#include "layerfid/campaign/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "layerfid/campaign/measure.hpp"
#include "layerfid/campaign/theory.hpp"
#include "layerfid/core/channel.hpp"
#include "layerfid/noise/channels.hpp"
#include "layerfid/noise/gamma.hpp"
#include "layerfid/topology/chains.hpp"

namespace layerfid {
namespace {

using nlohmann::json;

const std::vector<int> kLayerDepths = {1, 2, 4, 8, 16, 32, 64, 128};
const std::vector<int> kMirrorDepths = {2, 4, 6, 8, 10, 12, 16, 20};
// Direct RB starts without a random 2Q Clifford, so for the first few depths
// the inverse layer needs fewer 2Q gates than the uniform-Clifford average
// and the decay is not yet a single exponential. Pure gate depolarizing makes
// that visible at the 1e-4 level, so the depolarizing-only campaigns skip
// depths below 10.
const std::vector<int> kScanDepths = {10, 20, 30, 40, 60, 80, 100, 125, 150, 200, 400};

struct Valued {
  double value = 0.0;
  double err = 0.0;
};

void to_json(json& j, const Valued& v) { j = {{"error", v.value}, {"error_err", v.err}}; }

Valued layer_error(const LayerFidelityResult& r) { return {1.0 - r.lf, r.lf_err}; }

Valued product_error(const std::vector<ElementResult>& elements) {
  double f = 1.0;
  double rel2 = 0.0;
  for (const auto& e : elements) {
    f *= e.fidelity;
    rel2 += std::pow(e.fidelity_err / e.fidelity, 2);
  }
  return {1.0 - f, f * std::sqrt(rel2)};
}

Valued mirror_error(const MirrorMeasurement& m) { return {1.0 - m.fit.fidelity, m.fit.fidelity_err}; }

json mirror_json(const MirrorMeasurement& m) {
  return {{"polarization", m.polarization}, {"fit", m.fit.fit}, {"fidelity", m.fit.fidelity}, {"fidelity_err", m.fit.fidelity_err}};
}

NoiseModel coherence_noise(int n, double t_us) { return NoiseModel::uniform_coherence(n, t_us * 1e-6, t_us * 1e-6); }

NoiseModel with_zz(NoiseModel m, CoherentKind kind, const std::vector<std::vector<int>>& pairs, double rate_hz) {
  for (const auto& p : pairs) {
    if (p.size() != 2) throw std::invalid_argument("zz_pairs entries must be qubit pairs");
    m.coherent_terms.push_back({kind, p, rate_hz});
  }
  m.validate();
  return m;
}

LayerSpec even_layer(int first_units, int second_units) {
  return LayerSpec::from_edge_sets(4, {{{0, 1, TwoQubitGateType::CX, first_units}, {2, 3, TwoQubitGateType::CX, second_units}}});
}

class Campaign {
 public:
  explicit Campaign(const CampaignConfig& c) : config(c), params(c.params, std::string(to_string(c.kind))) {
    config.validate();
    run.workers = c.workers;
  }

  RBConfig rb(const std::vector<int>& depths, int randomizations, RBFamily family = RBFamily::Direct) const {
    RBConfig r;
    r.depths = config.rb && !config.rb->depths.empty() ? config.rb->depths : depths;
    r.randomizations = config.rb ? config.rb->randomizations : randomizations;
    r.family = family;
    r.seed = config.seed;
    r.shots = config.shots;
    r.validate();
    return r;
  }

  /// Mirror circuits keep the layer randomization count but use their own depths.
  RBConfig mirror_rb(const std::vector<int>& depths, int randomizations) const {
    RBConfig r = rb(kLayerDepths, randomizations);
    r.depths = depths;
    r.validate();
    return r;
  }

  void read_unit_time() { run.unit_time = params.get<double>("unit_ns", kPresetUnitTime * 1e9) * 1e-9; }

  void no_noise_source() const {
    if (!config.device.empty() || !config.preset.empty()) {
      throw std::invalid_argument(std::string(to_string(config.kind)) + " builds its own noise; set params instead of device or preset");
    }
  }

  template <class F>
  void series(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      out.failures.push_back({name, e.what()});
    }
  }

  const CampaignConfig& config;
  ParamReader params;
  RunOptions run;
  CampaignOutput out;
};

// --- figure 4 -----------------------------------------------------------------

void figure4(Campaign& c) {
  c.no_noise_source();
  c.read_unit_time();
  const double t_us = c.params.get<double>("coherence_us", kPresetCoherenceTime * 1e6);
  const int short_units = c.params.get<int>("short_gate_units", 5);
  const int long_units = c.params.get<int>("long_gate_units", 8);
  const auto bottom_t = c.params.get<std::vector<double>>("bottom_coherence_us", {25.0, 50.0, 100.0});
  const auto mirror_depths = c.params.get<std::vector<int>>("mirror_depths", kMirrorDepths);
  c.params.finish();
  const RBConfig layer_cfg = c.rb(kLayerDepths, 10, RBFamily::Direct);
  RBConfig sim_cfg = layer_cfg;
  sim_cfg.family = RBFamily::Simultaneous;
  const double unit = c.run.unit_time;

  auto& top = c.out.panel("figure4_top", "pair index", "pair process error");
  json top_results = json::array();
  const NoiseModel noise = coherence_noise(4, t_us);
  for (int first : {short_units, long_units}) {
    const std::string tag = std::to_string(first) + "v" + std::to_string(long_units);
    const LayerSpec spec = even_layer(first, long_units);
    json entry = {{"durations", {first, long_units}}};
    for (const auto& [name, cfg] : {std::pair{std::string("layer"), layer_cfg}, std::pair{std::string("simultaneous"), sim_cfg}}) {
      c.series(name + "_" + tag, [&, name = name, cfg = cfg] {
        const auto r = measure_layer(spec, noise, cfg, c.run);
        json errors = json::array();
        for (const auto& e : r.elements) {
          const int pair = e.qubits[0] / 2;
          top.add(name + "_" + tag, pair, 1.0 - e.fidelity, e.fidelity_err);
          errors.push_back(Valued{1.0 - e.fidelity, e.fidelity_err});
        }
        entry[name] = {{"pair_errors", errors}, {"result", r}};
      });
    }
    // Barriered layer: every qubit waits for the longest gate plus the 1Q layer.
    const double t_layer = (std::max(first, long_units) + mean_1q_layer_units(4)) * unit;
    json theory_layer = json::array();
    json theory_sim = json::array();
    const int durations[] = {first, long_units};
    for (int pair = 0; pair < 2; ++pair) {
      const QubitCoherence q = noise.qubits[0];
      const double layer = 1.0 - std::pow(idle_fidelity(q, t_layer), 2);
      const double own = 1.0 - std::pow(idle_fidelity(q, (durations[pair] + mean_1q_layer_units(2)) * unit), 2);
      top.add("theory_layer_" + tag, pair, layer);
      top.add("theory_simultaneous_" + tag, pair, own);
      theory_layer.push_back(layer);
      theory_sim.push_back(own);
    }
    entry["theory_layer"] = theory_layer;
    entry["theory_simultaneous"] = theory_sim;
    entry["effective_layer_units"] = std::max(first, long_units) + mean_1q_layer_units(4);
    top_results.push_back(entry);
  }

  auto& bottom = c.out.panel("figure4_bottom", "T1 = T2 (us)", "full-layer process error");
  json bottom_results = json::array();
  const LayerSpec chain = LayerSpec::chain(4, TwoQubitGateType::CX, long_units);
  for (double t : bottom_t) {
    const NoiseModel n = coherence_noise(4, t);
    json entry = {{"coherence_us", t}};
    c.series("layer_T" + std::to_string(t), [&] {
      const auto r = measure_layer(chain, n, layer_cfg, c.run);
      const auto v = layer_error(r);
      bottom.add("layer", t, v.value, v.err);
      entry["layer"] = v;
      entry["layer_result"] = r;
    });
    c.series("mirror_pauli_T" + std::to_string(t), [&] {
      const auto m = measure_mirror(chain, n, c.mirror_rb(mirror_depths, layer_cfg.randomizations), true, c.run);
      const auto v = mirror_error(m);
      bottom.add("mirror_pauli", t, v.value, v.err);
      entry["mirror_pauli"] = v;
      entry["mirror_result"] = mirror_json(m);
    });
    const double with_1q = 1.0 - decoherence_only_lf(chain, n, unit, true);
    const double only_2q = 1.0 - decoherence_only_lf(chain, n, unit, false);
    bottom.add("theory_with_1q", t, with_1q);
    bottom.add("theory_2q_only", t, only_2q);
    entry["theory_with_1q"] = with_1q;
    entry["theory_2q_only"] = only_2q;
    bottom_results.push_back(entry);
  }
  c.out.results = {{"top", top_results}, {"bottom", bottom_results}};
}

// --- figure 5 -----------------------------------------------------------------

void figure5(Campaign& c) {
  c.no_noise_source();
  c.read_unit_time();
  const double t_us = c.params.get<double>("coherence_us", kPresetCoherenceTime * 1e6);
  const int units = c.params.get<int>("gate_units", 8);
  const auto rates = c.params.get<std::vector<double>>("zz_khz", {0.0, 50.0, 100.0, 150.0, 200.0, 300.0});
  const auto pairs = c.params.get<std::vector<std::vector<int>>>("zz_pairs", {{0, 3}, {1, 2}});
  const auto mirror_depths = c.params.get<std::vector<int>>("mirror_depths", kMirrorDepths);
  const int exact_samples = c.params.get<int>("exact_samples", 10);
  c.params.finish();
  const RBConfig layer_cfg = c.rb(kLayerDepths, 30, RBFamily::Direct);
  RBConfig sim_cfg = layer_cfg;
  sim_cfg.family = RBFamily::Simultaneous;
  RBConfig stag_cfg = layer_cfg;
  stag_cfg.family = RBFamily::Staggered;
  const LayerSpec even = even_layer(units, units);
  const LayerSpec chain = LayerSpec::chain(4, TwoQubitGateType::CX, units);
  const NoiseModel base = coherence_noise(4, t_us);

  auto& top = c.out.panel("figure5_top", "ZZ rate (kHz)", "even-layer process error");
  auto& middle = c.out.panel("figure5_middle", "ZZ rate (kHz)", "full-layer process error");
  auto& bottom = c.out.panel("figure5_bottom", "ZZ rate (kHz)", "even-layer process error");
  json results = {{"top", json::array()}, {"middle", json::array()}, {"bottom", json::array()}};
  auto record = [](PlotPanel& panel, json& entry, const std::string& name, double x, Valued v) {
    panel.add(name, x, v.value, v.err);
    entry[name] = v;
  };

  for (double khz : rates) {
    const std::string at = "@" + std::to_string(khz) + "kHz";
    const NoiseModel always = with_zz(base, CoherentKind::ZZAlwaysOn, pairs, khz * 1e3);
    const NoiseModel simultaneous = with_zz(base, CoherentKind::ZZSimultaneous2Q, pairs, khz * 1e3);

    json t = {{"zz_khz", khz}};
    c.series("isolated" + at, [&] { record(top, t, "isolated", khz, product_error(measure_isolated(even, always, layer_cfg, c.run))); });
    c.series("simultaneous" + at, [&] { record(top, t, "simultaneous", khz, layer_error(measure_layer(even, always, sim_cfg, c.run))); });
    c.series("layer" + at, [&] { record(top, t, "layer", khz, layer_error(measure_layer(even, always, layer_cfg, c.run))); });
    results["top"].push_back(t);

    json m = {{"zz_khz", khz}};
    c.series("full_layer" + at, [&] { record(middle, m, "layer", khz, layer_error(measure_layer(chain, always, layer_cfg, c.run))); });
    c.series("mirror_pauli" + at, [&] { record(middle, m, "mirror_pauli", khz, mirror_error(measure_mirror(chain, always, c.mirror_rb(mirror_depths, layer_cfg.randomizations), true, c.run))); });
    c.series("mirror_no_pauli" + at, [&] { record(middle, m, "mirror_no_pauli", khz, mirror_error(measure_mirror(chain, always, c.mirror_rb(mirror_depths, layer_cfg.randomizations), false, c.run))); });
    c.series("exact" + at, [&] { record(middle, m, "exact", khz, {1.0 - exact_layer_fidelity(chain, always, exact_samples, c.config.seed, c.run), 0.0}); });
    results["middle"].push_back(m);

    json b = {{"zz_khz", khz}};
    c.series("simultaneous_zz_sim" + at, [&] { record(bottom, b, "simultaneous", khz, layer_error(measure_layer(even, simultaneous, sim_cfg, c.run))); });
    c.series("layer_zz_sim" + at, [&] { record(bottom, b, "layer", khz, layer_error(measure_layer(even, simultaneous, layer_cfg, c.run))); });
    c.series("staggered_zz_sim" + at, [&] { record(bottom, b, "staggered", khz, layer_error(measure_layer(even, simultaneous, stag_cfg, c.run))); });
    results["bottom"].push_back(b);
  }
  c.out.results = results;
}

// --- figure 6 -----------------------------------------------------------------

void figure6(Campaign& c) {
  c.no_noise_source();
  c.read_unit_time();
  const auto scenarios = c.params.get<std::string>("scenarios", "abcdefghi");
  const auto mirror_depths = c.params.get<std::vector<int>>("mirror_depths", kMirrorDepths);
  const int exact_samples = c.params.get<int>("exact_samples", 10);
  c.params.finish();
  const RBConfig layer_cfg = c.rb(kLayerDepths, 30, RBFamily::Direct);
  const LayerSpec chain = LayerSpec::chain(4, TwoQubitGateType::CX, 8);
  auto& panel = c.out.panel("figure6", "scenario (a = 0)", "full-layer process error");
  json results = json::array();
  for (char s : scenarios) {
    const NoiseModel noise = scenario_preset(s);
    const double x = s - 'a';
    json entry = {{"scenario", std::string(1, s)}, {"description", scenario_description(s)}};
    auto record = [&](const std::string& name, Valued v) {
      panel.add(name, x, v.value, v.err);
      entry[name] = v;
    };
    const std::string tag = std::string("_") + s;
    c.series("layer" + tag, [&] { record("layer", layer_error(measure_layer(chain, noise, layer_cfg, c.run))); });
    c.series("mirror_pauli" + tag, [&] { record("mirror_pauli", mirror_error(measure_mirror(chain, noise, c.mirror_rb(mirror_depths, layer_cfg.randomizations), true, c.run))); });
    c.series("mirror_no_pauli" + tag, [&] { record("mirror_no_pauli", mirror_error(measure_mirror(chain, noise, c.mirror_rb(mirror_depths, layer_cfg.randomizations), false, c.run))); });
    c.series("exact" + tag, [&] { record("exact", {1.0 - exact_layer_fidelity(chain, noise, exact_samples, c.config.seed, c.run), 0.0}); });
    results.push_back(entry);
  }
  c.out.results = {{"scenarios", results}};
}

// --- mirror vs layer --------------------------------------------------------------

void mirror_compare(Campaign& c) {
  c.read_unit_time();
  const auto chain_param = c.params.get<std::vector<int>>("chain", {});
  const int n_qubits = c.params.get<int>("n_qubits", 4);
  const auto mirror_depths = c.params.get<std::vector<int>>("mirror_depths", kMirrorDepths);
  const int exact_samples = c.params.get<int>("exact_samples", 10);
  c.params.finish();

  LayerSpec spec;
  NoiseModel noise;
  json source;
  if (!c.config.device.empty()) {
    const DeviceModel device = load_device(c.config.device);
    std::vector<int> chain = chain_param;
    if (chain.empty()) {
      const auto found = find_candidate_chains(device, n_qubits, 1);
      if (found.chains.empty()) throw std::invalid_argument("mirror_compare: no chain of " + std::to_string(n_qubits) + " qubits on the device");
      chain = found.chains[0].qubits;
    }
    spec = chain_layer(device, chain, c.run.unit_time);
    noise = chain_noise(device, chain);
    source = {{"device", c.config.device}, {"chain", chain}};
  } else {
    if (!chain_param.empty()) throw std::invalid_argument("mirror_compare: params.chain needs a device");
    noise = noise_preset(c.config.preset.empty() ? "incoherent" : c.config.preset);
    spec = LayerSpec::chain(noise.num_qubits);
    source = {{"preset", c.config.preset.empty() ? "incoherent" : c.config.preset}};
  }
  const RBConfig layer_cfg = c.rb(kLayerDepths, 10, RBFamily::Direct);
  auto& pol = c.out.panel("mirror_polarization", "depth l (layers)", "polarization S");
  auto& errs = c.out.panel("mirror_errors", "0", "full-layer process error");
  json results = {{"source", source}, {"layer", spec}};

  double lf = 0.0;
  double lf_err = 0.0;
  c.series("layer", [&] {
    const auto r = measure_layer(spec, noise, layer_cfg, c.run);
    lf = r.lf;
    lf_err = r.lf_err;
    errs.add("layer", 0, 1.0 - r.lf, r.lf_err);
    results["layer_result"] = r;
  });
  for (bool pauli : {true, false}) {
    const std::string name = pauli ? "mirror_pauli" : "mirror_no_pauli";
    c.series(name, [&] {
      const auto m = measure_mirror(spec, noise, c.mirror_rb(mirror_depths, layer_cfg.randomizations), pauli, c.run);
      for (std::size_t i = 0; i < m.polarization.depths.size(); ++i) pol.add(name, m.polarization.depths[i], m.polarization.mean[i], m.polarization.sem[i]);
      const auto v = mirror_error(m);
      errs.add(name, 0, v.value, v.err);
      results[name] = mirror_json(m);
    });
  }
  if (lf > 0.0) {
    for (int l : mirror_depths) pol.add("lf_power", l, std::pow(lf, l), l * std::pow(lf, l - 1) * lf_err);
  }
  if (spec.num_qubits() <= 6) {
    c.series("exact", [&] {
      const double f = exact_layer_fidelity(spec, noise, exact_samples, c.config.seed, c.run);
      errs.add("exact", 0, 1.0 - f);
      results["exact_fidelity"] = f;
    });
  }
  c.out.results = results;
}

// --- disjoint layer count --------------------------------------------------------

void layer_count_sweep(Campaign& c) {
  c.no_noise_source();
  c.read_unit_time();
  const int n = c.params.get<int>("n_qubits", 11);
  const auto counts = c.params.get<std::vector<int>>("layer_counts", {2, 4, 6, 10});
  const double t_us = c.params.get<double>("coherence_us", kPresetCoherenceTime * 1e6);
  const int units = c.params.get<int>("gate_units", 8);
  c.params.finish();
  const RBConfig cfg = c.rb(kLayerDepths, 10, RBFamily::Direct);
  const NoiseModel noise = coherence_noise(n, t_us);
  std::vector<std::pair<int, int>> edges;
  for (int q = 0; q + 1 < n; ++q) edges.emplace_back(q, q + 1);

  auto& panel = c.out.panel("lf_vs_layers", "disjoint layers", "layer fidelity");
  json results = json::array();
  for (int m : counts) {
    json entry = {{"layers", m}};
    c.series("layers_" + std::to_string(m), [&] {
      const auto split = decompose_disjoint(edges, m);
      if (static_cast<int>(split.classes.size()) != m) throw std::invalid_argument("cannot split the chain into " + std::to_string(m) + " disjoint layers");
      std::vector<std::vector<LayerEdge>> sets;
      for (const auto& cls : split.classes) {
        std::vector<LayerEdge> s;
        for (const auto& [a, b] : cls) s.push_back({a, b, TwoQubitGateType::CX, units});
        sets.push_back(s);
      }
      const LayerSpec spec = LayerSpec::from_edge_sets(n, sets);
      const auto r = measure_layer(spec, noise, cfg, c.run);
      const double predicted = decoherence_only_lf(spec, noise, c.run.unit_time);
      panel.add("measured", m, r.lf, r.lf_err);
      panel.add("predicted", m, predicted);
      entry["lf"] = r.lf;
      entry["lf_err"] = r.lf_err;
      entry["predicted_lf"] = predicted;
      entry["result"] = r;
    });
    results.push_back(entry);
  }
  c.out.results = {{"n_qubits", n}, {"sweep", results}};
}

// --- gamma from LF vs model gamma ---------------------------------------------

/// Relative uncertainty of a window LF from the element fidelities.
double window_rel_err(const std::vector<ElementResult>& elements, int start, int n) {
  double rel2 = 0.0;
  for (const auto& e : elements) {
    double w = 0.0;
    for (int q : e.qubits) w += (q >= start && q < start + n) ? 1.0 : 0.0;
    if (e.qubits.size() == 2) w /= 2.0;
    rel2 += std::pow(w * e.fidelity_err / e.fidelity, 2);
  }
  return std::sqrt(rel2);
}

void gamma_compare(Campaign& c) {
  c.no_noise_source();
  c.read_unit_time();
  const int n = c.params.get<int>("n_qubits", 16);
  const double lo = c.params.get<double>("error_min", 2e-3);
  const double hi = c.params.get<double>("error_max", 1e-2);
  c.params.finish();
  if (n < 2 || !(lo >= 0.0) || !(hi >= lo) || hi >= 0.75) throw std::invalid_argument("gamma_compare: need n_qubits >= 2 and 0 <= error_min <= error_max < 0.75");
  const RBConfig cfg = c.rb(kScanDepths, 10, RBFamily::Direct);
  std::mt19937_64 rng(c.config.seed);
  std::uniform_real_distribution<double> draw(lo, hi);
  NoiseModel noise = NoiseModel::noiseless(n);
  std::vector<double> injected;
  std::vector<double> gamma_pair;
  for (int q = 0; q + 1 < n; ++q) {
    const double e = draw(rng);
    const double alpha = alpha_from_fidelity(1.0 - e, 4);
    injected.push_back(e);
    noise.gate_depolarizing.push_back({q, q + 1, alpha});
    gamma_pair.push_back(gamma_from_det(ptm_from_channel(QuantumChannel::depolarizing(2, alpha))));
  }
  const LayerSpec spec = LayerSpec::chain(n);
  auto& panel = c.out.panel("gamma_vs_n", "subchain length N", "gamma");
  json results = {{"injected_errors", injected}, {"gamma_per_pair", gamma_pair}};
  c.series("chain", [&] {
    const auto r = measure_layer(spec, noise, cfg, c.run);
    std::vector<double> pair_f;
    for (const auto& e : r.elements) {
      if (e.qubits.size() == 2) pair_f.push_back(e.fidelity);
    }
    json table = json::array();
    for (const auto& s : r.subchains) {
      double model = 1.0;
      for (int i = 0; i + 1 < n; ++i) {
        const int inside = (i >= s.start && i < s.start + s.n) + (i + 1 >= s.start && i + 1 < s.start + s.n);
        model *= std::pow(gamma_pair[static_cast<std::size_t>(i)], inside / 2.0);
      }
      const double g = gamma_from_lf(s.lf);
      const double g_err = 2.0 * g * window_rel_err(r.elements, s.start, s.n);
      panel.add("gamma_from_lf", s.n, g, g_err);
      panel.add("gamma_model", s.n, model);
      table.push_back({{"n", s.n}, {"start", s.start}, {"lf", s.lf}, {"gamma_from_lf", g}, {"gamma_from_lf_err", g_err}, {"gamma_model", model}});
    }
    double model = 1.0;
    for (double g : gamma_pair) model *= g;
    const double g = gamma_from_lf(r.lf);
    const auto depth1 = gamma_depth1(r.eplg, n % 2 == 0 ? n : n - 1);
    results["result"] = r;
    results["subchains"] = table;
    results["gamma_from_lf"] = g;
    results["gamma_from_lf_err"] = 2.0 * g * r.lf_err / r.lf;
    results["gamma_model"] = model;
    results["gamma_exact_depolarizing"] = gamma_exact_depolarizing(pair_f);
    results["gamma_depth1"] = {depth1.first, depth1.second};
    results["relative_gap"] = std::abs(g - model) / model;
  });
  c.out.results = results;
}

// --- LF vs N pipeline ----------------------------------------------------------

/// Chain fidelities implied by the simulation noise: gate depolarizing times
/// T1/T2 decay over each sublayer's length, idle qubits decay only.
ChainFidelities model_chain_fidelities(const LayerSpec& spec, const NoiseModel& noise, double unit_time) {
  const int n = spec.num_qubits();
  ChainFidelities cf{std::vector<double>(static_cast<std::size_t>(n - 1), 1.0), std::vector<double>(static_cast<std::size_t>(n), 1.0)};
  const double one_q = mean_1q_layer_units(n);
  for (const auto& sub : spec.sublayers) {
    int longest = 0;
    for (const auto& e : sub.edges) longest = std::max(longest, e.duration_units);
    const double t = (longest + one_q) * unit_time;
    for (const auto& e : sub.edges) {
      const int i = std::min(e.a, e.b);
      double f = idle_fidelity(noise.qubits[static_cast<std::size_t>(e.a)], t) * idle_fidelity(noise.qubits[static_cast<std::size_t>(e.b)], t);
      for (const auto& g : noise.gate_depolarizing) {
        if (std::min(g.q0, g.q1) == i && std::max(g.q0, g.q1) == i + 1) f *= fidelity_from_alpha(g.alpha, 4);
      }
      cf.edge[static_cast<std::size_t>(i)] *= f;
    }
    for (int q : sub.idle) cf.idle[static_cast<std::size_t>(q)] *= idle_fidelity(noise.qubits[static_cast<std::size_t>(q)], t);
  }
  return cf;
}

void lf_scan(Campaign& c) {
  c.read_unit_time();
  if (c.config.device.empty()) throw std::invalid_argument("lf_scan needs a device file");
  const DeviceModel device = load_device(c.config.device);
  const int n_max = c.params.get<int>("n_max", std::min(device.num_qubits(), 20));
  const int k = c.params.get<int>("k", 3);
  const double ratio = c.params.get<double>("prune_ratio", kDefaultPruneRatio);
  const int beam = c.params.get<int>("beam_width", kDefaultBeamWidth);
  const bool isolated = c.params.get<bool>("isolated", true);
  c.params.finish();
  const RBConfig cfg = c.rb(kScanDepths, 10, RBFamily::Direct);

  const auto pruned = prune_long_gates(device, ratio);
  const auto search = find_candidate_chains(pruned.device, n_max, k, beam);
  if (search.chains.empty()) throw std::invalid_argument("lf_scan: no chain found");
  json results = {{"pruned_edges", pruned.removed}, {"warnings", pruned.warnings}, {"search", search}, {"chains", json::array()}};

  struct Best {
    double lf = -1.0;
    double lf_err = 0.0;
    int chain = -1;
    int start = 0;
    double analytic = -1.0;
  };
  std::vector<Best> best(static_cast<std::size_t>(n_max + 1));
  std::vector<double> isolated_errors;
  std::vector<double> layered_errors;
  auto& lf_panel = c.out.panel("lf_vs_n", "subchain length N", "layer fidelity");
  auto& eplg_panel = c.out.panel("eplg_vs_n", "subchain length N", "EPLG");

  for (std::size_t ci = 0; ci < search.chains.size(); ++ci) {
    const auto& chain = search.chains[ci].qubits;
    json entry = {{"qubits", chain}, {"predicted_lf", search.chains[ci].predicted_lf}};
    const std::string name = "chain_" + std::to_string(ci);
    c.series(name, [&] {
      const LayerSpec spec = chain_layer(pruned.device, chain, c.run.unit_time);
      const NoiseModel noise = chain_noise(pruned.device, chain);
      const auto r = measure_layer(spec, noise, cfg, c.run);
      const auto model = model_chain_fidelities(spec, noise, c.run.unit_time);
      json table = json::array();
      for (const auto& s : r.subchains) {
        const double err = s.lf * window_rel_err(r.elements, s.start, s.n);
        const auto analytic = best_subchain_lf(model, s.n);
        lf_panel.add(name, s.n, s.lf, err);
        auto& b = best[static_cast<std::size_t>(s.n)];
        if (s.lf > b.lf) b = {s.lf, err, static_cast<int>(ci), s.start, b.analytic};
        b.analytic = std::max(b.analytic, analytic.lf);
        table.push_back({{"n", s.n}, {"lf", s.lf}, {"lf_err", err}, {"eplg", s.eplg}, {"start", s.start}, {"window_lf", s.window_lf}, {"analytic_lf", analytic.lf}, {"analytic_start", analytic.start}});
      }
      for (const auto& e : r.elements) {
        if (e.qubits.size() == 2) layered_errors.push_back(1.0 - e.fidelity);
      }
      entry["result"] = r;
      entry["subchains"] = table;
      entry["model_fidelities"] = {{"edge", model.edge}, {"idle", model.idle}};
      if (isolated) {
        const auto iso = measure_isolated(spec, noise, cfg, c.run);
        json iso_json = json::array();
        for (const auto& e : iso) {
          isolated_errors.push_back(1.0 - e.fidelity);
          iso_json.push_back({{"qubits", {spec.labels[static_cast<std::size_t>(e.qubits[0])], spec.labels[static_cast<std::size_t>(e.qubits[1])]}}, {"fidelity", e.fidelity}, {"fidelity_err", e.fidelity_err}});
        }
        entry["isolated"] = iso_json;
      }
    });
    results["chains"].push_back(entry);
  }

  json lf_vs_n = json::array();
  for (int n = 2; n <= n_max; ++n) {
    const auto& b = best[static_cast<std::size_t>(n)];
    if (b.chain < 0) continue;
    const auto& chain = search.chains[static_cast<std::size_t>(b.chain)].qubits;
    const std::vector<int> window(chain.begin() + b.start, chain.begin() + b.start + n);
    const double e = eplg(b.lf, n - 1);
    lf_panel.add("best", n, b.lf, b.lf_err);
    lf_panel.add("analytic", n, b.analytic);
    eplg_panel.add("best", n, e, std::pow(b.lf, 1.0 / (n - 1)) * b.lf_err / (b.lf * (n - 1)));
    eplg_panel.add("analytic", n, eplg(b.analytic, n - 1));
    lf_vs_n.push_back({{"n", n}, {"lf", b.lf}, {"lf_err", b.lf_err}, {"eplg", e}, {"chain", b.chain}, {"start", b.start}, {"qubits", window}, {"analytic_lf", b.analytic}});
  }
  results["lf_vs_n"] = lf_vs_n;

  auto& q = c.out.panel("isolated_vs_layered", "quantile", "pair process error");
  for (auto* list : {&isolated_errors, &layered_errors}) {
    std::sort(list->begin(), list->end());
    const std::string name = list == &isolated_errors ? "isolated" : "layered";
    for (std::size_t i = 0; i < list->size(); ++i) q.add(name, (static_cast<double>(i) + 0.5) / static_cast<double>(list->size()), (*list)[i]);
  }
  c.out.results = results;
}

// --- theory ----------------------------------------------------------------------

void theory_campaign(Campaign& c) {
  c.no_noise_source();
  const int scatter = c.params.get<int>("random_channels", 300);
  c.params.finish();
  json checks = json::array();
  for (const auto& name : theory_check_names()) {
    c.series(name, [&] { checks.push_back(run_theory_check(name, c.config.seed)); });
  }

  auto& g = c.out.panel("gamma_vs_fidelity", "process fidelity", "gamma^-1/2");
  c.series("gamma_vs_fidelity", [&] {
    std::mt19937_64 rng(c.config.seed);
    for (int i = 0; i < scatter; ++i) {
      const auto p = random_pauli_probabilities(2, rng, 0.55);
      const PTM r = ptm_from_channel(QuantumChannel::pauli(2, p, 1e-12));
      g.add("random_pauli", process_fidelity(r), std::pow(gamma_from_det(r), -0.5));
    }
    for (int i = 0; i <= 45; ++i) {
      const double f = 0.55 + 0.01 * i;
      const auto b = gamma_bounds(std::min(f, 1.0));
      g.add("lower_bound", f, b.lower);
      g.add("upper_bound", f, b.upper);
      const auto s = single_pauli_point(std::min(f, 1.0));
      g.add("single_pauli", s.process_fidelity, s.gamma_inv_sqrt);
    }
    for (int i = 0; i <= 50; ++i) {
      const double alpha = 0.5 + 0.01 * i;
      const auto gd = global_depolarizing_point(10, alpha);
      g.add("global_depolarizing_n10", gd.process_fidelity, gd.gamma_inv_sqrt);
      const auto pd = pair_depolarizing_point(10, alpha);
      g.add("pair_depolarizing_n10", pd.process_fidelity, pd.gamma_inv_sqrt);
    }
  });
  auto& lemma = c.out.panel("lemma_gap", "N", "arithmetic - geometric mean gap");
  for (int n = 1; n <= 10; ++n) {
    const auto l = lemma_gap(0.8, 1.0, n);
    lemma.add("numeric_max", n, l.numeric_max);
    lemma.add("analytic_bound", n, l.analytic_bound);
  }
  bool all = true;
  for (const auto& ch : checks) all = all && ch.at("passed").get<bool>();
  c.out.results = {{"checks", checks}, {"all_passed", all}};
}

}  // namespace

CampaignOutput run_campaign(const CampaignConfig& config) {
  Campaign c(config);
  switch (config.kind) {
    case CampaignKind::Figure4: figure4(c); break;
    case CampaignKind::Figure5: figure5(c); break;
    case CampaignKind::Figure6: figure6(c); break;
    case CampaignKind::MirrorCompare: mirror_compare(c); break;
    case CampaignKind::LayerCountSweep: layer_count_sweep(c); break;
    case CampaignKind::GammaCompare: gamma_compare(c); break;
    case CampaignKind::LfScan: lf_scan(c); break;
    case CampaignKind::TheoryCheck: theory_campaign(c); break;
  }
  return std::move(c.out);
}

}  // namespace layerfid
