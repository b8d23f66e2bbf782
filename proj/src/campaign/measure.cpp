#include "layerfid/campaign/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "layerfid/circuits/builders.hpp"
#include "layerfid/circuits/schedule.hpp"
#include "layerfid/core/clifford.hpp"
#include "layerfid/noise/channels.hpp"

namespace layerfid {
namespace {

int resolve_workers(int workers, std::size_t count) {
  int n = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(count, 1)));
}

std::size_t depth_index(const RBConfig& cfg, int depth) {
  const auto it = std::find(cfg.depths.begin(), cfg.depths.end(), depth);
  if (it == cfg.depths.end()) throw std::logic_error("circuit depth not in the RB config");
  return static_cast<std::size_t>(it - cfg.depths.begin());
}

}  // namespace

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t, int)>& job) {
  const int n = resolve_workers(workers, count);
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i, w);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SimOutcome> simulate_batch(const std::vector<RBCircuit>& circuits, const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed, const RunOptions& options) {
  const int n = resolve_workers(options.workers, circuits.size());
  std::vector<std::unique_ptr<Simulator>> sims;
  for (int w = 0; w < n; ++w) sims.push_back(std::make_unique<Simulator>(noise));
  std::vector<SimOutcome> out(circuits.size());
  const SimOptions sim_options{options.unit_time, shots, seed};
  parallel_for(circuits.size(), n, [&](std::size_t i, int w) { out[i] = simulate(circuits[i], *sims[static_cast<std::size_t>(w)], sim_options); });
  return out;
}

std::vector<DecayCurve> layer_curves(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, const RunOptions& options) {
  if (cfg.family != RBFamily::Direct && cfg.family != RBFamily::Simultaneous && cfg.family != RBFamily::Staggered) {
    throw std::invalid_argument("layer_curves: family must be direct, simultaneous or staggered");
  }
  std::vector<DecayCurve> curves;
  for (int m = 0; m < static_cast<int>(spec.sublayers.size()); ++m) {
    const auto units = units_of(spec, m);
    const auto circuits = build_rb(spec, cfg, m);
    const auto outcomes = simulate_batch(circuits, noise, static_cast<std::uint64_t>(cfg.shots), cfg.seed, options);
    std::map<int, std::size_t> slot;
    for (std::size_t u = 0; u < units.size(); ++u) slot[units[u].element] = u;
    std::vector<std::vector<std::vector<double>>> samples(units.size(), std::vector<std::vector<double>>(cfg.depths.size()));
    for (std::size_t c = 0; c < circuits.size(); ++c) {
      const auto d = depth_index(cfg, circuits[c].depth);
      for (std::size_t u = 0; u < circuits[c].units.size(); ++u) {
        samples[slot.at(circuits[c].units[u].element)][d].push_back(outcomes[c].observed(u));
      }
    }
    for (std::size_t u = 0; u < units.size(); ++u) {
      auto curve = make_curve(cfg.depths, samples[u], units[u].dimension());
      curve.sublayer = m;
      curve.qubits = units[u].qubits;
      curves.push_back(std::move(curve));
    }
  }
  return curves;
}

LayerFidelityResult measure_layer(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, const RunOptions& options) {
  return assemble_layer_fidelity(spec, layer_curves(spec, noise, cfg, options));
}

ElementResult fit_element(DecayCurve curve) {
  ElementResult e;
  e.sublayer = curve.sublayer;
  e.qubits = curve.qubits;
  e.fit = fit_decay(curve);
  const double d2 = static_cast<double>(curve.dimension) * curve.dimension;
  e.fidelity = fidelity_from_alpha(e.fit.alpha, curve.dimension);
  e.fidelity_err = (d2 - 1.0) / d2 * e.fit.alpha_err;
  e.curve = std::move(curve);
  return e;
}

std::vector<ElementResult> measure_isolated(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, const RunOptions& options) {
  RBConfig iso = cfg;
  iso.family = RBFamily::Isolated;
  std::vector<ElementResult> out;
  for (int m = 0; m < static_cast<int>(spec.sublayers.size()); ++m) {
    const auto units = units_of(spec, m);
    for (int e = 0; e < static_cast<int>(spec.sublayers[static_cast<std::size_t>(m)].edges.size()); ++e) {
      const auto circuits = build_isolated_rb(spec, m, e, iso);
      const auto outcomes = simulate_batch(circuits, noise, static_cast<std::uint64_t>(iso.shots), iso.seed, options);
      std::vector<std::vector<double>> samples(iso.depths.size());
      for (std::size_t c = 0; c < circuits.size(); ++c) samples[depth_index(iso, circuits[c].depth)].push_back(outcomes[c].observed(0));
      auto curve = make_curve(iso.depths, samples, 4);
      curve.sublayer = m;
      curve.qubits = units[static_cast<std::size_t>(e)].qubits;
      out.push_back(fit_element(std::move(curve)));
    }
  }
  return out;
}

MirrorMeasurement measure_mirror(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, bool pauli_layer, const RunOptions& options) {
  RBConfig mc = cfg;
  mc.family = pauli_layer ? RBFamily::MirrorPauli : RBFamily::MirrorNoPauli;
  const int n = spec.num_qubits();
  const auto circuits = build_mirror(spec, mc, pauli_layer);
  const auto outcomes = simulate_batch(circuits, noise, static_cast<std::uint64_t>(mc.shots), mc.seed, options);
  std::vector<std::vector<double>> samples(mc.depths.size());
  for (std::size_t c = 0; c < circuits.size(); ++c) {
    samples[depth_index(mc, circuits[c].depth)].push_back(polarization_from_hamming(outcomes[c].hamming, n));
  }
  MirrorMeasurement m;
  // Polarization can dip below zero; make_curve only needs finite values.
  m.polarization.depths = mc.depths;
  m.polarization.dimension = 1 << n;
  for (const auto& s : samples) {
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    const double sem = s.size() > 1 ? std::sqrt(var / static_cast<double>(s.size() - 1) / static_cast<double>(s.size())) : 0.0;
    m.polarization.mean.push_back(mean);
    m.polarization.sem.push_back(sem);
  }
  for (int q = 0; q < n; ++q) m.polarization.qubits.push_back(q);
  m.fit = fit_mirror(m.polarization.depths, m.polarization.mean, m.polarization.sem, n);
  return m;
}

double exact_layer_fidelity(const LayerSpec& spec, const NoiseModel& noise, int samples, std::uint64_t seed, const RunOptions& options) {
  if (samples < 1) throw std::invalid_argument("exact_layer_fidelity: samples must be positive");
  const int n = spec.num_qubits();
  const auto& group = SingleQubitCliffords::instance();
  std::vector<Circuit> circuits;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, kSingleQubitCliffordCount - 1);
  for (int s = 0; s < samples; ++s) {
    Circuit c;
    c.num_qubits = n;
    for (const auto& sub : spec.sublayers) {
      for (int q = 0; q < n; ++q) c.add(group.ops(pick(rng), q));
      c.barrier();
      for (const auto& e : sub.edges) c.add(NativeOp::two_qubit(e.type, e.a, e.b), e.duration_units);
      c.barrier();
    }
    circuits.push_back(std::move(c));
  }
  const int w = resolve_workers(options.workers, circuits.size());
  std::vector<std::unique_ptr<Simulator>> sims;
  for (int i = 0; i < w; ++i) sims.push_back(std::make_unique<Simulator>(noise));
  std::vector<double> f(circuits.size());
  parallel_for(circuits.size(), w, [&](std::size_t i, int worker) {
    std::vector<NativeOp> ops;
    for (const auto& ins : circuits[i].instructions) {
      if (ins.kind == Instruction::Kind::Op) ops.push_back(ins.op);
    }
    f[i] = sims[static_cast<std::size_t>(worker)]->process_fidelity(schedule(circuits[i], options.unit_time), sequence_unitary(ops, n));
  });
  double total = 0.0;
  for (double v : f) total += v;
  return total / static_cast<double>(f.size());
}

double mean_1q_layer_units(int num_qubits) {
  const auto& group = SingleQubitCliffords::instance();
  std::vector<double> at_most;  // P(one Clifford has <= k X90s)
  for (int i = 0; i < kSingleQubitCliffordCount; ++i) {
    const auto k = static_cast<std::size_t>(group.x90_count(i));
    if (at_most.size() <= k) at_most.resize(k + 1, 0.0);
    at_most[k] += 1.0 / kSingleQubitCliffordCount;
  }
  for (std::size_t k = 1; k < at_most.size(); ++k) at_most[k] += at_most[k - 1];
  double mean = 0.0;
  for (std::size_t k = 0; k + 1 < at_most.size(); ++k) mean += 1.0 - std::pow(at_most[k], num_qubits);
  return mean;
}

double idle_fidelity(const QubitCoherence& c, double duration) {
  const double t1[] = {c.t1};
  const double t2[] = {c.t2};
  return 1.0 - incoherent_layer_error(t1, t2, duration);
}

double decoherence_only_lf(const LayerSpec& spec, const NoiseModel& noise, double unit_time, bool include_1q_layer) {
  const double one_q = include_1q_layer ? mean_1q_layer_units(spec.num_qubits()) : 0.0;
  double lf = 1.0;
  for (const auto& sub : spec.sublayers) {
    int longest = 0;
    for (const auto& e : sub.edges) longest = std::max(longest, e.duration_units);
    const double t = (longest + one_q) * unit_time;
    for (int q = 0; q < spec.num_qubits(); ++q) lf *= idle_fidelity(noise.qubits.at(static_cast<std::size_t>(q)), t);
  }
  return lf;
}

NoiseModel chain_noise(const DeviceModel& device, const std::vector<int>& chain) {
  NoiseModel noise = NoiseModel::noiseless(static_cast<int>(chain.size()));
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& q = device.qubits.at(static_cast<std::size_t>(chain[i]));
    noise.qubits[i] = {q.t1, q.t2};
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const int idx = device.edge_index(chain[i], chain[i + 1]);
    if (idx < 0) throw std::invalid_argument("chain_noise: qubits " + std::to_string(chain[i]) + " and " + std::to_string(chain[i + 1]) + " are not coupled");
    const auto& e = device.edges[static_cast<std::size_t>(idx)];
    const double decay = idle_fidelity(noise.qubits[i], e.duration) * idle_fidelity(noise.qubits[i + 1], e.duration);
    const double gate = std::min(1.0, (1.0 - e.error) / decay);
    noise.gate_depolarizing.push_back({static_cast<int>(i), static_cast<int>(i + 1), alpha_from_fidelity(gate, 4)});
  }
  noise.validate();
  return noise;
}

}  // namespace layerfid
