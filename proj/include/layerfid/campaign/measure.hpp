#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "layerfid/circuits/circuit.hpp"
#include "layerfid/estimation/layer_fidelity.hpp"
#include "layerfid/noise/noise_model.hpp"
#include "layerfid/simulator/simulator.hpp"
#include "layerfid/topology/device.hpp"

namespace layerfid {

struct RunOptions {
  double unit_time = kPresetUnitTime;
  int workers = 0;  // 0 picks the hardware concurrency
};

/// Calls job(i) for i in [0, count) on a pool of threads. Each thread gets
/// its own worker index so callers can keep per-thread state.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t job, int worker)>& job);

/// Simulates every circuit under `noise`. One Simulator per worker; the
/// result order follows the input. Shots and seed come from the circuits'
/// RB config.
std::vector<SimOutcome> simulate_batch(const std::vector<RBCircuit>& circuits, const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed, const RunOptions& options);

/// Decay curves of every unit of every sublayer for a layer-style family
/// (direct, simultaneous or staggered), in sublayer then unit order.
std::vector<DecayCurve> layer_curves(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, const RunOptions& options);
LayerFidelityResult measure_layer(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, const RunOptions& options);

/// Fit of one curve as a protocol element.
ElementResult fit_element(DecayCurve curve);

/// Isolated RB of each edge, one element per edge in sublayer order.
std::vector<ElementResult> measure_isolated(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, const RunOptions& options);

struct MirrorMeasurement {
  DecayCurve polarization;  // mean S per depth, dimension 2^n
  MirrorFit fit;
};

MirrorMeasurement measure_mirror(const LayerSpec& spec, const NoiseModel& noise, const RBConfig& cfg, bool pauli_layer, const RunOptions& options);

/// Exact process fidelity of one full layer (each sublayer behind a random
/// 1Q Clifford layer, with barriers), averaged over `samples` draws. n <= 6.
double exact_layer_fidelity(const LayerSpec& spec, const NoiseModel& noise, int samples, std::uint64_t seed, const RunOptions& options);

/// Expected X90 slices of a layer of independent random 1Q Cliffords on n
/// qubits (the maximum X90 count over the qubits).
double mean_1q_layer_units(int num_qubits);

/// LF predicted from T1/T2 alone: every qubit decoheres for the sublayer's
/// longest 2Q gate plus the mean 1Q layer, in every sublayer.
double decoherence_only_lf(const LayerSpec& spec, const NoiseModel& noise, double unit_time, bool include_1q_layer = true);

/// Process fidelity of T1/T2 decay over `duration` seconds on one qubit.
double idle_fidelity(const QubitCoherence& c, double duration);

/// Noise on a chain of device qubits (register position i is chain[i]):
/// per-qubit T1/T2, and a depolarizing channel after each 2Q gate whose
/// fidelity is the edge fidelity with the gate's own T1/T2 decay divided
/// out (capped at 1).
NoiseModel chain_noise(const DeviceModel& device, const std::vector<int>& chain);

}  // namespace layerfid
