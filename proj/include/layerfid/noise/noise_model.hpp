#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layerfid/core/gates.hpp"
#include "layerfid/core/pauli.hpp"

namespace layerfid {

enum class CoherentKind {
  ZZAlwaysOn,
  ZZSimultaneous2Q,
  Overrotation2Q,
  Underrotation1Q,
  ZDriftPerSlice,
  DriveCrosstalk,
};

std::string_view to_string(CoherentKind kind);
CoherentKind parse_coherent_kind(std::string_view name);

/// One coherent error source.
///
/// qubits by kind:
///   zz_*              {a, b}
///   overrotation_2q   {} for every 2Q gate, or {a, b} for one edge
///   underrotation_1q  {} for every qubit, or a list of qubits
///   z_drift_per_slice {} for every qubit, or a list of qubits
///   drive_crosstalk   {gate_a, gate_b, source, spectator}
/// strength: Hz for zz, signed fraction for rotations and crosstalk,
/// radians per unit slice for drift.
struct CoherentTerm {
  CoherentKind kind = CoherentKind::ZZAlwaysOn;
  std::vector<int> qubits;
  double strength = 0.0;
};

/// rho -> (1 - p) rho + p P rho P applied every unit slice.
struct StochasticTerm {
  std::vector<int> qubits;
  PauliString pauli;
  double probability = 0.0;
};

/// Depolarizing channel with parameter alpha applied on an edge after each
/// completed 2Q gate.
struct GateDepolarizing {
  int q0 = 0;
  int q1 = 1;
  double alpha = 1.0;
};

struct QubitCoherence {
  double t1 = std::numeric_limits<double>::infinity();
  double t2 = std::numeric_limits<double>::infinity();
};

struct NoiseModel {
  int num_qubits = 0;
  std::vector<QubitCoherence> qubits;
  std::vector<CoherentTerm> coherent_terms;
  std::vector<StochasticTerm> stochastic_terms;
  std::vector<GateDepolarizing> gate_depolarizing;

  static NoiseModel noiseless(int num_qubits);
  static NoiseModel uniform_coherence(int num_qubits, double t1, double t2);

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
  bool has_decoherence() const;
};

void to_json(nlohmann::json& j, const NoiseModel& model);
void from_json(const nlohmann::json& j, NoiseModel& model);

/// Activity of one unit slice, as seen by the coherent terms.
struct SliceContext {
  struct ActiveGate {
    int q0 = 0;
    int q1 = 1;
    TwoQubitGateType type = TwoQubitGateType::CX;
    int duration_units = 1;
  };

  double dt = 0.0;  // seconds
  std::vector<ActiveGate> gates;
  std::vector<int> x90_qubits;

  bool in_two_qubit_gate(int q) const;
  const ActiveGate* gate_on(int a, int b) const;
};

/// Hermitian operator H on `qubits`; the slice factor is exp(-i H).
struct LocalGenerator {
  std::vector<int> qubits;
  ComplexMatrix h;
};

/// Generators contributed by `term` during one slice. Rotation and crosstalk
/// terms return the error part only; the simulator adds them to the gate
/// generator before exponentiating.
std::vector<LocalGenerator> coherent_term_generators(const CoherentTerm& term, const SliceContext& ctx, int num_qubits);

/// Product of exp(-i H) over the term's generators, embedded in n qubits.
ComplexMatrix coherent_term_unitary(const CoherentTerm& term, const SliceContext& ctx, int num_qubits);

// --- presets ------------------------------------------------------------------

/// 4-qubit line 0-1-2-3 with T1 = T2 = 50 us.
inline constexpr double kPresetCoherenceTime = 50e-6;
inline constexpr double kPresetUnitTime = 50e-9;

NoiseModel incoherent_preset();
/// ZZ between the given pairs at `rate_hz` on top of the incoherent preset.
NoiseModel zz_preset(CoherentKind kind, const std::vector<std::pair<int, int>>& pairs, double rate_hz);
/// Coherent error scenarios 'a'..'i' on the incoherent preset.
NoiseModel scenario_preset(char scenario);
std::string scenario_description(char scenario);

}  // namespace layerfid
