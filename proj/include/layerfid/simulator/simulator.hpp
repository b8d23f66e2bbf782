#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "layerfid/circuits/circuit.hpp"
#include "layerfid/circuits/schedule.hpp"
#include "layerfid/core/channel.hpp"
#include "layerfid/noise/noise_model.hpp"

namespace layerfid {

/// Dense evolution cap per component.
inline constexpr int kMaxDenseQubits = 10;

/// Tensor product of independent blocks. Each block holds a density matrix
/// on `qubits` (ascending, first qubit most significant).
struct ProductState {
  struct Block {
    std::vector<int> qubits;
    ComplexMatrix rho;
  };
  int num_qubits = 0;
  std::vector<Block> blocks;

  static ProductState zero_state(std::vector<std::vector<int>> partition, int num_qubits);
  /// Full density matrix; num_qubits must be within the dense cap.
  DensityMatrix to_density_matrix() const;
};

/// Groups qubits that any gate or noise term couples. Throws if a group
/// exceeds kMaxDenseQubits.
std::vector<std::vector<int>> coupled_components(const ScheduledCircuit& sched, const NoiseModel& noise);

/// Trotterized density-matrix evolution. Each unit slice applies, in order:
/// the gate unitary (ideal generators plus rotation and crosstalk errors,
/// exponentiated together), ZZ phases, Z drift, stochastic Pauli terms,
/// depolarizing after each completed 2Q gate, then T1/T2 per qubit.
/// Zero-duration slices apply their Rz only. Slice unitaries are cached.
class Simulator {
 public:
  explicit Simulator(NoiseModel noise);

  const NoiseModel& noise() const { return noise_; }

  ProductState evolve_product(const ScheduledCircuit& sched);
  /// Single dense block over all qubits.
  DensityMatrix evolve(const ScheduledCircuit& sched);
  /// Process fidelity of the noisy schedule against the unitary `target`,
  /// from the Choi state built column by column. n <= 6.
  double process_fidelity(const ScheduledCircuit& sched, const ComplexMatrix& target);

 private:
  void run(const ScheduledCircuit& sched, ProductState& state);
  const ComplexMatrix& slice_unitary(const Slice& slice, const std::vector<int>& qubits, double unit_time);

  NoiseModel noise_;
  std::map<std::string, ComplexMatrix> cache_;
};

DensityMatrix evolve(const ScheduledCircuit& sched, const NoiseModel& noise);

/// Probability that `unit_qubits` read out `target` (first listed qubit
/// most significant).
double unit_survival(const DensityMatrix& rho, std::span<const int> unit_qubits, std::uint64_t target);
double unit_survival(const ProductState& state, std::span<const int> unit_qubits, std::uint64_t target);

/// Distribution of the Hamming distance between the readout of
/// `unit_qubits` and `target`, entries k = 0..size.
std::vector<double> hamming_distribution(const ProductState& state, std::span<const int> unit_qubits, std::uint64_t target);

/// Binomial draw of target hits per unit. shots = 0 returns an empty list.
std::vector<std::uint64_t> sample(std::span<const double> probabilities, std::uint64_t shots, std::mt19937_64& rng);

struct SimOutcome {
  std::vector<double> survival;                      // exact, per unit
  std::optional<std::vector<std::uint64_t>> counts;  // target hits per unit
  /// Mirror families: Hamming-distance distribution of the single unit,
  /// exact or sampled.
  std::vector<double> hamming;
  std::uint64_t shots = 0;
  int total_units = 0;
  std::uint64_t seed = 0;

  /// Sampled frequency when counts exist, exact probability otherwise.
  double observed(std::size_t unit) const;
};

struct SimOptions {
  double unit_time = kPresetUnitTime;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Schedules `rb` with the alignment it asks for, evolves it and reads out
/// every unit.
SimOutcome simulate(const RBCircuit& rb, Simulator& sim, const SimOptions& options);

void to_json(nlohmann::json& j, const SimOutcome& outcome);

}  // namespace layerfid
