#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "layerfid/circuits/layer_spec.hpp"
#include "layerfid/core/gates.hpp"

namespace layerfid {

inline constexpr int kDeviceSchemaVersion = 1;

struct DeviceQubit {
  int index = 0;
  double t1 = 0.0;  // seconds
  double t2 = 0.0;  // seconds
  double readout_fidelity = 1.0;
};

struct DeviceEdge {
  int a = 0;
  int b = 1;
  TwoQubitGateType gate = TwoQubitGateType::ECR;
  double error = 0.0;     // isolated process error
  double duration = 0.0;  // seconds
};

/// Coupling graph with calibration data. JSON layout:
///   {"schema_version": 1, "time_unit": "s",
///    "qubits": [{"index", "t1", "t2", "readout_fidelity"}],
///    "edges":  [{"pair": [a, b], "gate", "error", "duration"}]}
/// Qubit indices must be 0..n-1; t1/t2 may be null for "no decay".
struct DeviceModel {
  std::vector<DeviceQubit> qubits;
  std::vector<DeviceEdge> edges;

  int num_qubits() const { return static_cast<int>(qubits.size()); }
  void validate() const;
  /// Index into `edges`, or -1.
  int edge_index(int a, int b) const;
  std::vector<std::vector<int>> adjacency() const;
  bool connected() const;
};

void to_json(nlohmann::json& j, const DeviceModel& d);
void from_json(const nlohmann::json& j, DeviceModel& d);

/// Reads and validates a device file; errors name the file and field.
DeviceModel load_device(const std::filesystem::path& path);

struct PruneResult {
  DeviceModel device;
  std::vector<std::pair<int, int>> removed;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultPruneRatio = 1.25;

/// Drops edges longer than ratio x mean duration.
PruneResult prune_long_gates(const DeviceModel& device, double ratio = kDefaultPruneRatio);

/// Even/odd layer of a chain of device qubits; LayerSpec qubit i is
/// chain[i] and labels carry the device indices.
LayerSpec chain_layer(const DeviceModel& device, const std::vector<int>& chain, double unit_time);

/// Product over both sublayers of (1 - edge error) for gated pairs and
/// (1 - incoherent_layer_error) for idle qubits over the sublayer's longest
/// gate duration.
double predicted_lf(const std::vector<int>& chain, const DeviceModel& device);

}  // namespace layerfid
