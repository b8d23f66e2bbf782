#pragma once

#include <vector>

#include <json.hpp>

#include "layerfid/circuits/circuit.hpp"

namespace layerfid {

/// One native op as seen by a slice. A 2Q gate of k units appears in k
/// consecutive unit slices with step = 0..k-1 and steps = k.
struct SliceOp {
  NativeOp op;
  int step = 0;
  int steps = 1;
};

struct Slice {
  int duration = 1;  // 1 unit, or 0 for Rz-only slices
  std::vector<SliceOp> ops;
  bool barrier_before = false;
};

struct ScheduledCircuit {
  int num_qubits = 0;
  double unit_time = 50e-9;  // seconds
  std::vector<Slice> slices;

  int total_units() const;
  double wall_time() const { return total_units() * unit_time; }
};

enum class Alignment { Early, Late };

/// Places every op on the unit-time grid. Early starts each op as soon as
/// its qubits are free; Late pushes ops as close to the end as barriers
/// allow, so idle padding lands at the start. Zero-duration Rz ops get
/// their own slices and merge per qubit. Deterministic.
ScheduledCircuit schedule(const Circuit& circuit, double unit_time, Alignment alignment = Alignment::Early);

void to_json(nlohmann::json& j, const ScheduledCircuit& s);

}  // namespace layerfid
