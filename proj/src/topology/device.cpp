#include "layerfid/topology/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "layerfid/noise/channels.hpp"

namespace layerfid {
namespace {

using nlohmann::json;

json time_to_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw std::invalid_argument(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T field(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) throw std::invalid_argument(where + ": missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(where + "." + name + ": wrong type");
  }
}

double time_field(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) throw std::invalid_argument(where + ": missing field '" + name + "'");
  if (j.at(name).is_null()) return std::numeric_limits<double>::infinity();
  return field<double>(j, name, where);
}

}  // namespace

void DeviceModel::validate() const {
  if (qubits.empty()) throw std::invalid_argument("device: no qubits");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto& q = qubits[i];
    const std::string where = "device qubit " + std::to_string(i);
    if (q.index != static_cast<int>(i)) throw std::invalid_argument(where + ": indices must run 0..n-1 in order");
    if (!(q.t1 > 0.0) || !(q.t2 > 0.0)) throw std::invalid_argument(where + ": T1 and T2 must be positive");
    if (q.t2 > 2.0 * q.t1 * (1.0 + 1e-12)) throw std::invalid_argument(where + ": T2 > 2 T1");
    if (!(q.readout_fidelity >= 0.0 && q.readout_fidelity <= 1.0)) throw std::invalid_argument(where + ": readout fidelity outside [0, 1]");
  }
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string where = "device edge " + std::to_string(i) + " (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
    if (e.a < 0 || e.b < 0 || e.a >= num_qubits() || e.b >= num_qubits()) throw std::invalid_argument(where + ": qubit out of range");
    if (e.a == e.b) throw std::invalid_argument(where + ": self loop");
    if (!seen.insert({std::min(e.a, e.b), std::max(e.a, e.b)}).second) throw std::invalid_argument(where + ": duplicate edge");
    if (!(e.duration > 0.0)) throw std::invalid_argument(where + ": duration must be positive");
    if (!(e.error >= 0.0 && e.error < 1.0)) throw std::invalid_argument(where + ": error outside [0, 1)");
  }
}

int DeviceModel::edge_index(int a, int b) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if ((edges[i].a == a && edges[i].b == b) || (edges[i].a == b && edges[i].b == a)) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::vector<int>> DeviceModel::adjacency() const {
  std::vector<std::vector<int>> adj(qubits.size());
  for (const auto& e : edges) {
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

bool DeviceModel::connected() const {
  if (qubits.empty()) return true;
  const auto adj = adjacency();
  std::vector<char> seen(qubits.size(), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == num_qubits();
}

void to_json(json& j, const DeviceModel& d) {
  j = {{"schema_version", kDeviceSchemaVersion}, {"time_unit", "s"}, {"qubits", json::array()}, {"edges", json::array()}};
  for (const auto& q : d.qubits) {
    j["qubits"].push_back({{"index", q.index}, {"t1", time_to_json(q.t1)}, {"t2", time_to_json(q.t2)}, {"readout_fidelity", q.readout_fidelity}});
  }
  for (const auto& e : d.edges) {
    j["edges"].push_back({{"pair", {e.a, e.b}}, {"gate", std::string(to_string(e.gate))}, {"error", e.error}, {"duration", e.duration}});
  }
}

void from_json(const json& j, DeviceModel& d) {
  reject_unknown(j, {"schema_version", "time_unit", "qubits", "edges"}, "device");
  if (field<int>(j, "schema_version", "device") != kDeviceSchemaVersion) throw std::invalid_argument("device: unsupported schema_version");
  if (j.contains("time_unit") && j.at("time_unit") != "s") throw std::invalid_argument("device.time_unit: only \"s\" is supported");
  d = DeviceModel{};
  const json qs = field<json>(j, "qubits", "device");
  if (!qs.is_array()) throw std::invalid_argument("device.qubits: expected an array");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const std::string where = "device.qubits[" + std::to_string(i) + "]";
    reject_unknown(qs[i], {"index", "t1", "t2", "readout_fidelity"}, where);
    DeviceQubit q;
    q.index = field<int>(qs[i], "index", where);
    q.t1 = time_field(qs[i], "t1", where);
    q.t2 = time_field(qs[i], "t2", where);
    q.readout_fidelity = qs[i].contains("readout_fidelity") ? field<double>(qs[i], "readout_fidelity", where) : 1.0;
    d.qubits.push_back(q);
  }
  std::sort(d.qubits.begin(), d.qubits.end(), [](const DeviceQubit& a, const DeviceQubit& b) { return a.index < b.index; });
  const json es = field<json>(j, "edges", "device");
  if (!es.is_array()) throw std::invalid_argument("device.edges: expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string where = "device.edges[" + std::to_string(i) + "]";
    reject_unknown(es[i], {"pair", "gate", "error", "duration"}, where);
    const auto pair = field<std::vector<int>>(es[i], "pair", where);
    if (pair.size() != 2) throw std::invalid_argument(where + ".pair: expected two qubits");
    DeviceEdge e;
    e.a = pair[0];
    e.b = pair[1];
    e.gate = parse_two_qubit_gate_type(field<std::string>(es[i], "gate", where));
    e.error = field<double>(es[i], "error", where);
    e.duration = field<double>(es[i], "duration", where);
    d.edges.push_back(e);
  }
  d.validate();
}

DeviceModel load_device(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open device file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": invalid JSON: " + e.what());
  }
  try {
    return j.get<DeviceModel>();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

PruneResult prune_long_gates(const DeviceModel& device, double ratio) {
  device.validate();
  if (!(ratio > 0.0)) throw std::invalid_argument("prune_long_gates: ratio must be positive");
  PruneResult r;
  r.device = device;
  if (device.edges.empty()) return r;
  double mean = 0.0;
  for (const auto& e : device.edges) mean += e.duration;
  mean /= static_cast<double>(device.edges.size());
  r.device.edges.clear();
  for (const auto& e : device.edges) {
    if (e.duration > ratio * mean) {
      r.removed.push_back({e.a, e.b});
    } else {
      r.device.edges.push_back(e);
    }
  }
  if (device.connected() && !r.device.connected()) r.warnings.push_back("pruning long gates disconnected the coupling graph");
  return r;
}

LayerSpec chain_layer(const DeviceModel& device, const std::vector<int>& chain, double unit_time) {
  if (chain.size() < 2) throw std::invalid_argument("chain_layer: a chain needs at least two qubits");
  std::vector<std::vector<LayerEdge>> sets(2);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const int idx = device.edge_index(chain[i], chain[i + 1]);
    if (idx < 0) throw std::invalid_argument("chain_layer: qubits " + std::to_string(chain[i]) + " and " + std::to_string(chain[i + 1]) + " are not coupled");
    const auto& e = device.edges[static_cast<std::size_t>(idx)];
    const int units = std::max(1, static_cast<int>(std::lround(e.duration / unit_time)));
    // Keep the device's gate orientation.
    const bool forward = e.a == chain[i];
    const int a = static_cast<int>(forward ? i : i + 1);
    const int b = static_cast<int>(forward ? i + 1 : i);
    sets[i % 2].push_back({a, b, e.gate, units});
  }
  if (sets[1].empty()) sets.pop_back();
  LayerSpec spec = LayerSpec::from_edge_sets(static_cast<int>(chain.size()), sets);
  spec.labels = chain;
  return spec;
}

double predicted_lf(const std::vector<int>& chain, const DeviceModel& device) {
  if (chain.size() < 2) throw std::invalid_argument("predicted_lf: a chain needs at least two qubits");
  std::set<int> distinct(chain.begin(), chain.end());
  if (distinct.size() != chain.size()) throw std::invalid_argument("predicted_lf: chain repeats a qubit");
  double lf = 1.0;
  for (std::size_t parity = 0; parity < 2; ++parity) {
    double longest = 0.0;
    std::vector<char> gated(chain.size(), 0);
    bool any = false;
    for (std::size_t i = parity; i + 1 < chain.size(); i += 2) {
      const int idx = device.edge_index(chain[i], chain[i + 1]);
      if (idx < 0) throw std::invalid_argument("predicted_lf: chain qubits " + std::to_string(chain[i]) + " and " + std::to_string(chain[i + 1]) + " are not coupled");
      const auto& e = device.edges[static_cast<std::size_t>(idx)];
      lf *= 1.0 - e.error;
      longest = std::max(longest, e.duration);
      gated[i] = gated[i + 1] = 1;
      any = true;
    }
    if (!any) continue;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (gated[i]) continue;
      const auto& q = device.qubits.at(static_cast<std::size_t>(chain[i]));
      const double t1[] = {q.t1};
      const double t2[] = {q.t2};
      lf *= 1.0 - incoherent_layer_error(t1, t2, longest);
    }
  }
  return lf;
}

}  // namespace layerfid
