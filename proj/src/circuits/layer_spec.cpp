#include "layerfid/circuits/layer_spec.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace layerfid {

int LayerSpec::num_edges() const {
  int total = 0;
  for (const auto& s : sublayers) total += static_cast<int>(s.edges.size());
  return total;
}

void LayerSpec::validate() const {
  const int n = num_qubits();
  if (n < 1) throw std::invalid_argument("layer spec: no qubits");
  if (sublayers.empty()) throw std::invalid_argument("layer spec: no sublayers");
  std::vector<std::pair<int, int>> seen_edges;
  for (std::size_t m = 0; m < sublayers.size(); ++m) {
    std::vector<int> uses(static_cast<std::size_t>(n), 0);
    const std::string where = "layer spec sublayer " + std::to_string(m);
    for (const auto& e : sublayers[m].edges) {
      if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n || e.a == e.b) throw std::invalid_argument(where + ": bad edge");
      if (e.duration_units < 1) throw std::invalid_argument(where + ": 2Q duration must be at least one unit");
      ++uses[static_cast<std::size_t>(e.a)];
      ++uses[static_cast<std::size_t>(e.b)];
      const std::pair<int, int> key{std::min(e.a, e.b), std::max(e.a, e.b)};
      if (std::find(seen_edges.begin(), seen_edges.end(), key) != seen_edges.end()) throw std::invalid_argument(where + ": edge appears twice");
      seen_edges.push_back(key);
    }
    for (int q : sublayers[m].idle) {
      if (q < 0 || q >= n) throw std::invalid_argument(where + ": bad idle qubit");
      ++uses[static_cast<std::size_t>(q)];
    }
    for (int q = 0; q < n; ++q) {
      if (uses[static_cast<std::size_t>(q)] != 1) {
        throw std::invalid_argument(where + ": qubit " + std::to_string(q) + " must be gated or idle exactly once");
      }
    }
  }
}

LayerSpec LayerSpec::chain(int num_qubits, TwoQubitGateType type, int duration_units) {
  std::vector<std::vector<LayerEdge>> sets(2);
  for (int q = 0; q + 1 < num_qubits; ++q) sets[static_cast<std::size_t>(q % 2)].push_back({q, q + 1, type, duration_units});
  if (sets[1].empty()) sets.pop_back();
  return from_edge_sets(num_qubits, sets);
}

LayerSpec LayerSpec::from_edge_sets(int num_qubits, const std::vector<std::vector<LayerEdge>>& sets) {
  LayerSpec spec;
  spec.labels.resize(static_cast<std::size_t>(num_qubits));
  std::iota(spec.labels.begin(), spec.labels.end(), 0);
  for (const auto& edges : sets) {
    Sublayer s;
    s.edges = edges;
    for (int q = 0; q < num_qubits; ++q) {
      if (std::none_of(edges.begin(), edges.end(), [q](const LayerEdge& e) { return e.touches(q); })) s.idle.push_back(q);
    }
    spec.sublayers.push_back(std::move(s));
  }
  spec.validate();
  return spec;
}

std::vector<RBUnit> units_of(const LayerSpec& spec, int sublayer) {
  const auto& s = spec.sublayers.at(static_cast<std::size_t>(sublayer));
  std::vector<RBUnit> units;
  int element = 0;
  for (const auto& e : s.edges) units.push_back({{e.a, e.b}, sublayer, element++});
  for (int q : s.idle) units.push_back({{q}, sublayer, element++});
  return units;
}

void to_json(nlohmann::json& j, const LayerEdge& e) {
  j = {{"qubits", {e.a, e.b}}, {"gate", std::string(to_string(e.type))}, {"duration_units", e.duration_units}};
}

void from_json(const nlohmann::json& j, LayerEdge& e) {
  const auto qs = j.at("qubits").get<std::vector<int>>();
  if (qs.size() != 2) throw std::invalid_argument("layer edge: qubits must be a pair");
  e.a = qs[0];
  e.b = qs[1];
  e.type = parse_two_qubit_gate_type(j.value("gate", std::string("cx")));
  e.duration_units = j.value("duration_units", 8);
}

void to_json(nlohmann::json& j, const LayerSpec& spec) {
  j = {{"labels", spec.labels}, {"sublayers", nlohmann::json::array()}};
  for (const auto& s : spec.sublayers) j["sublayers"].push_back({{"edges", s.edges}, {"idle", s.idle}});
}

void from_json(const nlohmann::json& j, LayerSpec& spec) {
  spec.labels = j.at("labels").get<std::vector<int>>();
  spec.sublayers.clear();
  for (const auto& s : j.at("sublayers")) {
    Sublayer sub;
    sub.edges = s.at("edges").get<std::vector<LayerEdge>>();
    sub.idle = s.at("idle").get<std::vector<int>>();
    spec.sublayers.push_back(std::move(sub));
  }
  spec.validate();
}

}  // namespace layerfid
