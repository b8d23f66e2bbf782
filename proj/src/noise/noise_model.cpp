#include "layerfid/noise/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace layerfid {
namespace {

using nlohmann::json;

struct KindName {
  CoherentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {CoherentKind::ZZAlwaysOn, "zz_always_on"},
    {CoherentKind::ZZSimultaneous2Q, "zz_simultaneous_2q"},
    {CoherentKind::Overrotation2Q, "overrotation_2q"},
    {CoherentKind::Underrotation1Q, "underrotation_1q"},
    {CoherentKind::ZDriftPerSlice, "z_drift_per_slice"},
    {CoherentKind::DriveCrosstalk, "drive_crosstalk"},
};

void check_qubit(int q, int n, const char* what) {
  if (q < 0 || q >= n) throw std::invalid_argument(std::string(what) + ": qubit " + std::to_string(q) + " outside the system");
}

json time_to_json(double t) { return std::isinf(t) ? json(nullptr) : json(t); }

double time_from_json(const json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

ComplexMatrix zz_projector_generator(double phase) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(3, 3) = phase;
  return h;
}

}  // namespace

std::string_view to_string(CoherentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  throw std::logic_error("unknown CoherentKind");
}

CoherentKind parse_coherent_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown coherent term kind: " + std::string(name));
}

// --- NoiseModel ---------------------------------------------------------------

NoiseModel NoiseModel::noiseless(int num_qubits) {
  NoiseModel m;
  m.num_qubits = num_qubits;
  m.qubits.assign(static_cast<std::size_t>(num_qubits), QubitCoherence{});
  return m;
}

NoiseModel NoiseModel::uniform_coherence(int num_qubits, double t1, double t2) {
  NoiseModel m = noiseless(num_qubits);
  for (auto& q : m.qubits) q = {t1, t2};
  return m;
}

bool NoiseModel::has_decoherence() const {
  return std::any_of(qubits.begin(), qubits.end(), [](const QubitCoherence& q) { return std::isfinite(q.t1) || std::isfinite(q.t2); });
}

void NoiseModel::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("noise model: num_qubits must be positive");
  if (qubits.size() != static_cast<std::size_t>(num_qubits)) throw std::invalid_argument("noise model: need one coherence entry per qubit");
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    const auto& c = qubits[q];
    if (!(c.t1 > 0.0) || !(c.t2 > 0.0)) throw std::invalid_argument("noise model: T1 and T2 must be positive");
    if (c.t2 > 2.0 * c.t1 * (1.0 + 1e-12)) throw std::invalid_argument("noise model: T2 > 2 T1 on qubit " + std::to_string(q));
  }
  for (const auto& t : coherent_terms) {
    for (int q : t.qubits) check_qubit(q, num_qubits, "coherent term");
    switch (t.kind) {
      case CoherentKind::ZZAlwaysOn:
      case CoherentKind::ZZSimultaneous2Q:
        if (t.qubits.size() != 2 || t.qubits[0] == t.qubits[1]) throw std::invalid_argument("zz term needs two distinct qubits");
        if (!std::isfinite(t.strength)) throw std::invalid_argument("zz term: rate must be finite");
        break;
      case CoherentKind::Overrotation2Q:
        if (!t.qubits.empty() && t.qubits.size() != 2) throw std::invalid_argument("overrotation_2q: qubits must be empty or one edge");
        [[fallthrough]];
      case CoherentKind::Underrotation1Q:
        if (std::abs(t.strength) > 1.0) throw std::invalid_argument("rotation fraction must lie in [-1, 1]");
        break;
      case CoherentKind::ZDriftPerSlice:
        if (!std::isfinite(t.strength)) throw std::invalid_argument("z drift angle must be finite");
        break;
      case CoherentKind::DriveCrosstalk:
        if (t.qubits.size() != 4) throw std::invalid_argument("drive_crosstalk needs {gate_a, gate_b, source, spectator}");
        if (t.qubits[2] == t.qubits[3]) throw std::invalid_argument("drive_crosstalk: source and spectator must differ");
        if (std::abs(t.strength) > 1.0) throw std::invalid_argument("drive crosstalk fraction must lie in [-1, 1]");
        break;
    }
  }
  double total = 0.0;
  for (const auto& s : stochastic_terms) {
    for (int q : s.qubits) check_qubit(q, num_qubits, "stochastic term");
    if (s.pauli.num_qubits() != static_cast<int>(s.qubits.size())) throw std::invalid_argument("stochastic term: Pauli length must match qubit list");
    if (s.probability < 0.0 || s.probability > 1.0) throw std::invalid_argument("stochastic term: probability outside [0, 1]");
    total += s.probability;
  }
  if (total > 1.0) throw std::invalid_argument("stochastic terms: probabilities sum above 1");
  for (const auto& g : gate_depolarizing) {
    check_qubit(g.q0, num_qubits, "gate depolarizing");
    check_qubit(g.q1, num_qubits, "gate depolarizing");
    if (g.alpha < -1.0 / 15.0 || g.alpha > 1.0) throw std::invalid_argument("gate depolarizing: alpha outside [-1/15, 1]");
  }
}

void to_json(json& j, const NoiseModel& m) {
  j = json::object();
  j["num_qubits"] = m.num_qubits;
  j["qubits"] = json::array();
  for (const auto& q : m.qubits) j["qubits"].push_back({{"t1", time_to_json(q.t1)}, {"t2", time_to_json(q.t2)}});
  j["coherent_terms"] = json::array();
  for (const auto& t : m.coherent_terms) {
    j["coherent_terms"].push_back({{"kind", std::string(to_string(t.kind))}, {"qubits", t.qubits}, {"strength", t.strength}});
  }
  j["stochastic_terms"] = json::array();
  for (const auto& s : m.stochastic_terms) {
    j["stochastic_terms"].push_back({{"pauli", s.pauli.without_phase().to_string().substr(1)}, {"qubits", s.qubits}, {"probability", s.probability}});
  }
  j["gate_depolarizing"] = json::array();
  for (const auto& g : m.gate_depolarizing) j["gate_depolarizing"].push_back({{"qubits", {g.q0, g.q1}}, {"alpha", g.alpha}});
}

void from_json(const json& j, NoiseModel& m) {
  static const std::vector<std::string> kKeys = {"num_qubits", "qubits", "coherent_terms", "stochastic_terms", "gate_depolarizing"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw std::invalid_argument("noise model: unknown field '" + key + "'");
  }
  m = NoiseModel::noiseless(j.at("num_qubits").get<int>());
  if (j.contains("qubits")) {
    const auto& qs = j.at("qubits");
    if (qs.size() != static_cast<std::size_t>(m.num_qubits)) throw std::invalid_argument("noise model: qubits array length mismatch");
    for (std::size_t q = 0; q < qs.size(); ++q) {
      m.qubits[q].t1 = time_from_json(qs[q].value("t1", json(nullptr)));
      m.qubits[q].t2 = time_from_json(qs[q].value("t2", json(nullptr)));
    }
  }
  for (const auto& t : j.value("coherent_terms", json::array())) {
    m.coherent_terms.push_back({parse_coherent_kind(t.at("kind").get<std::string>()), t.value("qubits", std::vector<int>{}), t.at("strength").get<double>()});
  }
  for (const auto& s : j.value("stochastic_terms", json::array())) {
    m.stochastic_terms.push_back({s.at("qubits").get<std::vector<int>>(), PauliString::from_label(s.at("pauli").get<std::string>()), s.at("probability").get<double>()});
  }
  for (const auto& g : j.value("gate_depolarizing", json::array())) {
    const auto qs = g.at("qubits").get<std::vector<int>>();
    if (qs.size() != 2) throw std::invalid_argument("gate depolarizing: qubits must be a pair");
    m.gate_depolarizing.push_back({qs[0], qs[1], g.at("alpha").get<double>()});
  }
  m.validate();
}

// --- slice context ------------------------------------------------------------

bool SliceContext::in_two_qubit_gate(int q) const {
  return std::any_of(gates.begin(), gates.end(), [q](const ActiveGate& g) { return g.q0 == q || g.q1 == q; });
}

const SliceContext::ActiveGate* SliceContext::gate_on(int a, int b) const {
  for (const auto& g : gates) {
    if ((g.q0 == a && g.q1 == b) || (g.q0 == b && g.q1 == a)) return &g;
  }
  return nullptr;
}

std::vector<LocalGenerator> coherent_term_generators(const CoherentTerm& term, const SliceContext& ctx, int num_qubits) {
  for (int q : term.qubits) check_qubit(q, num_qubits, "coherent term");
  std::vector<LocalGenerator> out;
  switch (term.kind) {
    case CoherentKind::ZZSimultaneous2Q:
      if (!ctx.in_two_qubit_gate(term.qubits[0]) || !ctx.in_two_qubit_gate(term.qubits[1])) break;
      [[fallthrough]];
    case CoherentKind::ZZAlwaysOn:
      if (term.strength != 0.0 && ctx.dt > 0.0) {
        out.push_back({{term.qubits[0], term.qubits[1]}, zz_projector_generator(2.0 * std::numbers::pi * term.strength * ctx.dt)});
      }
      break;
    case CoherentKind::Overrotation2Q:
      for (const auto& g : ctx.gates) {
        if (!term.qubits.empty() && &g != ctx.gate_on(term.qubits[0], term.qubits[1])) continue;
        out.push_back({{g.q0, g.q1}, two_qubit_generator(g.type) * (term.strength / g.duration_units)});
      }
      break;
    case CoherentKind::Underrotation1Q:
      for (int q : ctx.x90_qubits) {
        if (!term.qubits.empty() && std::find(term.qubits.begin(), term.qubits.end(), q) == term.qubits.end()) continue;
        out.push_back({{q}, PauliString::from_label("X").matrix() * (-term.strength * std::numbers::pi / 4.0)});
      }
      break;
    case CoherentKind::ZDriftPerSlice: {
      if (ctx.dt <= 0.0 || term.strength == 0.0) break;
      std::vector<int> targets = term.qubits;
      if (targets.empty()) {
        for (int q = 0; q < num_qubits; ++q) targets.push_back(q);
      }
      for (int q : targets) out.push_back({{q}, PauliString::from_label("Z").matrix() * (term.strength / 2.0)});
      break;
    }
    case CoherentKind::DriveCrosstalk: {
      const auto* g = ctx.gate_on(term.qubits[0], term.qubits[1]);
      if (g == nullptr || term.strength == 0.0) break;
      // f * pi/4 * (I + Z)_source Y_spectator, spread over the gate's slices.
      const ComplexMatrix h = PauliString::from_label("IY").matrix() + PauliString::from_label("ZY").matrix();
      out.push_back({{term.qubits[2], term.qubits[3]}, h * (term.strength * std::numbers::pi / 4.0 / g->duration_units)});
      break;
    }
  }
  return out;
}

ComplexMatrix coherent_term_unitary(const CoherentTerm& term, const SliceContext& ctx, int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& g : coherent_term_generators(term, ctx, num_qubits)) u = embed(hermitian_exp(g.h), g.qubits, num_qubits) * u;
  return u;
}

// --- presets ------------------------------------------------------------------

NoiseModel incoherent_preset() { return NoiseModel::uniform_coherence(4, kPresetCoherenceTime, kPresetCoherenceTime); }

NoiseModel zz_preset(CoherentKind kind, const std::vector<std::pair<int, int>>& pairs, double rate_hz) {
  NoiseModel m = incoherent_preset();
  for (const auto& [a, b] : pairs) m.coherent_terms.push_back({kind, {a, b}, rate_hz});
  return m;
}

NoiseModel scenario_preset(char scenario) {
  switch (scenario) {
    case 'a': return zz_preset(CoherentKind::ZZAlwaysOn, {{0, 1}, {2, 3}}, 150e3);
    case 'b': return zz_preset(CoherentKind::ZZAlwaysOn, {{0, 3}, {1, 2}}, 150e3);
    case 'c': return zz_preset(CoherentKind::ZZSimultaneous2Q, {{0, 1}, {2, 3}}, 150e3);
    case 'd': return zz_preset(CoherentKind::ZZSimultaneous2Q, {{0, 3}, {1, 2}}, 150e3);
    case 'e': return zz_preset(CoherentKind::ZZAlwaysOn, {{0, 1}, {1, 2}, {2, 3}}, 100e3);
    case 'f': {
      NoiseModel m = incoherent_preset();
      m.coherent_terms.push_back({CoherentKind::ZDriftPerSlice, {}, 0.02});
      return m;
    }
    case 'g': {
      NoiseModel m = incoherent_preset();
      m.coherent_terms.push_back({CoherentKind::Overrotation2Q, {}, 0.1});
      return m;
    }
    case 'h': {
      NoiseModel m = scenario_preset('g');
      m.coherent_terms.push_back({CoherentKind::Underrotation1Q, {}, 0.1});
      return m;
    }
    case 'i': {
      NoiseModel m = incoherent_preset();
      m.coherent_terms.push_back({CoherentKind::DriveCrosstalk, {0, 1, 1, 2}, 0.1});
      m.coherent_terms.push_back({CoherentKind::DriveCrosstalk, {2, 3, 2, 1}, 0.1});
      m.coherent_terms.push_back({CoherentKind::DriveCrosstalk, {1, 2, 1, 0}, 0.1});
      return m;
    }
    default:
      throw std::invalid_argument(std::string("unknown noise scenario '") + scenario + "'");
  }
}

std::string scenario_description(char scenario) {
  switch (scenario) {
    case 'a': return "always-on ZZ 150 kHz on (0,1) and (2,3)";
    case 'b': return "always-on ZZ 150 kHz on (0,3) and (1,2)";
    case 'c': return "simultaneous-only ZZ 150 kHz on (0,1) and (2,3)";
    case 'd': return "simultaneous-only ZZ 150 kHz on (0,3) and (1,2)";
    case 'e': return "always-on ZZ 100 kHz on (0,1), (1,2), (2,3)";
    case 'f': return "Rz(0.02) on every qubit after each unit slice";
    case 'g': return "2Q gates overrotated by 10%";
    case 'h': return "2Q gates overrotated by 10%, X90 underrotated by 10%";
    case 'i': return "10% IY+ZY drive crosstalk: CX01 1->2, CX23 2->1, CX12 1->0";
    default: throw std::invalid_argument(std::string("unknown noise scenario '") + scenario + "'");
  }
}

}  // namespace layerfid
