#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "layerfid/topology/device.hpp"

namespace layerfid {

struct CandidateChain {
  std::vector<int> qubits;
  double predicted_lf = 1.0;
  int overlap = 0;  // qubits shared with the earlier candidates
};

struct ChainSearchResult {
  std::vector<CandidateChain> chains;
  /// False when no simple path of N_max qubits exists; chains then hold the
  /// longest paths found.
  bool complete = true;
};

inline constexpr int kDefaultBeamWidth = 64;

/// Beam search over simple paths, extended at one end and keeping
/// `beam_width` states per endpoint qubit. Chain 1 maximizes predicted LF;
/// each later chain minimizes overlap with the earlier ones, then maximizes
/// predicted LF. Deterministic.
ChainSearchResult find_candidate_chains(const DeviceModel& device, int n_max, int k = 3, int beam_width = kDefaultBeamWidth);

/// Same ranking over every simple path. For small graphs and tests.
ChainSearchResult exhaustive_candidate_chains(const DeviceModel& device, int n_max, int k = 3);

/// Path with the lower endpoint first.
std::vector<int> canonical_path(std::vector<int> path);

/// Edge classes that are matchings, plus the qubits each class leaves idle.
struct DisjointDecomposition {
  std::vector<std::vector<std::pair<int, int>>> classes;
  std::vector<std::vector<int>> idle;
};

/// Paths get the even/odd split from the lower endpoint, other graphs a
/// Misra-Gries coloring with at most max degree + 1 classes. A positive
/// `classes` asks for a sparser split: on a path edge i goes to class
/// i mod classes, elsewhere the largest classes are halved until the count
/// is reached. Idle sets are taken over `qubits` (default: edge endpoints).
DisjointDecomposition decompose_disjoint(const std::vector<std::pair<int, int>>& edges, int classes = 0, std::vector<int> qubits = {});

void to_json(nlohmann::json& j, const CandidateChain& c);
void to_json(nlohmann::json& j, const ChainSearchResult& r);
void to_json(nlohmann::json& j, const DisjointDecomposition& d);

}  // namespace layerfid
