#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "layerfid/circuits/layer_spec.hpp"
#include "layerfid/estimation/fit.hpp"

namespace layerfid {

/// Process fidelity (1 + (d^2 - 1) alpha) / d^2.
double fidelity_from_alpha(double alpha, int dimension);
double alpha_from_fidelity(double fidelity, int dimension);

struct LayerFidelity {
  std::vector<double> per_sublayer;
  double lf = 1.0;
};

/// Product of element fidelities per sublayer, then over sublayers.
LayerFidelity layer_fidelity(const std::vector<std::vector<double>>& fidelities_by_sublayer);
/// As above, and throws unless each sublayer lists one fidelity per unit of
/// `spec` (gated pairs and idle qubits).
LayerFidelity layer_fidelity(const LayerSpec& spec, const std::vector<std::vector<double>>& fidelities_by_sublayer);

double eplg(double lf, int n2q);

/// Element fidelities of a linear chain: edge[i] couples qubits i and i+1,
/// idle[q] is the product of qubit q's idle fidelities over all sublayers.
struct ChainFidelities {
  std::vector<double> edge;
  std::vector<double> idle;

  int num_qubits() const { return static_cast<int>(idle.size()); }
  void validate() const;
};

struct SubchainResult {
  int n = 0;
  double lf = 1.0;
  double eplg = 0.0;
  int start = 0;                  // first qubit of the best window
  std::vector<double> window_lf;  // every window, by start
};

/// Best LF over windows of n contiguous qubits. Edges inside the window count
/// fully, edges leaving it count as F^(1/2), idle factors of in-window qubits
/// are kept. n_2q = n - 1. Ties go to the lowest start.
SubchainResult best_subchain_lf(const ChainFidelities& chain, int n);
/// best_subchain_lf for n = 2 .. chain length.
std::vector<SubchainResult> subchain_table(const ChainFidelities& chain);

double gamma_from_lf(double lf);
/// {(1 - EPLG)^-N, (1 - EPLG)^-2}
std::pair<double, double> gamma_depth1(double eplg, int n_gamma);
/// Product of alpha^(-15/8) with alpha from each 2Q process fidelity.
double gamma_exact_depolarizing(std::span<const double> pair_fidelities);

/// Polarization from the Hamming-distance distribution h[k], k = 0..n.
double polarization_from_hamming(std::span<const double> hamming, int num_qubits);
/// Polarization from a full 2^n outcome distribution (or raw counts).
double mirror_polarization(std::span<const double> distribution, std::uint64_t target, int num_qubits);

struct MirrorFit {
  FitResult fit;           // S = A alpha^l
  double fidelity = 1.0;   // per full layer
  double fidelity_err = 0.0;
};

MirrorFit fit_mirror(std::span<const int> depths, std::span<const double> polarization, std::span<const double> sem, int num_qubits);

struct ElementResult {
  int sublayer = 0;
  std::vector<int> qubits;
  DecayCurve curve;
  FitResult fit;
  double fidelity = 1.0;
  double fidelity_err = 0.0;
};

struct LayerFidelityResult {
  std::vector<ElementResult> elements;
  std::vector<double> lf_m;
  double lf = 1.0;
  double lf_err = 0.0;
  int n2q = 0;
  double eplg = 0.0;
  double gamma = 1.0;
  std::vector<SubchainResult> subchains;  // only for chain layers
  std::vector<std::string> warnings;
};

/// Fits every curve and assembles LF, EPLG, gamma and, when `spec` is the
/// line 0-1-..-(n-1), the subchain table. Throws if a unit has no curve;
/// non-converged fits are left out of LF with a warning.
LayerFidelityResult assemble_layer_fidelity(const LayerSpec& spec, std::vector<DecayCurve> curves);

/// Chain element fidelities from assembled elements; throws unless the layer
/// is a line.
ChainFidelities chain_fidelities(const LayerSpec& spec, const std::vector<ElementResult>& elements);

void to_json(nlohmann::json& j, const SubchainResult& s);
void to_json(nlohmann::json& j, const ElementResult& e);
void to_json(nlohmann::json& j, const LayerFidelityResult& r);

}  // namespace layerfid
