#include "layerfid/estimation/layer_fidelity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace layerfid {
namespace {

double dim2(int dimension) { return static_cast<double>(dimension) * static_cast<double>(dimension); }

bool is_line(const LayerSpec& spec) {
  const int n = spec.num_qubits();
  std::vector<int> seen(static_cast<std::size_t>(std::max(n - 1, 0)), 0);
  for (const auto& sub : spec.sublayers) {
    for (const auto& e : sub.edges) {
      const int lo = std::min(e.a, e.b);
      if (std::max(e.a, e.b) != lo + 1) return false;
      ++seen[static_cast<std::size_t>(lo)];
    }
  }
  return n >= 2 && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

}  // namespace

double fidelity_from_alpha(double alpha, int dimension) {
  if (dimension < 2) throw std::invalid_argument("fidelity_from_alpha: dimension must be at least 2");
  const double d2 = dim2(dimension);
  return (1.0 + (d2 - 1.0) * alpha) / d2;
}

double alpha_from_fidelity(double fidelity, int dimension) {
  if (dimension < 2) throw std::invalid_argument("alpha_from_fidelity: dimension must be at least 2");
  const double d2 = dim2(dimension);
  return (d2 * fidelity - 1.0) / (d2 - 1.0);
}

LayerFidelity layer_fidelity(const std::vector<std::vector<double>>& fidelities_by_sublayer) {
  LayerFidelity out;
  for (const auto& sub : fidelities_by_sublayer) {
    double lf_m = 1.0;
    for (double f : sub) {
      if (!(f > 0.0 && f <= 1.0 + 1e-12)) throw std::invalid_argument("layer_fidelity: element fidelity outside (0, 1]");
      lf_m *= f;
    }
    out.per_sublayer.push_back(lf_m);
    out.lf *= lf_m;
  }
  return out;
}

LayerFidelity layer_fidelity(const LayerSpec& spec, const std::vector<std::vector<double>>& fidelities_by_sublayer) {
  if (fidelities_by_sublayer.size() != spec.sublayers.size()) throw std::invalid_argument("layer_fidelity: one fidelity list per sublayer is needed");
  for (std::size_t m = 0; m < spec.sublayers.size(); ++m) {
    const auto expected = units_of(spec, static_cast<int>(m)).size();
    if (fidelities_by_sublayer[m].size() != expected) {
      throw std::invalid_argument("layer_fidelity: sublayer " + std::to_string(m) + " needs " + std::to_string(expected) +
                                  " element fidelities including idle qubits, got " + std::to_string(fidelities_by_sublayer[m].size()));
    }
  }
  return layer_fidelity(fidelities_by_sublayer);
}

double eplg(double lf, int n2q) {
  if (n2q <= 0) throw std::invalid_argument("eplg: n2q must be positive");
  if (!(lf > 0.0 && lf <= 1.0 + 1e-12)) throw std::invalid_argument("eplg: LF outside (0, 1]");
  return 1.0 - std::pow(std::min(lf, 1.0), 1.0 / n2q);
}

void ChainFidelities::validate() const {
  if (idle.size() < 2 || edge.size() + 1 != idle.size()) throw std::invalid_argument("chain fidelities: need n idle factors and n - 1 edges, n >= 2");
  for (const auto* list : {&edge, &idle}) {
    for (double f : *list) {
      if (!(f > 0.0 && f <= 1.0 + 1e-12)) throw std::invalid_argument("chain fidelities: fidelity outside (0, 1]");
    }
  }
}

SubchainResult best_subchain_lf(const ChainFidelities& chain, int n) {
  chain.validate();
  const int len = chain.num_qubits();
  if (n < 2) throw std::invalid_argument("best_subchain_lf: N must be at least 2");
  if (n > len) throw std::invalid_argument("best_subchain_lf: N exceeds the chain length");
  SubchainResult out;
  out.n = n;
  out.lf = -1.0;
  for (int s = 0; s + n <= len; ++s) {
    double lf = 1.0;
    for (int i = s; i < s + n - 1; ++i) lf *= chain.edge[static_cast<std::size_t>(i)];
    if (s > 0) lf *= std::sqrt(chain.edge[static_cast<std::size_t>(s - 1)]);
    if (s + n - 1 < len - 1) lf *= std::sqrt(chain.edge[static_cast<std::size_t>(s + n - 1)]);
    for (int q = s; q < s + n; ++q) lf *= chain.idle[static_cast<std::size_t>(q)];
    out.window_lf.push_back(lf);
    if (lf > out.lf) {
      out.lf = lf;
      out.start = s;
    }
  }
  out.eplg = eplg(out.lf, n - 1);
  return out;
}

std::vector<SubchainResult> subchain_table(const ChainFidelities& chain) {
  std::vector<SubchainResult> out;
  for (int n = 2; n <= chain.num_qubits(); ++n) out.push_back(best_subchain_lf(chain, n));
  return out;
}

double gamma_from_lf(double lf) {
  if (!(lf > 0.0 && lf <= 1.0 + 1e-12)) throw std::invalid_argument("gamma_from_lf: LF outside (0, 1]");
  return 1.0 / (lf * lf);
}

std::pair<double, double> gamma_depth1(double eplg_value, int n_gamma) {
  if (n_gamma <= 0 || n_gamma % 2 != 0) throw std::invalid_argument("gamma_depth1: N_gamma must be positive and even");
  if (!(eplg_value >= 0.0 && eplg_value < 1.0)) throw std::invalid_argument("gamma_depth1: EPLG outside [0, 1)");
  return {std::pow(1.0 - eplg_value, -n_gamma), std::pow(1.0 - eplg_value, -2.0)};
}

double gamma_exact_depolarizing(std::span<const double> pair_fidelities) {
  double g = 1.0;
  for (double f : pair_fidelities) {
    const double alpha = alpha_from_fidelity(f, 4);
    if (!(alpha > 0.0 && alpha <= 1.0 + 1e-12)) throw std::invalid_argument("gamma_exact_depolarizing: fidelity gives alpha outside (0, 1]");
    g *= std::pow(alpha, -15.0 / 8.0);
  }
  return g;
}

double polarization_from_hamming(std::span<const double> hamming, int num_qubits) {
  if (static_cast<int>(hamming.size()) != num_qubits + 1) throw std::invalid_argument("polarization: need n + 1 Hamming weights");
  double total = 0.0;
  for (double h : hamming) total += h;
  if (!(total > 0.0)) throw std::invalid_argument("polarization: empty distribution");
  const double d2 = std::pow(4.0, num_qubits);
  double s = 0.0;
  double w = 1.0;
  for (double h : hamming) {
    s += w * h / total;
    w *= -0.5;
  }
  return d2 / (d2 - 1.0) * s - 1.0 / (d2 - 1.0);
}

double mirror_polarization(std::span<const double> distribution, std::uint64_t target, int num_qubits) {
  if (distribution.size() != (std::size_t{1} << num_qubits)) throw std::invalid_argument("mirror_polarization: distribution must have 2^n entries");
  std::vector<double> h(static_cast<std::size_t>(num_qubits) + 1, 0.0);
  for (std::size_t x = 0; x < distribution.size(); ++x) h[static_cast<std::size_t>(std::popcount(x ^ target))] += distribution[x];
  return polarization_from_hamming(h, num_qubits);
}

MirrorFit fit_mirror(std::span<const int> depths, std::span<const double> polarization, std::span<const double> sem, int num_qubits) {
  MirrorFit out;
  out.fit = fit_pure_exponential(depths, polarization, sem);
  const int d = 1 << num_qubits;
  out.fidelity = fidelity_from_alpha(out.fit.alpha, d);
  out.fidelity_err = (dim2(d) - 1.0) / dim2(d) * out.fit.alpha_err;
  return out;
}

LayerFidelityResult assemble_layer_fidelity(const LayerSpec& spec, std::vector<DecayCurve> curves) {
  spec.validate();
  LayerFidelityResult r;
  std::vector<std::vector<double>> by_sublayer(spec.sublayers.size());
  double rel_var = 0.0;
  for (std::size_t m = 0; m < spec.sublayers.size(); ++m) {
    for (const auto& unit : units_of(spec, static_cast<int>(m))) {
      const auto it = std::find_if(curves.begin(), curves.end(), [&](const DecayCurve& c) { return c.sublayer == static_cast<int>(m) && c.qubits == unit.qubits; });
      if (it == curves.end()) {
        std::string q;
        for (int x : unit.qubits) q += (q.empty() ? "" : ",") + std::to_string(x);
        throw std::invalid_argument("layer fidelity: no decay curve for unit {" + q + "} in sublayer " + std::to_string(m));
      }
      if (it->dimension != unit.dimension()) throw std::invalid_argument("layer fidelity: curve dimension does not match its unit");
      ElementResult e;
      e.sublayer = static_cast<int>(m);
      e.qubits = unit.qubits;
      e.curve = *it;
      e.fit = fit_decay(*it);
      e.fidelity = fidelity_from_alpha(e.fit.alpha, unit.dimension());
      e.fidelity_err = (dim2(unit.dimension()) - 1.0) / dim2(unit.dimension()) * e.fit.alpha_err;
      std::string label = "sublayer " + std::to_string(m) + " unit {";
      for (std::size_t i = 0; i < unit.qubits.size(); ++i) label += (i ? "," : "") + std::to_string(unit.qubits[i]);
      label += "}";
      if (!e.fit.converged) {
        r.warnings.push_back(label + ": fit did not converge, left out of LF");
      } else {
        if (e.fit.underdriven) r.warnings.push_back(label + ": underdriven - extend depths");
        by_sublayer[m].push_back(e.fidelity);
        rel_var += std::pow(e.fidelity_err / e.fidelity, 2);
      }
      r.elements.push_back(std::move(e));
    }
  }
  const LayerFidelity lf = layer_fidelity(by_sublayer);
  r.lf_m = lf.per_sublayer;
  r.lf = lf.lf;
  r.lf_err = r.lf * std::sqrt(rel_var);
  r.n2q = spec.num_edges();
  r.eplg = r.n2q > 0 ? eplg(r.lf, r.n2q) : 0.0;
  r.gamma = gamma_from_lf(r.lf);
  if (is_line(spec)) r.subchains = subchain_table(chain_fidelities(spec, r.elements));
  return r;
}

ChainFidelities chain_fidelities(const LayerSpec& spec, const std::vector<ElementResult>& elements) {
  if (!is_line(spec)) throw std::invalid_argument("chain_fidelities: layer is not the line 0-1-..-(n-1)");
  const int n = spec.num_qubits();
  ChainFidelities c;
  c.edge.assign(static_cast<std::size_t>(n - 1), 1.0);
  c.idle.assign(static_cast<std::size_t>(n), 1.0);
  for (const auto& e : elements) {
    const double f = e.fit.converged ? e.fidelity : 1.0;
    if (e.qubits.size() == 2) {
      c.edge[static_cast<std::size_t>(std::min(e.qubits[0], e.qubits[1]))] = f;
    } else {
      c.idle[static_cast<std::size_t>(e.qubits[0])] *= f;
    }
  }
  return c;
}

void to_json(nlohmann::json& j, const SubchainResult& s) {
  j = {{"n", s.n}, {"lf", s.lf}, {"eplg", s.eplg}, {"start", s.start}};
}

void to_json(nlohmann::json& j, const ElementResult& e) {
  j = {{"sublayer", e.sublayer}, {"qubits", e.qubits}, {"fidelity", e.fidelity}, {"fidelity_err", e.fidelity_err}, {"fit", e.fit}, {"curve", e.curve}};
}

void to_json(nlohmann::json& j, const LayerFidelityResult& r) {
  j = {{"lf", r.lf},       {"lf_err", r.lf_err}, {"lf_m", r.lf_m},         {"n2q", r.n2q},
       {"eplg", r.eplg},   {"gamma", r.gamma},   {"elements", r.elements}, {"subchains", r.subchains},
       {"warnings", r.warnings}};
}

}  // namespace layerfid
