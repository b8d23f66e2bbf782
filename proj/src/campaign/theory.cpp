#include "layerfid/campaign/theory.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "layerfid/core/channel.hpp"
#include "layerfid/estimation/layer_fidelity.hpp"
#include "layerfid/noise/channels.hpp"
#include "layerfid/noise/gamma.hpp"

namespace layerfid {
namespace {

using nlohmann::json;

double round_sig(double x, int digits) {
  if (x == 0.0) return 0.0;
  const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
  return std::round(x * scale) / scale;
}

TheoryCheck eplg_anchors() {
  TheoryCheck c{"eplg_anchors", true, json::array()};
  const struct {
    double lf;
    int n2q;
    double reported;
  } anchors[] = {{0.26, 79, 1.7e-2}, {0.61, 79, 6.2e-3}};
  for (const auto& a : anchors) {
    const double e = eplg(a.lf, a.n2q);
    const bool ok = std::abs(round_sig(e, 2) - a.reported) <= 1e-12;
    c.passed = c.passed && ok;
    c.details.push_back({{"lf", a.lf}, {"n2q", a.n2q}, {"eplg", e}, {"reported", a.reported}, {"ok", ok}});
  }
  return c;
}

TheoryCheck crosstalk_oracle(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> alpha(0.0, 0.3);
  std::uniform_int_distribution<int> label(1, 3);
  constexpr int kPlacements = 200;
  int violations = 0;
  double worst_margin = 1.0;
  for (int trial = 0; trial < kPlacements; ++trial) {
    const int n_k = 1 + static_cast<int>(rng() % 2);
    const int n_j = 1 + static_cast<int>(rng() % 2);
    PauliString p(n_k + n_j);
    p.set(static_cast<int>(rng() % static_cast<unsigned>(n_k)), "IXYZ"[label(rng)]);
    p.set(n_k + static_cast<int>(rng() % static_cast<unsigned>(n_j)), "IXYZ"[label(rng)]);
    double a = alpha(rng);
    if (a == 0.0) a = 1e-3;
    for (auto flavor : {CrosstalkFlavor::Coherent, CrosstalkFlavor::Stochastic}) {
      const auto r = crosstalk_bound_oracle(a, n_k, n_j, p, flavor);
      const double margin = r.f_true - r.f_layer_estimate;
      worst_margin = std::min(worst_margin, margin);
      if (margin < -1e-12) ++violations;
    }
  }
  constexpr double kSmall = 0.1;
  json small = json::array();
  bool small_ok = true;
  for (auto flavor : {CrosstalkFlavor::Coherent, CrosstalkFlavor::Stochastic}) {
    const auto r = crosstalk_bound_oracle(kSmall, 1, 1, PauliString::from_label("ZZ"), flavor);
    const double true_gap = std::abs(r.f_true - (1.0 - kSmall * kSmall));
    const double layer_gap = std::abs(r.f_layer_estimate - std::pow(1.0 - kSmall * kSmall, 2));
    const bool ok = true_gap <= 1e-3 && layer_gap <= 1e-3;
    small_ok = small_ok && ok;
    small.push_back({{"flavor", flavor == CrosstalkFlavor::Coherent ? "coherent" : "stochastic"},
                     {"f_true", r.f_true},
                     {"f_layer_estimate", r.f_layer_estimate},
                     {"true_gap", true_gap},
                     {"layer_gap", layer_gap}});
  }
  return {"crosstalk_oracle", violations == 0 && small_ok,
          {{"placements", kPlacements}, {"violations", violations}, {"worst_margin", worst_margin}, {"small_alpha", small}}};
}

TheoryCheck gamma_bounds_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr int kChannels = 10000;
  int violations = 0;
  for (int trial = 0; trial < kChannels; ++trial) {
    const auto p = random_pauli_probabilities(2, rng, 0.55);
    const PTM r = ptm_from_channel(QuantumChannel::pauli(2, p, 1e-12));
    const double fp = process_fidelity(r);
    const double g = std::pow(gamma_from_det(r), -0.5);
    const auto b = gamma_bounds(fp);
    if (g < b.lower - 1e-12 || g > b.upper + 1e-12) ++violations;
  }
  double depol_worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const auto pt = global_depolarizing_point(10, 0.9 + 0.1 * i / 100.0);
    depol_worst = std::max(depol_worst, std::abs(pt.gamma_inv_sqrt - pt.process_fidelity));
  }
  // Dense single-Pauli channels against sqrt(2p - 1).
  double single_worst = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double p = 0.5 + 0.5 * i / 50.0;
    for (int n = 1; n <= 2; ++n) {
      std::vector<double> probs(pauli_count(n), 0.0);
      probs[0] = p;
      probs[pauli_count(n) - 1] = 1.0 - p;
      const PTM r = ptm_from_channel(QuantumChannel::pauli(n, probs));
      single_worst = std::max(single_worst, std::abs(std::pow(gamma_from_det(r), -0.5) - std::sqrt(2.0 * p - 1.0)));
    }
  }
  const bool ok = violations == 0 && depol_worst <= 1e-3 && single_worst <= 1e-9;
  return {"gamma_bounds", ok,
          {{"channels", kChannels}, {"violations", violations}, {"global_depolarizing_worst_gap", depol_worst}, {"single_pauli_worst_gap", single_worst}}};
}

TheoryCheck lemma_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 10);
  constexpr int kTrials = 100;
  int violations = 0;
  json worst;
  double worst_slack = 1.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const double c = 0.01 + 0.98 * u(rng);
    const double d_hi = c + (1.0 - c) * (0.01 + 0.99 * u(rng));
    const int n = size(rng);
    const auto g = lemma_gap(c, d_hi, n);
    const double slack = g.analytic_bound - g.numeric_max;
    if (slack < -1e-12) ++violations;
    if (slack < worst_slack) {
      worst_slack = slack;
      worst = {{"c", c}, {"d_hi", d_hi}, {"n", n}, {"numeric_max", g.numeric_max}, {"analytic_bound", g.analytic_bound}};
    }
  }
  return {"lemma", violations == 0, {{"trials", kTrials}, {"violations", violations}, {"tightest", worst}}};
}

TheoryCheck gamma_depolarizing() {
  const std::vector<double> f(10, fidelity_from_alpha(0.99, 4));
  double lf = 1.0;
  for (double x : f) lf *= x;
  const double gd = gamma_exact_depolarizing(f);
  const double rel = std::abs(gd - gamma_from_lf(lf)) / gd;
  return {"gamma_depolarizing", rel <= 1e-3, {{"gamma_exact", gd}, {"gamma_from_lf", gamma_from_lf(lf)}, {"relative_gap", rel}}};
}

}  // namespace

std::vector<std::string> theory_check_names() { return {"eplg_anchors", "crosstalk_oracle", "gamma_bounds", "lemma", "gamma_depolarizing"}; }

TheoryCheck run_theory_check(std::string_view name, std::uint64_t seed) {
  if (name == "eplg_anchors") return eplg_anchors();
  if (name == "crosstalk_oracle") return crosstalk_oracle(seed);
  if (name == "gamma_bounds") return gamma_bounds_check(seed);
  if (name == "lemma") return lemma_check(seed);
  if (name == "gamma_depolarizing") return gamma_depolarizing();
  throw std::invalid_argument("unknown theory check '" + std::string(name) + "'");
}

void to_json(json& j, const TheoryCheck& c) { j = {{"name", c.name}, {"passed", c.passed}, {"details", c.details}}; }

}  // namespace layerfid
