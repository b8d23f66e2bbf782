// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Every campaign runs with its default settings; nothing here is tuned.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "layerfid/campaign/campaigns.hpp"
#include "layerfid/campaign/theory.hpp"
#include "layerfid/estimation/layer_fidelity.hpp"
#include "layerfid/topology/chains.hpp"
#include "layerfid/topology/device.hpp"

namespace {

using namespace layerfid;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool passed = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      note << " [failed: " << what << "]";
    }
  }
};

struct Timed {
  CampaignOutput out;
  double seconds = 0.0;
};

Timed run(const json& config) {
  const auto start = Clock::now();
  Timed t;
  t.out = run_campaign(config.get<CampaignConfig>());
  t.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  for (const auto& f : t.out.failures) std::fprintf(stderr, "series %s failed: %s\n", f.series.c_str(), f.error.c_str());
  return t;
}

const PlotRow& row(const CampaignOutput& out, const std::string& panel, const std::string& series, double x) {
  const auto* p = out.find_panel(panel);
  if (p) {
    for (const auto& r : p->rows) {
      if (r.series == series && r.x == x) return r;
    }
  }
  throw std::runtime_error("no point " + panel + "/" + series + " at x = " + std::to_string(x));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.passed = false;
    v.note << " [error: " << e.what() << "]";
  }
  if (!v.passed) ++failures;
  std::printf("%s criterion %2d: %s.%s\n", v.passed ? "PASS" : "FAIL", id, title.c_str(), v.note.str().c_str());
  std::fflush(stdout);
}

void budget(Verdict& v, double seconds, double limit) {
  v.note << " (" << fmt(seconds) << " s)";
  v.require(seconds <= limit, "runtime over " + fmt(limit) + " s");
}

void theory(Verdict& v, const std::string& name) {
  const auto start = Clock::now();
  const auto c = run_theory_check(name, 1);
  v.require(c.passed, name + " " + c.details.dump());
  budget(v, std::chrono::duration<double>(Clock::now() - start).count(), 60.0);
}

const std::vector<double> kZZ = {0, 50, 100, 150, 200, 300};

// Weighted least-squares slope and its standard error. Zero-error points get
// the smallest nonzero error in the set.
std::pair<double, double> weighted_slope(const std::vector<double>& x, const std::vector<double>& y, std::vector<double> err) {
  double floor = std::numeric_limits<double>::infinity();
  for (double e : err) {
    if (e > 0) floor = std::min(floor, e);
  }
  if (!std::isfinite(floor)) floor = 1e-12;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / std::pow(std::max(err[i], floor), 2);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / std::pow(std::max(err[i], floor), 2);
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
  }
  return {sxy / sxx, 1.0 / std::sqrt(sxx)};
}

// Window LF straight from the element list: in-window pairs count fully,
// pairs cut by the window edge count as F^(1/2), idle qubits inside count.
double brute_window_lf(const json& elements, int start, int n) {
  double lf = 1.0;
  for (const auto& e : elements) {
    const auto qubits = e.at("qubits").get<std::vector<int>>();
    int inside = 0;
    for (int q : qubits) inside += (q >= start && q < start + n);
    const double f = e.at("fidelity").get<double>();
    if (qubits.size() == 2) lf *= std::pow(f, inside / 2.0);
    else if (inside == 1) lf *= f;
  }
  return lf;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string fixtures = argc > 1 ? argv[1] : LAYERFID_FIXTURE_DIR;

  report(1, "EPLG anchors at 2 significant figures", [](Verdict& v) { theory(v, "eplg_anchors"); });

  Timed f4;
  try {
    f4 = run({{"campaign", "figure4"}, {"seed", 1}});
  } catch (const std::exception& e) {
    std::fprintf(stderr, "figure4: %s\n", e.what());
  }
  report(2, "layer RB pair error vs decoherence theory within 10%, simultaneous 5-unit pair below layer", [&](Verdict& v) {
    double worst = 0.0;
    for (const std::string pair : {"5v8", "8v8"}) {
      for (double x : {0.0, 1.0}) {
        const double measured = row(f4.out, "figure4_top", "layer_" + pair, x).y;
        const double theory = row(f4.out, "figure4_top", "theory_layer_" + pair, x).y;
        worst = std::max(worst, rel(measured, theory));
      }
    }
    const double sim5 = row(f4.out, "figure4_top", "simultaneous_5v8", 0).y;
    const double layer5 = row(f4.out, "figure4_top", "layer_5v8", 0).y;
    v.note << " worst rel gap " << fmt(worst) << ", 5-unit pair simultaneous " << fmt(sim5) << " vs layer " << fmt(layer5);
    v.require(worst <= 0.10, "theory gap");
    v.require(sim5 < layer5, "simultaneous not below layer");
    budget(v, f4.seconds, 300);
  });
  report(3, "mirror with Pauli vs layer error within 5% under incoherent noise", [&](Verdict& v) {
    double worst = 0.0;
    for (double t : {25.0, 50.0, 100.0}) {
      worst = std::max(worst, rel(row(f4.out, "figure4_bottom", "mirror_pauli", t).y, row(f4.out, "figure4_bottom", "layer", t).y));
    }
    v.note << " worst rel gap " << fmt(worst);
    v.require(worst <= 0.05, "mirror vs layer");
    budget(v, f4.seconds, 600);
  });

  Timed f5;
  try {
    f5 = run({{"campaign", "figure5"}, {"seed", 1}});
  } catch (const std::exception& e) {
    std::fprintf(stderr, "figure5: %s\n", e.what());
  }
  report(4, "isolated RB flat in ZZ rate, layer error strictly increasing", [&](Verdict& v) {
    std::vector<double> y, err;
    for (double x : kZZ) {
      const auto& r = row(f5.out, "figure5_top", "isolated", x);
      y.push_back(r.y);
      err.push_back(r.y_err);
    }
    const auto [slope, slope_err] = weighted_slope(kZZ, y, err);
    bool increasing = true;
    for (std::size_t i = 1; i < kZZ.size(); ++i) {
      increasing = increasing && row(f5.out, "figure5_top", "layer", kZZ[i]).y > row(f5.out, "figure5_top", "layer", kZZ[i - 1]).y;
    }
    v.note << " isolated slope " << fmt(slope) << " +- " << fmt(slope_err) << " per kHz";
    v.require(std::abs(slope) <= 2.0 * slope_err, "isolated slope");
    v.require(increasing, "layer not increasing");
    budget(v, f5.seconds, 600);
  });
  report(5, "mirror ordering, mirror with Pauli vs layer within 10% at 150 kHz, staggered flat and above simultaneous", [&](Verdict& v) {
    // At zero ZZ both mirrors see the same incoherent noise, so ties within
    // the fit error count as ordered.
    bool ordered = true;
    for (double x : kZZ) {
      const auto& n = row(f5.out, "figure5_middle", "mirror_no_pauli", x);
      const auto& p = row(f5.out, "figure5_middle", "mirror_pauli", x);
      ordered = ordered && n.y >= p.y - std::hypot(n.y_err, p.y_err);
    }
    const double p = row(f5.out, "figure5_middle", "mirror_pauli", 150).y;
    const double l = row(f5.out, "figure5_middle", "layer", 150).y;
    const auto& base = row(f5.out, "figure5_bottom", "staggered", 0);
    bool flat = true;
    for (double x : kZZ) {
      const auto& s = row(f5.out, "figure5_bottom", "staggered", x);
      flat = flat && std::abs(s.y - base.y) <= std::hypot(s.y_err, base.y_err);
    }
    const double sim0 = row(f5.out, "figure5_bottom", "simultaneous", 0).y;
    v.note << " 150 kHz: layer " << fmt(l) << ", mirror " << fmt(p) << ", rel gap " << fmt(rel(l, p)) << "; staggered " << fmt(base.y) << " vs simultaneous " << fmt(sim0);
    v.require(ordered, "no-Pauli mirror below Pauli mirror");
    v.require(rel(l, p) <= 0.10, "layer vs mirror at 150 kHz");
    v.require(flat, "staggered not flat");
    v.require(base.y > sim0, "staggered baseline not above simultaneous");
    budget(v, f5.seconds, 600);
  });

  report(6, "coherent scenarios: layer closer to mirror with Pauli, no-Pauli mirror above in a-e", [&](Verdict& v) {
    const auto f6 = run({{"campaign", "figure6"}, {"seed", 1}});
    for (int s = 0; s < 9; ++s) {
      const char name = static_cast<char>('a' + s);
      const double l = row(f6.out, "figure6", "layer", s).y;
      const double p = row(f6.out, "figure6", "mirror_pauli", s).y;
      const double n = row(f6.out, "figure6", "mirror_no_pauli", s).y;
      const bool close = std::abs(l - p) <= std::abs(l - n) || rel(l, p) <= 0.15;
      v.note << " " << name << ":" << fmt(l) << "/" << fmt(p) << "/" << fmt(n);
      v.require(close, std::string("scenario ") + name + " layer vs mirror");
      if (s < 5) v.require(n >= p, std::string("scenario ") + name + " mirror ordering");
    }
    budget(v, f6.seconds, 1800);
  });

  report(7, "crosstalk oracle: layer estimate never above true fidelity, small-angle forms", [](Verdict& v) { theory(v, "crosstalk_oracle"); });
  report(8, "gamma bounds on random Pauli channels, global depolarizing and single-Pauli families", [](Verdict& v) { theory(v, "gamma_bounds"); });
  report(9, "extreme-point maximum never above f(lambda_0)", [](Verdict& v) { theory(v, "lemma"); });

  report(10, "gamma from LF vs per-pair model within 1% on a 16-qubit chain", [](Verdict& v) {
    const auto t = run({{"campaign", "gamma_compare"}, {"seed", 1}});
    const double gap = t.out.results.at("relative_gap").get<double>();
    v.note << " gamma " << fmt(t.out.results.at("gamma_from_lf").get<double>()) << " vs " << fmt(t.out.results.at("gamma_model").get<double>()) << ", rel gap " << fmt(gap);
    v.require(gap <= 0.01, "gamma gap");
    budget(v, t.seconds, 600);
  });

  report(11, "LF vs N on a synthetic 20-qubit device matches injected errors, windows and chains match exhaustive search", [&](Verdict& v) {
    const std::string device_path = fixtures + "/synthetic_20.json";
    const auto t = run({{"campaign", "lf_scan"}, {"device", device_path}, {"seed", 1}});
    const auto& r = t.out.results;
    double worst_sigma = 0.0;
    for (const auto& p : r.at("lf_vs_n")) {
      const double sigma = std::abs(p.at("lf").get<double>() - p.at("analytic_lf").get<double>()) / p.at("lf_err").get<double>();
      worst_sigma = std::max(worst_sigma, sigma);
    }
    v.require(r.at("lf_vs_n").size() == 19, "expected N = 2..20");
    v.require(worst_sigma <= 3.0, "measured LF off the analytic product");

    int windows = 0;
    bool windows_ok = true;
    for (const auto& chain : r.at("chains")) {
      const auto& elements = chain.at("result").at("elements");
      const int len = static_cast<int>(chain.at("qubits").size());
      for (const auto& s : chain.at("subchains")) {
        const int n = s.at("n").get<int>();
        int best_start = 0;
        double best = -1.0;
        for (int start = 0; start + n <= len; ++start) {
          const double lf = brute_window_lf(elements, start, n);
          if (lf > best * (1 + 1e-12)) best = lf, best_start = start;
        }
        windows_ok = windows_ok && best_start == s.at("start").get<int>() && std::abs(best - s.at("lf").get<double>()) <= 1e-12;
        ++windows;
      }
    }
    v.require(windows_ok, "best window differs from enumeration");

    bool chains_ok = true;
    for (const std::string name : {"synthetic_20.json", "heavy_hex_27.json"}) {
      const auto device = load_device(fixtures + "/" + name);
      for (int n : {4, 8, 12}) {
        const auto beam = find_candidate_chains(device, n, 1);
        const auto full = exhaustive_candidate_chains(device, n, 1);
        chains_ok = chains_ok && !beam.chains.empty() && !full.chains.empty() &&
                    std::abs(beam.chains[0].predicted_lf - full.chains[0].predicted_lf) <= 1e-12;
      }
    }
    v.require(chains_ok, "beam search misses the best chain");
    v.note << " worst |LF - analytic| " << fmt(worst_sigma) << " sigma over N = 2..20, " << windows << " windows checked";
    budget(v, t.seconds, 900);
  });

  report(12, "LF strictly decreasing with disjoint layer count, error within 10% of decoherence prediction", [](Verdict& v) {
    const auto t = run({{"campaign", "layer_count_sweep"}, {"seed", 1}});
    double prev = 2.0;
    double worst = 0.0;
    for (const auto& p : t.out.results.at("sweep")) {
      const double lf = p.at("lf").get<double>();
      const double pred = p.at("predicted_lf").get<double>();
      v.require(lf < prev, "LF not decreasing at " + std::to_string(p.at("layers").get<int>()) + " layers");
      prev = lf;
      worst = std::max(worst, rel(1.0 - lf, 1.0 - pred));
    }
    v.note << " worst rel error gap " << fmt(worst);
    v.require(worst <= 0.10, "prediction gap");
    budget(v, t.seconds, 600);
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
