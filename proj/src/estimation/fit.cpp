#include "layerfid/estimation/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace layerfid {
namespace {

constexpr double kAlphaMin = 1e-9;

// Parameters (A, alpha, B); B is held at 0 when `with_b` is false.
struct Problem {
  std::vector<double> l;
  std::vector<double> y;
  std::vector<double> sigma;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  bool with_b = true;

  int free_count() const { return with_b ? 3 : 2; }

  double model(const std::array<double, 3>& p, double l) const { return p[0] * std::pow(p[1], l) + (with_b ? p[2] : 0.0); }

  double cost(const std::array<double, 3>& p) const {
    double c = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const double r = (y[i] - model(p, l[i])) / sigma[i];
      c += r * r;
    }
    return c;
  }

  void linearize(const std::array<double, 3>& p, Eigen::MatrixXd& j, Eigen::VectorXd& r) const {
    const auto m = static_cast<Eigen::Index>(l.size());
    j.resize(m, free_count());
    r.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double li = l[static_cast<std::size_t>(i)];
      const double s = sigma[static_cast<std::size_t>(i)];
      const double pw = std::pow(p[1], li);
      j(i, 0) = pw / s;
      j(i, 1) = (li == 0.0 ? 0.0 : p[0] * li * std::pow(p[1], li - 1.0)) / s;
      if (with_b) j(i, 2) = 1.0 / s;
      r(i) = (y[static_cast<std::size_t>(i)] - model(p, li)) / s;
    }
  }
};

struct Solution {
  std::array<double, 3> p{};
  double cost = 0.0;
  bool converged = false;
};

Solution levenberg_marquardt(const Problem& prob, std::array<double, 3> p) {
  for (int k = 0; k < 3; ++k) p[static_cast<std::size_t>(k)] = std::clamp(p[static_cast<std::size_t>(k)], prob.lo[static_cast<std::size_t>(k)], prob.hi[static_cast<std::size_t>(k)]);
  double cost = prob.cost(p);
  double lambda = 1e-3;
  Eigen::MatrixXd j;
  Eigen::VectorXd r;
  for (int it = 0; it < 2000; ++it) {
    prob.linearize(p, j, r);
    const Eigen::MatrixXd h = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    bool accepted = false;
    while (lambda < 1e14) {
      Eigen::MatrixXd damped = h;
      for (Eigen::Index k = 0; k < h.rows(); ++k) damped(k, k) += lambda * std::max(h(k, k), 1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(g);
      std::array<double, 3> trial = p;
      for (Eigen::Index k = 0; k < step.size(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        trial[kk] = std::clamp(p[kk] + step(k), prob.lo[kk], prob.hi[kk]);
      }
      const double trial_cost = prob.cost(trial);
      if (trial_cost < cost) {
        const double gain = cost - trial_cost;
        double moved = 0.0;
        for (std::size_t k = 0; k < 3; ++k) moved = std::max(moved, std::abs(trial[k] - p[k]));
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (gain <= 1e-15 * (cost + 1e-30) || moved < 1e-14) return {p, cost, true};
        break;
      }
      lambda *= 4.0;
    }
    // No descent direction left inside the bounds.
    if (!accepted) return {p, cost, true};
  }
  return {p, cost, false};
}

FitResult finish(const Problem& prob, const Solution& sol) {
  FitResult f;
  f.a = sol.p[0];
  f.alpha = sol.p[1];
  f.b = prob.with_b ? sol.p[2] : 0.0;
  f.converged = sol.converged;
  const int m = static_cast<int>(prob.l.size());
  const int k = prob.free_count();
  f.reduced_chi2 = m > k ? sol.cost / (m - k) : 0.0;
  Eigen::MatrixXd j;
  Eigen::VectorXd r;
  prob.linearize(sol.p, j, r);
  const Eigen::MatrixXd cov = (j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse() * (m > k ? f.reduced_chi2 : 1.0);
  f.a_err = std::sqrt(std::max(cov(0, 0), 0.0));
  f.alpha_err = std::sqrt(std::max(cov(1, 1), 0.0));
  if (prob.with_b) f.b_err = std::sqrt(std::max(cov(2, 2), 0.0));
  if (!f.converged) f.warning = "fit did not converge";
  return f;
}

FitResult best_of(const Problem& prob, const std::vector<std::array<double, 3>>& starts) {
  Solution best;
  bool have = false;
  for (const auto& s : starts) {
    const Solution sol = levenberg_marquardt(prob, s);
    if (!have || (sol.converged && !best.converged) || (sol.converged == best.converged && sol.cost < best.cost)) {
      best = sol;
      have = true;
    }
  }
  return finish(prob, best);
}

// A standard error that is accidentally tiny (identical samples at one depth)
// would pin the fit to that point, so each sigma is floored at half the
// median standard error of the curve.
std::vector<double> floored(std::span<const double> sem) {
  std::vector<double> sorted(sem.begin(), sem.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
  const double floor = std::max(kSigmaFloor, 0.5 * sorted[sorted.size() / 2]);
  std::vector<double> s;
  for (double v : sem) s.push_back(std::max(v, floor));
  return s;
}

}  // namespace

void DecayCurve::validate() const {
  if (mean.size() != depths.size() || sem.size() != depths.size()) throw std::invalid_argument("decay curve: depths, means and errors differ in length");
  if (std::set<int>(depths.begin(), depths.end()).size() < 4) throw std::invalid_argument("decay curve: at least four distinct depths are needed");
  for (int l : depths) {
    if (l < 0) throw std::invalid_argument("decay curve: negative depth");
  }
  for (double p : mean) {
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) throw std::invalid_argument("decay curve: survival outside [0, 1]");
  }
  for (double s : sem) {
    if (!(s >= 0.0)) throw std::invalid_argument("decay curve: negative standard error");
  }
  if (dimension < 2) throw std::invalid_argument("decay curve: dimension must be at least 2");
}

DecayCurve make_curve(std::vector<int> depths, const std::vector<std::vector<double>>& samples, int dimension) {
  if (samples.size() != depths.size()) throw std::invalid_argument("make_curve: one sample list per depth is needed");
  DecayCurve c;
  c.depths = std::move(depths);
  c.dimension = dimension;
  for (const auto& s : samples) {
    if (s.empty()) throw std::invalid_argument("make_curve: depth without samples");
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    const double n = static_cast<double>(s.size());
    c.mean.push_back(mean);
    c.sem.push_back(s.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0);
  }
  return c;
}

FitResult fit_decay(const DecayCurve& curve) {
  curve.validate();
  const double floor = 1.0 / (static_cast<double>(curve.dimension) * curve.dimension);
  const auto [lo_it, hi_it] = std::minmax_element(curve.mean.begin(), curve.mean.end());
  const double lowest = *lo_it;

  FitResult f;
  if (*hi_it - lowest < 1e-12) {
    f.alpha = 1.0;
    f.b = std::min(floor, lowest);
    f.a = std::clamp(lowest - f.b, 0.0, 1.0);
  } else {
    Problem prob;
    for (std::size_t i = 0; i < curve.depths.size(); ++i) prob.l.push_back(curve.depths[i]);
    prob.y = curve.mean;
    prob.sigma = floored(curve.sem);
    prob.lo = {0.0, kAlphaMin, 0.0};
    prob.hi = {1.0, 1.0, 1.0};

    const std::size_t first = static_cast<std::size_t>(std::min_element(curve.depths.begin(), curve.depths.end()) - curve.depths.begin());
    const double a0 = std::clamp(curve.mean[first] - floor, 0.01, 1.0);
    double alpha0 = 0.99;
    // Two-point estimate against the deepest point still clearly above the floor.
    for (std::size_t i = 0; i < curve.depths.size(); ++i) {
      const double excess = curve.mean[i] - floor;
      if (curve.depths[i] > curve.depths[first] && excess > 0.1 * a0) {
        alpha0 = std::pow(excess / a0, 1.0 / (curve.depths[i] - curve.depths[first]));
      }
    }
    alpha0 = std::clamp(alpha0, 0.05, 0.999999);
    const double a_start = a0 / std::pow(alpha0, curve.depths[first]);
    std::vector<std::array<double, 3>> starts = {{std::min(a_start, 1.0), alpha0, floor}};
    for (double a : {0.9, 0.99, 0.999, 0.5}) starts.push_back({1.0 - floor, a, floor});
    starts.push_back({std::min(a_start, 1.0), alpha0, lowest});
    f = best_of(prob, starts);
  }
  if (lowest >= kUnderdrivenLevel) {
    f.underdriven = true;
    f.alpha_err = std::max(f.alpha_err, kUnderdrivenAlphaFloor);
    f.warning = "underdriven - extend depths";
  }
  return f;
}

FitResult fit_pure_exponential(std::span<const int> depths, std::span<const double> values, std::span<const double> sem) {
  if (depths.size() != values.size() || sem.size() != values.size()) throw std::invalid_argument("fit_pure_exponential: length mismatch");
  if (std::set<int>(depths.begin(), depths.end()).size() < 3) throw std::invalid_argument("fit_pure_exponential: at least three distinct depths are needed");
  Problem prob;
  prob.with_b = false;
  for (int l : depths) prob.l.push_back(l);
  prob.y.assign(values.begin(), values.end());
  prob.sigma = floored(sem);
  prob.lo = {0.0, kAlphaMin, 0.0};
  prob.hi = {2.0, 1.0, 0.0};

  // Log-linear start from the positive points.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, cnt = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 1e-6) continue;
    const double x = depths[i];
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1.0;
  }
  double alpha0 = 0.99;
  double a0 = 1.0;
  if (cnt >= 2.0 && cnt * sxx - sx * sx > 0.0) {
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    alpha0 = std::clamp(std::exp(slope), 0.05, 1.0);
    a0 = std::clamp(std::exp((sy - slope * sx) / cnt), 1e-3, 2.0);
  }
  std::vector<std::array<double, 3>> starts = {{a0, alpha0, 0.0}};
  for (double a : {0.9, 0.99, 0.999}) starts.push_back({1.0, a, 0.0});
  return best_of(prob, starts);
}

void to_json(nlohmann::json& j, const DecayCurve& c) {
  j = {{"depths", c.depths}, {"mean", c.mean}, {"sem", c.sem}, {"dimension", c.dimension}, {"sublayer", c.sublayer}, {"qubits", c.qubits}};
}

void to_json(nlohmann::json& j, const FitResult& f) {
  j = {{"A", f.a},         {"alpha", f.alpha},         {"B", f.b},
       {"A_err", f.a_err}, {"alpha_err", f.alpha_err}, {"B_err", f.b_err},
       {"reduced_chi2", f.reduced_chi2}, {"converged", f.converged}, {"underdriven", f.underdriven}};
  if (!f.warning.empty()) j["warning"] = f.warning;
}

}  // namespace layerfid
