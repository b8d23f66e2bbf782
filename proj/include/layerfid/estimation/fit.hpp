#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace layerfid {

/// Mean survival per depth for one RB unit.
struct DecayCurve {
  std::vector<int> depths;
  std::vector<double> mean;
  std::vector<double> sem;  // standard error of the mean
  int dimension = 4;        // 2 for an idle qubit, 4 for a pair
  int sublayer = 0;
  std::vector<int> qubits;

  void validate() const;
};

/// Mean and standard error per depth from samples[depth][randomization].
DecayCurve make_curve(std::vector<int> depths, const std::vector<std::vector<double>>& samples, int dimension);

struct FitResult {
  double a = 0.0;
  double alpha = 1.0;
  double b = 0.0;
  double a_err = 0.0;
  double alpha_err = 0.0;
  double b_err = 0.0;
  double reduced_chi2 = 0.0;
  bool converged = true;
  /// The curve never dropped below kUnderdrivenLevel.
  bool underdriven = false;
  std::string warning;
};

inline constexpr double kUnderdrivenLevel = 0.95;
inline constexpr double kSigmaFloor = 1e-6;
/// Uncertainty floor on alpha for underdriven curves.
inline constexpr double kUnderdrivenAlphaFloor = 1e-4;

/// Weighted fit of P(l) = A alpha^l + B with A, B in [0, 1] and alpha in
/// (0, 1]. Needs at least four distinct depths. Sigmas are floored at
/// max(kSigmaFloor, median(sem) / 2). Errors come from the covariance scaled
/// by the reduced chi-square.
FitResult fit_decay(const DecayCurve& curve);

/// Weighted fit of S(l) = A alpha^l with A in [0, 2] and alpha in (0, 1].
FitResult fit_pure_exponential(std::span<const int> depths, std::span<const double> values, std::span<const double> sem);

void to_json(nlohmann::json& j, const DecayCurve& c);
void to_json(nlohmann::json& j, const FitResult& f);

}  // namespace layerfid
