#pragma once

// Effective-dimensionality estimation: PCA variance threshold, participation
// ratio, the two-nearest-neighbor manifold estimator, learning-curve elbow,
// and the capped-median consensus across methods.

#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace rgauge {

/// Eigenvalue spectrum in variance units, sorted non-increasing, all >= 0.
class Spectrum {
 public:
  /// Validates ordering and non-negativity; throws std::invalid_argument.
  static Spectrum from_eigenvalues(std::vector<double> eigenvalues);

  /// Population-normalized (divide by n) covariance spectrum of mean-centered
  /// rows-as-samples data. Tiny negative round-off eigenvalues clamp to 0.
  static Spectrum from_data(const Eigen::MatrixXd& samples);

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double total() const;

 private:
  std::vector<double> eigenvalues_;
};

enum class DeffMethod {
  DomainPrior,
  PcaThreshold,
  ParticipationRatio,
  TwoNN,
  LearningCurve,
  Consensus,
};
const char* to_string(DeffMethod method);

struct DeffEstimate {
  DeffMethod method = DeffMethod::Consensus;
  double value = 0.0;        // > 0; integer-valued for PcaThreshold/DomainPrior
  nlohmann::json detail;     // method-specific metadata
};

/// Smallest k with cumulative variance fraction >= variance_fraction.
DeffEstimate pca_threshold(const Spectrum& spectrum, double variance_fraction = 0.95);

/// (sum lambda)^2 / sum lambda^2.
DeffEstimate participation_ratio(const Spectrum& spectrum);

/// Two-nearest-neighbor intrinsic dimension (Facco et al. ratio statistic).
/// Exact duplicate points are removed first (count recorded in detail); at
/// least 10 distinct points are required. The estimator is the Pareto
/// maximum-likelihood fit with the standard top-`discard_fraction` of ratios
/// treated as right-censored at the largest kept ratio:
///   d = k / (sum_kept ln mu + (n - k) ln mu_cut).
DeffEstimate twonn(const Eigen::MatrixXd& points, double discard_fraction = 0.10);

/// Learning-curve elbow: N* is the left endpoint of the first segment whose
/// improvement per doubling of N falls to or below `tolerance` times the
/// total observed improvement (a flat curve plateaus at the first N).
/// Returns D_eff = N*/c. Throws "no plateau" when no segment qualifies;
/// callers may widen the tolerance.
DeffEstimate learning_curve_elbow(const std::vector<std::pair<double, double>>& curve,
                                  double c = 10.0, double tolerance = 0.01);

/// Ceiling of the median estimate, capped at the smallest DomainPrior value
/// if any prior is present.
DeffEstimate consensus(const std::vector<DeffEstimate>& estimates);

}  // namespace rgauge
