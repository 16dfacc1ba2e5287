#include "rgauge/deff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace rgauge {

Spectrum Spectrum::from_eigenvalues(std::vector<double> eigenvalues) {
  if (eigenvalues.empty()) throw std::invalid_argument("spectrum must be non-empty");
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues[i] >= 0.0)) {
      throw std::invalid_argument("spectrum eigenvalues must be non-negative");
    }
    if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
      throw std::invalid_argument("spectrum eigenvalues must be sorted non-increasing");
    }
  }
  Spectrum spec;
  spec.eigenvalues_ = std::move(eigenvalues);
  return spec;
}

Spectrum Spectrum::from_data(const Eigen::MatrixXd& samples) {
  if (samples.rows() < 1 || samples.cols() < 1) {
    throw std::invalid_argument("spectrum: data must be non-empty");
  }
  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(samples.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum: eigendecomposition failed");
  }
  std::vector<double> vals(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(vals.begin(), vals.end(), std::greater<>());
  for (auto& v : vals) v = std::max(v, 0.0);
  return from_eigenvalues(std::move(vals));
}

double Spectrum::total() const {
  double sum = 0.0;
  for (double v : eigenvalues_) sum += v;
  return sum;
}

const char* to_string(DeffMethod method) {
  switch (method) {
    case DeffMethod::DomainPrior: return "domain_prior";
    case DeffMethod::PcaThreshold: return "pca_threshold";
    case DeffMethod::ParticipationRatio: return "participation_ratio";
    case DeffMethod::TwoNN: return "twonn";
    case DeffMethod::LearningCurve: return "learning_curve";
    case DeffMethod::Consensus: return "consensus";
  }
  return "?";
}

DeffEstimate pca_threshold(const Spectrum& spectrum, double variance_fraction) {
  if (!(variance_fraction > 0.0 && variance_fraction < 1.0)) {
    throw std::invalid_argument("variance fraction must lie in (0, 1)");
  }
  const double total = spectrum.total();
  if (total <= 0.0) throw std::invalid_argument("degenerate spectrum");
  double cumulative = 0.0;
  const auto& vals = spectrum.eigenvalues();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    cumulative += vals[k];
    if (cumulative / total >= variance_fraction) {
      DeffEstimate est;
      est.method = DeffMethod::PcaThreshold;
      est.value = static_cast<double>(k + 1);
      est.detail = {{"variance_fraction", variance_fraction},
                    {"explained", cumulative / total}};
      return est;
    }
  }
  // Unreachable: the full sum always reaches every fraction < 1.
  throw std::logic_error("pca_threshold: cumulative sum never reached fraction");
}

DeffEstimate participation_ratio(const Spectrum& spectrum) {
  double sum = 0.0, sum_sq = 0.0;
  for (double v : spectrum.eigenvalues()) {
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq <= 0.0) throw std::invalid_argument("degenerate spectrum");
  DeffEstimate est;
  est.method = DeffMethod::ParticipationRatio;
  est.value = sum * sum / sum_sq;
  est.detail = {{"trace", sum}};
  return est;
}

DeffEstimate twonn(const Eigen::MatrixXd& points, double discard_fraction) {
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
    throw std::invalid_argument("twonn: discard fraction must lie in [0, 1)");
  }
  // Drop exact duplicates (they would give r1 = 0).
  std::vector<Eigen::Index> keep;
  {
    std::set<std::vector<double>> seen;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      std::vector<double> row(points.cols());
      for (Eigen::Index j = 0; j < points.cols(); ++j) row[j] = points(i, j);
      if (seen.insert(std::move(row)).second) keep.push_back(i);
    }
  }
  const std::size_t duplicates = points.rows() - keep.size();
  const std::size_t n = keep.size();
  if (n < 10) throw std::invalid_argument("insufficient points (need >= 10 distinct)");

  std::vector<double> log_mu;
  log_mu.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r1 = std::numeric_limits<double>::infinity();
    double r2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (points.row(keep[i]) - points.row(keep[j])).norm();
      if (d < r1) {
        r2 = r1;
        r1 = d;
      } else if (d < r2) {
        r2 = d;
      }
    }
    log_mu.push_back(std::log(r2 / r1));
  }
  std::sort(log_mu.begin(), log_mu.end());
  const std::size_t kept = n - static_cast<std::size_t>(std::floor(discard_fraction * n));
  const double cut = log_mu[kept - 1];
  double sum = 0.0;
  for (std::size_t i = 0; i < kept; ++i) sum += log_mu[i];
  // Right-censored Pareto MLE: the discarded tail contributes only the event
  // {mu > cut}, whose log-likelihood derivative supplies (n - kept) * cut.
  const double denom = sum + static_cast<double>(n - kept) * cut;
  if (!(denom > 0.0)) {
    throw std::invalid_argument(
        "twonn: degenerate neighbour ratios (tied distances carry no dimension signal)");
  }
  DeffEstimate est;
  est.method = DeffMethod::TwoNN;
  est.value = static_cast<double>(kept) / denom;
  est.detail = {{"n_points", n},
                {"duplicates_removed", duplicates},
                {"discard_fraction", discard_fraction},
                {"estimator", "pareto_ml_censored"}};
  return est;
}

DeffEstimate learning_curve_elbow(const std::vector<std::pair<double, double>>& curve,
                                  double c, double tolerance) {
  if (curve.size() < 4) throw std::invalid_argument("learning curve needs >= 4 points");
  if (!(c >= 10.0 && c <= 100.0)) throw std::invalid_argument("c must lie in [10, 100]");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].first > curve[i - 1].first)) {
      throw std::invalid_argument("learning curve sample sizes must be strictly increasing");
    }
  }
  double best = curve.front().second;
  for (const auto& [n, m] : curve) best = std::max(best, m);
  const double total = best - curve.front().second;

  double n_star = -1.0;
  if (total <= 0.0) {
    n_star = curve.front().first;  // flat curve: plateau from the start
  } else {
    const double tol = tolerance * total;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      const double doublings = std::log2(curve[i].first / curve[i - 1].first);
      const double rate = (curve[i].second - curve[i - 1].second) / doublings;
      if (rate <= tol) {
        n_star = curve[i - 1].first;
        break;
      }
    }
  }
  if (n_star < 0.0) {
    throw std::invalid_argument(
        "no plateau: marginal improvement never fell below tolerance (consider widening it)");
  }
  DeffEstimate est;
  est.method = DeffMethod::LearningCurve;
  est.value = n_star / c;
  est.detail = {{"n_star", n_star}, {"c", c}, {"tolerance", tolerance}};
  return est;
}

DeffEstimate consensus(const std::vector<DeffEstimate>& estimates) {
  if (estimates.empty()) throw std::invalid_argument("consensus needs at least one estimate");
  std::vector<double> values;
  double prior_cap = std::numeric_limits<double>::infinity();
  for (const auto& est : estimates) {
    if (!(est.value > 0.0)) throw std::invalid_argument("estimates must be positive");
    values.push_back(est.value);
    if (est.method == DeffMethod::DomainPrior) prior_cap = std::min(prior_cap, est.value);
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median =
      (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double value = std::ceil(median);
  bool capped = false;
  if (value > prior_cap) {
    value = prior_cap;
    capped = true;
  }
  DeffEstimate est;
  est.method = DeffMethod::Consensus;
  est.value = value;
  est.detail = {{"median", median}, {"capped_by_prior", capped}};
  if (std::isfinite(prior_cap)) est.detail["prior_cap"] = prior_cap;
  return est;
}

}  // namespace rgauge
