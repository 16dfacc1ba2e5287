#pragma once

// Maximum-likelihood logistic regression with optional L2 on the weights
// (never the intercept), fitted by full-batch accelerated gradient descent
// with a power-iteration step size. Deterministic from a zero start.

#include <vector>

#include <Eigen/Core>

namespace rgauge {

struct LogisticModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  bool converged = false;
  int iterations = 0;
  double final_grad_norm = 0.0;
};

LogisticModel fit_logistic(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                           double l2, int max_iterations = 10000, double tolerance = 1e-6);

/// Per-row P(y = 1).
Eigen::VectorXd logistic_predict(const LogisticModel& model, const Eigen::MatrixXd& features);

}  // namespace rgauge
