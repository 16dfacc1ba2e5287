#include "rgauge/logistic.hpp"

#include <cmath>
#include <stdexcept>

namespace rgauge {

namespace {

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Largest eigenvalue of X'X / n by power iteration (deterministic start).
double top_gram_eigenvalue(const Eigen::MatrixXd& features) {
  const double n = static_cast<double>(features.rows());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(features.cols());
  v.normalize();
  double eig = 1.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = features.transpose() * (features * v) / n;
    const double norm = w.norm();
    if (norm <= 0.0) return 1.0;
    eig = norm;
    v = w / norm;
  }
  return eig;
}

}  // namespace

LogisticModel fit_logistic(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                           double l2, int max_iterations, double tolerance) {
  const Eigen::Index n = features.rows();
  if (n == 0 || static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("logistic: labels must match feature rows");
  }
  if (l2 < 0.0) throw std::invalid_argument("logistic: l2 must be >= 0");

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = static_cast<double>(labels[i]);

  // Lipschitz bound for the mean cross-entropy gradient: lambda_max(X'X/n)/4
  // (+1 accounts for the intercept coordinate), plus the ridge term.
  const double lipschitz = (top_gram_eigenvalue(features) + 1.0) / 4.0 + l2;
  const double step = 1.0 / lipschitz;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(features.cols());
  double b = 0.0;
  Eigen::VectorXd w_prev = w;
  double b_prev = b;

  LogisticModel model;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int it = 1; it <= max_iterations; ++it) {
    // Nesterov extrapolation.
    const double momentum = static_cast<double>(it - 1) / static_cast<double>(it + 2);
    Eigen::VectorXd w_look = w + momentum * (w - w_prev);
    const double b_look = b + momentum * (b - b_prev);

    Eigen::VectorXd z = features * w_look;
    z.array() += b_look;
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = sigmoid(z(i));
    const Eigen::VectorXd residual = p - y;
    Eigen::VectorXd grad_w = features.transpose() * residual * inv_n + l2 * w_look;
    const double grad_b = residual.sum() * inv_n;

    w_prev = w;
    b_prev = b;
    w = w_look - step * grad_w;
    b = b_look - step * grad_b;

    const double grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    model.iterations = it;
    model.final_grad_norm = grad_norm;
    if (grad_norm <= tolerance) {
      model.converged = true;
      break;
    }
  }
  model.weights = std::move(w);
  model.intercept = b;
  return model;
}

Eigen::VectorXd logistic_predict(const LogisticModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.weights.size()) {
    throw std::invalid_argument("logistic: feature count mismatch");
  }
  Eigen::VectorXd z = features * model.weights;
  z.array() += model.intercept;
  Eigen::VectorXd p(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) p(i) = sigmoid(z(i));
  return p;
}

}  // namespace rgauge
