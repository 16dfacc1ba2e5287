#pragma once

// Small fully-connected binary classifier: ReLU hidden layers, sigmoid
// output, cross-entropy loss, mini-batch gradient descent with seeded
// He-uniform initialization and seeded shuffling.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace rgauge {

struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: fan_out x fan_in
  std::vector<Eigen::VectorXd> biases;

  std::size_t parameter_count() const;
  /// Flatten/unflatten for gradient checking.
  Eigen::VectorXd flatten() const;
  void assign_from(const Eigen::VectorXd& flat);
};

struct MlpConfig {
  std::vector<int> hidden = {32};
  double l2 = 1e-4;
  double learning_rate = 0.05;
  int epochs = 100;
  int batch_size = 256;
  std::uint64_t seed = 42;
};

struct MlpModel {
  MlpParams params;
  MlpConfig config;
  double final_loss = 0.0;
};

/// Seeded He-uniform initialization for the given layer widths
/// (input -> hidden... -> 1).
MlpParams init_mlp(int input_dim, const std::vector<int>& hidden, std::uint64_t seed);

/// Mean cross-entropy plus (l2/2)*||W||^2 over a batch; fills the analytic
/// gradient when `grad` is non-null (same shapes as `params`).
double mlp_loss_and_gradient(const MlpParams& params, const Eigen::MatrixXd& features,
                             const Eigen::VectorXd& labels, double l2,
                             MlpParams* grad = nullptr);

/// Throws on non-finite loss (divergence) with advice to lower the rate.
MlpModel fit_mlp(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const MlpConfig& config);

Eigen::VectorXd mlp_predict(const MlpParams& params, const Eigen::MatrixXd& features);

}  // namespace rgauge
