#pragma once

// Logistic-loss gradient boosting over depth-limited regression trees.
// Greedy variance-reduction splits with deterministic tie-breaking (lowest
// feature index, then lowest threshold); leaves take a damped Newton step.

#include <vector>

#include <Eigen/Core>

namespace rgauge {

struct GbmConfig {
  int estimators = 200;
  int max_depth = 3;
  double learning_rate = 0.1;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double predict_row(const Eigen::MatrixXd& features, Eigen::Index row) const;
};

struct GbmModel {
  double base_score = 0.0;  // initial log-odds
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  std::vector<double> train_losses;  // mean log-loss after each round
};

/// Throws on single-class training labels.
GbmModel fit_gbm(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const GbmConfig& config);

/// Per-row P(y = 1).
Eigen::VectorXd gbm_predict(const GbmModel& model, const Eigen::MatrixXd& features);

}  // namespace rgauge
