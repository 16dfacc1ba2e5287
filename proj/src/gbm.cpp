#include "rgauge/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rgauge {

double RegressionTree::predict_row(const Eigen::MatrixXd& features, Eigen::Index row) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
    node = features(row, nd.feature) < nd.threshold ? nd.left : nd.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best variance-reduction split over the given samples; ties resolve to the
// lowest feature index then the lowest threshold by scan order.
SplitChoice best_split(const Eigen::MatrixXd& features, const Eigen::VectorXd& residuals,
                       const std::vector<Eigen::Index>& samples) {
  SplitChoice best;
  const std::size_t n = samples.size();
  if (n < 2) return best;

  double sum = 0.0;
  for (Eigen::Index idx : samples) sum += residuals(idx);

  std::vector<std::pair<double, double>> value_residual(n);  // per feature
  for (int j = 0; j < features.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      value_residual[i] = {features(samples[i], j), residuals(samples[i])};
    }
    std::sort(value_residual.begin(), value_residual.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double left_sum = 0.0;
    std::size_t left_count = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += value_residual[i].second;
      ++left_count;
      if (value_residual[i].first == value_residual[i + 1].first) continue;
      const double right_sum = sum - left_sum;
      const std::size_t right_count = n - left_count;
      // Variance-reduction gain: parent SSE minus children SSE.
      const double gain = left_sum * left_sum / static_cast<double>(left_count) +
                          right_sum * right_sum / static_cast<double>(right_count) -
                          sum * sum / static_cast<double>(n);
      if (gain > best.gain) {
        best.found = true;
        best.feature = j;
        best.threshold = 0.5 * (value_residual[i].first + value_residual[i + 1].first);
        best.gain = gain;
      }
    }
  }
  return best;
}

int build_tree(RegressionTree& tree, const Eigen::MatrixXd& features,
               const Eigen::VectorXd& residuals, const Eigen::VectorXd& hessians,
               std::vector<Eigen::Index>& samples, int depth, int max_depth) {
  const int node_index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();

  SplitChoice split;
  if (depth < max_depth && samples.size() >= 2) {
    split = best_split(features, residuals, samples);
  }
  if (!split.found || split.gain <= 0.0) {
    // Newton leaf: sum of residuals over sum of hessians, damped by the
    // shrinkage applied outside.
    double num = 0.0, den = 0.0;
    for (Eigen::Index idx : samples) {
      num += residuals(idx);
      den += hessians(idx);
    }
    tree.nodes[static_cast<std::size_t>(node_index)].value =
        num / std::max(den, 1e-12);
    return node_index;
  }

  std::vector<Eigen::Index> left, right;
  for (Eigen::Index idx : samples) {
    (features(idx, split.feature) < split.threshold ? left : right).push_back(idx);
  }
  samples.clear();
  samples.shrink_to_fit();

  const int left_index = build_tree(tree, features, residuals, hessians, left, depth + 1, max_depth);
  const int right_index = build_tree(tree, features, residuals, hessians, right, depth + 1, max_depth);
  TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
  node.feature = split.feature;
  node.threshold = split.threshold;
  node.left = left_index;
  node.right = right_index;
  return node_index;
}

}  // namespace

GbmModel fit_gbm(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const GbmConfig& config) {
  const Eigen::Index n = features.rows();
  if (n == 0 || static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("gbm: labels must match feature rows");
  }
  if (config.estimators < 1 || config.max_depth < 1 || config.learning_rate <= 0.0) {
    throw std::invalid_argument("gbm: invalid configuration");
  }
  double positives = 0.0;
  for (int label : labels) positives += label;
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    throw std::invalid_argument("gbm: training labels are single-class");
  }

  GbmModel model;
  model.learning_rate = config.learning_rate;
  const double base_rate = positives / static_cast<double>(n);
  model.base_score = std::log(base_rate / (1.0 - base_rate));

  Eigen::VectorXd scores = Eigen::VectorXd::Constant(n, model.base_score);
  Eigen::VectorXd residuals(n), hessians(n);
  for (int round = 0; round < config.estimators; ++round) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(scores(i));
      residuals(i) = static_cast<double>(labels[i]) - p;
      hessians(i) = p * (1.0 - p);
    }
    RegressionTree tree;
    std::vector<Eigen::Index> samples(static_cast<std::size_t>(n));
    std::iota(samples.begin(), samples.end(), 0);
    build_tree(tree, features, residuals, hessians, samples, 0, config.max_depth);

    for (Eigen::Index i = 0; i < n; ++i) {
      scores(i) += config.learning_rate * tree.predict_row(features, i);
    }
    model.trees.push_back(std::move(tree));

    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = scores(i);
      loss += std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))) -
              static_cast<double>(labels[i]) * z;
    }
    model.train_losses.push_back(loss / static_cast<double>(n));
  }
  return model;
}

Eigen::VectorXd gbm_predict(const GbmModel& model, const Eigen::MatrixXd& features) {
  Eigen::VectorXd probs(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    double score = model.base_score;
    for (const auto& tree : model.trees) {
      score += model.learning_rate * tree.predict_row(features, i);
    }
    probs(i) = sigmoid(score);
  }
  return probs;
}

}  // namespace rgauge
