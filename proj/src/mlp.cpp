#include "rgauge/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rgauge/rng.hpp"

namespace rgauge {

std::size_t MlpParams::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    count += static_cast<std::size_t>(weights[l].size()) +
             static_cast<std::size_t>(biases[l].size());
  }
  return count;
}

Eigen::VectorXd MlpParams::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index j = 0; j < weights[l].size(); ++j) flat(pos++) = weights[l].data()[j];
    for (Eigen::Index j = 0; j < biases[l].size(); ++j) flat(pos++) = biases[l](j);
  }
  return flat;
}

void MlpParams::assign_from(const Eigen::VectorXd& flat) {
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index j = 0; j < weights[l].size(); ++j) weights[l].data()[j] = flat(pos++);
    for (Eigen::Index j = 0; j < biases[l].size(); ++j) biases[l](j) = flat(pos++);
  }
}

MlpParams init_mlp(int input_dim, const std::vector<int>& hidden, std::uint64_t seed) {
  if (input_dim < 1) throw std::invalid_argument("mlp: input dimension must be >= 1");
  if (hidden.empty()) throw std::invalid_argument("mlp: at least one hidden layer required");
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("mlp: hidden widths must be >= 1");
  }
  std::vector<int> widths;
  widths.push_back(input_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(1);

  Rng rng(derive_seed(seed, 0x6d6c70));  // "mlp" stream
  MlpParams params;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    }
    params.weights.push_back(std::move(w));
    params.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return params;
}

namespace {

inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

double mlp_loss_and_gradient(const MlpParams& params, const Eigen::MatrixXd& features,
                             const Eigen::VectorXd& labels, double l2, MlpParams* grad) {
  const Eigen::Index n = features.rows();
  if (n == 0) throw std::invalid_argument("mlp: empty batch");
  const std::size_t layers = params.weights.size();

  // Forward. activations[l] holds the input to layer l (columns = samples).
  std::vector<Eigen::MatrixXd> activations(layers + 1);
  activations[0] = features.transpose();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = params.weights[l] * activations[l];
    z.colwise() += params.biases[l];
    if (l + 1 < layers) z = z.cwiseMax(0.0);  // ReLU on hidden layers
    activations[l + 1] = std::move(z);
  }
  const Eigen::RowVectorXd logits = activations[layers].row(0);

  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    loss += softplus(logits(i)) - labels(i) * logits(i);
  }
  loss /= static_cast<double>(n);
  for (const auto& w : params.weights) loss += 0.5 * l2 * w.squaredNorm();

  if (grad != nullptr) {
    grad->weights.assign(layers, {});
    grad->biases.assign(layers, {});
    // delta: dLoss/d(pre-activation of current layer), columns = samples.
    Eigen::MatrixXd delta(1, n);
    for (Eigen::Index i = 0; i < n; ++i) delta(0, i) = (sigmoid(logits(i)) - labels(i));
    delta /= static_cast<double>(n);
    for (std::size_t l = layers; l-- > 0;) {
      grad->weights[l] = delta * activations[l].transpose() + l2 * params.weights[l];
      grad->biases[l] = delta.rowwise().sum();
      if (l > 0) {
        Eigen::MatrixXd back = params.weights[l].transpose() * delta;
        // ReLU mask from the stored post-activation values.
        delta = back.cwiseProduct(
            (activations[l].array() > 0.0).cast<double>().matrix());
      }
    }
  }
  return loss;
}

MlpModel fit_mlp(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 const MlpConfig& config) {
  const Eigen::Index n = features.rows();
  if (n == 0 || static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("mlp: labels must match feature rows");
  }
  if (config.learning_rate <= 0.0 || config.epochs < 0 || config.batch_size < 1) {
    throw std::invalid_argument("mlp: invalid training configuration");
  }

  MlpModel model;
  model.config = config;
  model.params = init_mlp(static_cast<int>(features.cols()), config.hidden, config.seed);

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = static_cast<double>(labels[i]);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(config.seed, 0x73687566));  // "shuf" stream

  MlpParams grad;
  double last_loss = mlp_loss_and_gradient(model.params, features, y, config.l2);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the seeded engine.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index count = std::min<Eigen::Index>(config.batch_size, n - start);
      Eigen::MatrixXd xb(count, features.cols());
      Eigen::VectorXd yb(count);
      for (Eigen::Index i = 0; i < count; ++i) {
        xb.row(i) = features.row(order[static_cast<std::size_t>(start + i)]);
        yb(i) = y(order[static_cast<std::size_t>(start + i)]);
      }
      const double loss = mlp_loss_and_gradient(model.params, xb, yb, config.l2, &grad);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("mlp: training diverged (non-finite loss); lower the learning rate");
      }
      for (std::size_t l = 0; l < model.params.weights.size(); ++l) {
        model.params.weights[l] -= config.learning_rate * grad.weights[l];
        model.params.biases[l] -= config.learning_rate * grad.biases[l];
      }
      last_loss = loss;
    }
  }
  model.final_loss = last_loss;
  return model;
}

Eigen::VectorXd mlp_predict(const MlpParams& params, const Eigen::MatrixXd& features) {
  if (features.cols() != params.weights.front().cols()) {
    throw std::invalid_argument("mlp: feature count mismatch");
  }
  Eigen::MatrixXd activation = features.transpose();
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    Eigen::MatrixXd z = params.weights[l] * activation;
    z.colwise() += params.biases[l];
    if (l + 1 < params.weights.size()) z = z.cwiseMax(0.0);
    activation = std::move(z);
  }
  Eigen::VectorXd probs(features.rows());
  for (Eigen::Index i = 0; i < probs.size(); ++i) probs(i) = sigmoid(activation(0, i));
  return probs;
}

}  // namespace rgauge
