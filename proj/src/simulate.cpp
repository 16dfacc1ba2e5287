#include "rgauge/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "rgauge/logistic.hpp"
#include "rgauge/rng.hpp"

namespace rgauge {

void SimConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("sim: rho must lie in [0, 1]");
  if (n_invariant < 1) throw std::invalid_argument("sim: n_invariant must be >= 1");
  if (max_spurious < 1) throw std::invalid_argument("sim: max_spurious must be >= 1");
  if (n_per_env < 1) throw std::invalid_argument("sim: n_per_env must be >= 1");
  if (repetitions < 1) throw std::invalid_argument("sim: repetitions must be >= 1");
  if (noise_sd < 0.0) throw std::invalid_argument("sim: noise_sd must be >= 0");
  if (invariant_scale <= 0.0) throw std::invalid_argument("sim: invariant_scale must be > 0");
}

namespace {

std::vector<std::string> sim_feature_names(int n_invariant, int capacity) {
  std::vector<std::string> names;
  for (int j = 0; j < n_invariant; ++j) names.push_back("inv_" + std::to_string(j));
  for (int j = 0; j < capacity; ++j) names.push_back("sp_" + std::to_string(j));
  return names;
}

TabularDataset draw_env(const SimConfig& config, int capacity, Env env_tag,
                        const std::vector<double>& signs, Rng& rng) {
  const int p = config.n_invariant + capacity;
  TabularDataset data;
  data.feature_names = sim_feature_names(config.n_invariant, capacity);
  data.features.resize(config.n_per_env, p);
  data.labels.resize(static_cast<std::size_t>(config.n_per_env));
  data.env.assign(static_cast<std::size_t>(config.n_per_env), env_tag);

  const double unit = 1.0 / std::sqrt(static_cast<double>(config.n_invariant));
  for (int i = 0; i < config.n_per_env; ++i) {
    double score = 0.0;
    for (int j = 0; j < config.n_invariant; ++j) {
      const double x = rng.normal();
      data.features(i, j) = x;
      score += unit * x;  // standardized invariant risk score z ~ N(0,1)
    }
    const double logit = config.invariant_scale * score;
    const double prob = 1.0 / (1.0 + std::exp(-logit));
    const int y = rng.bernoulli(prob) ? 1 : 0;
    data.labels[static_cast<std::size_t>(i)] = y;

    const double carrier =
        config.coupling == SpuriousCoupling::Score ? score : (2.0 * y - 1.0);
    for (int j = 0; j < capacity; ++j) {
      data.features(i, config.n_invariant + j) =
          signs[static_cast<std::size_t>(j)] * config.spurious_strength * carrier +
          config.noise_sd * rng.normal();
    }
  }
  return data;
}

}  // namespace

ShiftPair generate_shifting(const SimConfig& config, int capacity, int repetition) {
  config.validate();
  if (capacity < 0 || capacity > config.max_spurious) {
    throw std::invalid_argument("sim: capacity must lie in [0, max_spurious]");
  }
  if (repetition < 0) throw std::invalid_argument("sim: repetition must be >= 0");

  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(repetition)));

  // Flip pattern for the OOD environment, drawn for every potential spurious
  // feature so capacity sweeps within a repetition share a common prefix.
  std::vector<double> ood_signs(static_cast<std::size_t>(config.max_spurious));
  for (auto& s : ood_signs) s = rng.bernoulli(config.rho) ? 1.0 : -1.0;
  const std::vector<double> train_signs(static_cast<std::size_t>(config.max_spurious), 1.0);

  ShiftPair pair;
  pair.train = draw_env(config, capacity, Env::A, train_signs, rng);
  pair.ood = draw_env(config, capacity, Env::C, ood_signs, rng);
  return pair;
}

TabularDataset generate_pooled(const SimConfig& config, int capacity, int repetition) {
  ShiftPair pair = generate_shifting(config, capacity, repetition);
  TabularDataset pooled;
  pooled.feature_names = pair.train.feature_names;
  const Eigen::Index n_train = pair.train.rows();
  const Eigen::Index n_ood = pair.ood.rows();
  pooled.features.resize(n_train + n_ood, pair.train.cols());
  pooled.features.topRows(n_train) = pair.train.features;
  pooled.features.bottomRows(n_ood) = pair.ood.features;
  pooled.labels = pair.train.labels;
  pooled.labels.insert(pooled.labels.end(), pair.ood.labels.begin(), pair.ood.labels.end());
  pooled.env = pair.train.env;
  pooled.env.insert(pooled.env.end(), pair.ood.env.begin(), pair.ood.env.end());
  return pooled;
}

namespace {

double accuracy(const Eigen::VectorXd& probs, const std::vector<int>& labels) {
  long long correct = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const int pred = probs(i) >= 0.5 ? 1 : 0;
    if (pred == labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(probs.size());
}

}  // namespace

std::vector<Fig2Row> simulate_fig2(const SimConfig& config, const std::vector<int>& capacities) {
  config.validate();
  std::vector<Fig2Row> rows;
  for (int capacity : capacities) {
    for (int rep = 0; rep < config.repetitions; ++rep) {
      ShiftPair pair = generate_shifting(config, capacity, rep);

      TabularDataset train_only = pair.train;
      Standardizer st = fit_standardizer(train_only, Env::A);
      const Eigen::MatrixXd train_x = st.transform(pair.train.features);
      const Eigen::MatrixXd ood_x = st.transform(pair.ood.features);

      LogisticModel probe = fit_logistic(train_x, pair.train.labels, kFig2LogisticL2);
      Fig2Row row;
      row.capacity = capacity;
      row.repetition = rep;
      row.id_accuracy = accuracy(logistic_predict(probe, train_x), pair.train.labels);
      row.ood_accuracy = accuracy(logistic_predict(probe, ood_x), pair.ood.labels);
      row.robust_accuracy = std::min(row.id_accuracy, row.ood_accuracy);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace rgauge
