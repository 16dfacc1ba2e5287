#pragma once

// The capacity ladder: expert/extended logistic regression, gradient-boosted
// trees, and shallow/deep MLPs, all trained on one environment with frozen
// train-environment standardization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgauge/dataset.hpp"
#include "rgauge/gbm.hpp"
#include "rgauge/logistic.hpp"
#include "rgauge/mlp.hpp"

namespace rgauge {

enum class Rung { ExpertLR, ExtendedLR, GBM, ShallowMLP, DeepMLP };
const char* to_string(Rung rung);
Rung rung_from_string(const std::string& name);

struct Hyperparams {
  double l2 = 1e-4;
  // GBM
  int estimators = 200;
  int max_depth = 3;
  double gbm_learning_rate = 0.1;
  // MLP
  std::vector<int> hidden;
  double learning_rate = 0.05;
  int epochs = 100;
  int batch_size = 256;
  std::uint64_t seed = 42;
};

struct ModelSpec {
  Rung rung = Rung::ExpertLR;
  std::vector<std::string> feature_subset;  // empty = all columns
  Hyperparams hp;

  /// Rung defaults: GBM 200 trees depth 3, shallow MLP one hidden layer of
  /// 32, deep MLP hidden layers 128 and 64.
  static ModelSpec defaults(Rung rung);

  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& doc);
};

struct FittedModel {
  ModelSpec spec;
  Env training_env = Env::A;
  std::vector<std::string> schema;        // dataset feature names at train time
  std::vector<Eigen::Index> columns;      // model columns within the schema
  Standardizer standardizer;              // fitted on training env, model columns

  std::optional<LogisticModel> logistic;
  std::optional<MlpModel> mlp;
  std::optional<GbmModel> gbm;

  /// P(y = 1) per row; `features` must follow the training schema. The
  /// frozen standardizer is applied internally.
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& features) const;

  nlohmann::json to_json() const;
  static FittedModel from_json(const nlohmann::json& doc);
};

FittedModel train(const TabularDataset& data, Env env, const ModelSpec& spec);

FittedModel train_logistic(const TabularDataset& data, Env env,
                           const std::vector<std::string>& feature_subset, double l2,
                           std::uint64_t seed = 42);

FittedModel train_mlp(const TabularDataset& data, Env env, const std::vector<int>& layers,
                      double l2, double learning_rate, int epochs, int batch_size,
                      std::uint64_t seed);

FittedModel train_gbm(const TabularDataset& data, Env env, int estimators, int depth,
                      double learning_rate, std::uint64_t seed = 42);

void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

}  // namespace rgauge
