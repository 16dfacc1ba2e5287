#include "rgauge/models.hpp"

#include <fstream>
#include <stdexcept>

namespace rgauge {

const char* to_string(Rung rung) {
  switch (rung) {
    case Rung::ExpertLR: return "expert_lr";
    case Rung::ExtendedLR: return "extended_lr";
    case Rung::GBM: return "gbm";
    case Rung::ShallowMLP: return "shallow_mlp";
    case Rung::DeepMLP: return "deep_mlp";
  }
  return "?";
}

Rung rung_from_string(const std::string& name) {
  for (Rung rung : {Rung::ExpertLR, Rung::ExtendedLR, Rung::GBM, Rung::ShallowMLP, Rung::DeepMLP}) {
    if (name == to_string(rung)) return rung;
  }
  throw std::invalid_argument("unknown model rung: '" + name + "'");
}

ModelSpec ModelSpec::defaults(Rung rung) {
  ModelSpec spec;
  spec.rung = rung;
  switch (rung) {
    case Rung::ExpertLR:
    case Rung::ExtendedLR:
      break;
    case Rung::GBM:
      spec.hp.estimators = 200;
      spec.hp.max_depth = 3;
      break;
    case Rung::ShallowMLP:
      spec.hp.hidden = {32};
      break;
    case Rung::DeepMLP:
      spec.hp.hidden = {128, 64};
      break;
  }
  return spec;
}

nlohmann::json ModelSpec::to_json() const {
  return {{"rung", to_string(rung)},
          {"feature_subset", feature_subset},
          {"hyperparams",
           {{"l2", hp.l2},
            {"estimators", hp.estimators},
            {"max_depth", hp.max_depth},
            {"gbm_learning_rate", hp.gbm_learning_rate},
            {"hidden", hp.hidden},
            {"learning_rate", hp.learning_rate},
            {"epochs", hp.epochs},
            {"batch_size", hp.batch_size},
            {"seed", hp.seed}}}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json& doc) {
  ModelSpec spec;
  spec.rung = rung_from_string(doc.at("rung").get<std::string>());
  spec.feature_subset = doc.value("feature_subset", std::vector<std::string>{});
  const auto& hp = doc.at("hyperparams");
  spec.hp.l2 = hp.value("l2", spec.hp.l2);
  spec.hp.estimators = hp.value("estimators", spec.hp.estimators);
  spec.hp.max_depth = hp.value("max_depth", spec.hp.max_depth);
  spec.hp.gbm_learning_rate = hp.value("gbm_learning_rate", spec.hp.gbm_learning_rate);
  spec.hp.hidden = hp.value("hidden", spec.hp.hidden);
  spec.hp.learning_rate = hp.value("learning_rate", spec.hp.learning_rate);
  spec.hp.epochs = hp.value("epochs", spec.hp.epochs);
  spec.hp.batch_size = hp.value("batch_size", spec.hp.batch_size);
  spec.hp.seed = hp.value("seed", spec.hp.seed);
  return spec;
}

namespace {

// Columns for the model spec's feature subset (all columns when empty) plus
// the standardized training matrix for one environment.
struct Prepared {
  std::vector<Eigen::Index> columns;
  Standardizer standardizer;
  Eigen::MatrixXd train_features;  // standardized, env rows x subset columns
  std::vector<int> train_labels;
};

Prepared prepare(const TabularDataset& data, Env env, const ModelSpec& spec) {
  Prepared prep;
  if (spec.feature_subset.empty()) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) prep.columns.push_back(j);
  } else {
    for (const auto& name : spec.feature_subset) prep.columns.push_back(data.feature_index(name));
  }
  if (prep.columns.empty()) throw std::invalid_argument("train: empty feature subset");

  TabularDataset narrowed;
  narrowed.labels = data.labels;
  narrowed.env = data.env;
  narrowed.features.resize(data.rows(), static_cast<Eigen::Index>(prep.columns.size()));
  for (std::size_t j = 0; j < prep.columns.size(); ++j) {
    narrowed.features.col(static_cast<Eigen::Index>(j)) = data.features.col(prep.columns[j]);
  }
  prep.standardizer = fit_standardizer(narrowed, env);
  prep.train_features = prep.standardizer.transform(narrowed.env_features(env));
  prep.train_labels = narrowed.env_labels(env);
  return prep;
}

}  // namespace

FittedModel train(const TabularDataset& data, Env env, const ModelSpec& spec) {
  Prepared prep = prepare(data, env, spec);
  FittedModel model;
  model.spec = spec;
  model.training_env = env;
  model.schema = data.feature_names;
  model.columns = std::move(prep.columns);
  model.standardizer = std::move(prep.standardizer);

  switch (spec.rung) {
    case Rung::ExpertLR:
    case Rung::ExtendedLR:
      model.logistic = fit_logistic(prep.train_features, prep.train_labels, spec.hp.l2);
      break;
    case Rung::GBM: {
      GbmConfig config;
      config.estimators = spec.hp.estimators;
      config.max_depth = spec.hp.max_depth;
      config.learning_rate = spec.hp.gbm_learning_rate;
      model.gbm = fit_gbm(prep.train_features, prep.train_labels, config);
      break;
    }
    case Rung::ShallowMLP:
    case Rung::DeepMLP: {
      MlpConfig config;
      config.hidden = spec.hp.hidden.empty() ? ModelSpec::defaults(spec.rung).hp.hidden
                                             : spec.hp.hidden;
      config.l2 = spec.hp.l2;
      config.learning_rate = spec.hp.learning_rate;
      config.epochs = spec.hp.epochs;
      config.batch_size = spec.hp.batch_size;
      config.seed = spec.hp.seed;
      model.mlp = fit_mlp(prep.train_features, prep.train_labels, config);
      break;
    }
  }
  return model;
}

FittedModel train_logistic(const TabularDataset& data, Env env,
                           const std::vector<std::string>& feature_subset, double l2,
                           std::uint64_t seed) {
  ModelSpec spec = ModelSpec::defaults(Rung::ExpertLR);
  spec.feature_subset = feature_subset;
  spec.hp.l2 = l2;
  spec.hp.seed = seed;
  return train(data, env, spec);
}

FittedModel train_mlp(const TabularDataset& data, Env env, const std::vector<int>& layers,
                      double l2, double learning_rate, int epochs, int batch_size,
                      std::uint64_t seed) {
  ModelSpec spec = ModelSpec::defaults(layers.size() > 1 ? Rung::DeepMLP : Rung::ShallowMLP);
  spec.hp.hidden = layers;
  spec.hp.l2 = l2;
  spec.hp.learning_rate = learning_rate;
  spec.hp.epochs = epochs;
  spec.hp.batch_size = batch_size;
  spec.hp.seed = seed;
  return train(data, env, spec);
}

FittedModel train_gbm(const TabularDataset& data, Env env, int estimators, int depth,
                      double learning_rate, std::uint64_t seed) {
  ModelSpec spec = ModelSpec::defaults(Rung::GBM);
  spec.hp.estimators = estimators;
  spec.hp.max_depth = depth;
  spec.hp.gbm_learning_rate = learning_rate;
  spec.hp.seed = seed;
  return train(data, env, spec);
}

Eigen::VectorXd FittedModel::predict_proba(const Eigen::MatrixXd& features) const {
  if (features.cols() != static_cast<Eigen::Index>(schema.size())) {
    throw std::invalid_argument("predict: expected " + std::to_string(schema.size()) +
                                " feature columns, got " + std::to_string(features.cols()));
  }
  Eigen::MatrixXd selected(features.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    selected.col(static_cast<Eigen::Index>(j)) = features.col(columns[j]);
  }
  const Eigen::MatrixXd standardized = standardizer.transform(selected);
  if (logistic) return logistic_predict(*logistic, standardized);
  if (mlp) return mlp_predict(mlp->params, standardized);
  if (gbm) return gbm_predict(*gbm, standardized);
  throw std::logic_error("predict: model has no fitted payload");
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

nlohmann::json FittedModel::to_json() const {
  nlohmann::json doc;
  doc["spec"] = spec.to_json();
  doc["training_env"] = to_string(training_env);
  doc["schema"] = schema;
  std::vector<long long> cols;
  for (auto c : columns) cols.push_back(static_cast<long long>(c));
  doc["columns"] = cols;
  doc["standardizer"] = {{"means", vector_to_json(standardizer.means)},
                         {"scales", vector_to_json(standardizer.scales)},
                         {"constant_columns", standardizer.constant_columns},
                         {"fitted_on", to_string(standardizer.fitted_on)}};
  if (logistic) {
    doc["logistic"] = {{"weights", vector_to_json(logistic->weights)},
                       {"intercept", logistic->intercept},
                       {"converged", logistic->converged},
                       {"iterations", logistic->iterations}};
  }
  if (mlp) {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < mlp->params.weights.size(); ++l) {
      layers.push_back({{"weights", matrix_to_json(mlp->params.weights[l])},
                        {"biases", vector_to_json(mlp->params.biases[l])}});
    }
    doc["mlp"] = {{"layers", layers}, {"final_loss", mlp->final_loss}};
  }
  if (gbm) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : gbm->trees) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& node : tree.nodes) {
        nodes.push_back({{"feature", node.feature},
                         {"threshold", node.threshold},
                         {"left", node.left},
                         {"right", node.right},
                         {"value", node.value}});
      }
      trees.push_back(std::move(nodes));
    }
    doc["gbm"] = {{"base_score", gbm->base_score},
                  {"learning_rate", gbm->learning_rate},
                  {"trees", trees}};
  }
  return doc;
}

FittedModel FittedModel::from_json(const nlohmann::json& doc) {
  FittedModel model;
  model.spec = ModelSpec::from_json(doc.at("spec"));
  model.training_env = env_from_string(doc.at("training_env").get<std::string>());
  model.schema = doc.at("schema").get<std::vector<std::string>>();
  for (const auto& c : doc.at("columns")) model.columns.push_back(c.get<long long>());
  const auto& st = doc.at("standardizer");
  model.standardizer.means = vector_from_json(st.at("means"));
  model.standardizer.scales = vector_from_json(st.at("scales"));
  model.standardizer.constant_columns = st.at("constant_columns").get<std::vector<bool>>();
  model.standardizer.fitted_on = env_from_string(st.at("fitted_on").get<std::string>());
  if (doc.contains("logistic")) {
    LogisticModel lm;
    lm.weights = vector_from_json(doc["logistic"].at("weights"));
    lm.intercept = doc["logistic"].at("intercept").get<double>();
    lm.converged = doc["logistic"].value("converged", true);
    lm.iterations = doc["logistic"].value("iterations", 0);
    model.logistic = std::move(lm);
  }
  if (doc.contains("mlp")) {
    MlpModel mm;
    for (const auto& layer : doc["mlp"].at("layers")) {
      mm.params.weights.push_back(matrix_from_json(layer.at("weights")));
      mm.params.biases.push_back(vector_from_json(layer.at("biases")));
    }
    mm.final_loss = doc["mlp"].value("final_loss", 0.0);
    model.mlp = std::move(mm);
  }
  if (doc.contains("gbm")) {
    GbmModel gm;
    gm.base_score = doc["gbm"].at("base_score").get<double>();
    gm.learning_rate = doc["gbm"].at("learning_rate").get<double>();
    for (const auto& tree_nodes : doc["gbm"].at("trees")) {
      RegressionTree tree;
      for (const auto& nd : tree_nodes) {
        TreeNode node;
        node.feature = nd.at("feature").get<int>();
        node.threshold = nd.at("threshold").get<double>();
        node.left = nd.at("left").get<int>();
        node.right = nd.at("right").get<int>();
        node.value = nd.at("value").get<double>();
        tree.nodes.push_back(node);
      }
      gm.trees.push_back(std::move(tree));
    }
    model.gbm = std::move(gm);
  }
  return model;
}

void save_model(const FittedModel& model, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << model.to_json().dump(2) << '\n';
}

FittedModel load_model(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json doc;
  file >> doc;
  return FittedModel::from_json(doc);
}

}  // namespace rgauge
