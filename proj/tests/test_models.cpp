#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rgauge/evaluation.hpp"
#include "rgauge/models.hpp"
#include "rgauge/rng.hpp"
#include "rgauge/simulate.hpp"
#include "support.hpp"

using namespace rgauge;

namespace {

TabularDataset make_dataset(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                            Env env = Env::A) {
  TabularDataset data;
  data.features = features;
  data.labels = labels;
  data.env.assign(labels.size(), env);
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    data.feature_names.push_back("f" + std::to_string(j));
  }
  return data;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

// ---------- logistic ----------

TEST_CASE("logistic recovers the separating sign on two points") {
  Eigen::MatrixXd x(2, 1);
  x << -1.0, 1.0;
  const LogisticModel model = fit_logistic(x, {0, 1}, 1e-6);
  CHECK(model.weights(0) > 0.0);
  const Eigen::VectorXd p = logistic_predict(model, x);
  CHECK(p(0) < 0.5);
  CHECK(p(1) > 0.5);
}

TEST_CASE("logistic learns nothing from label-independent features") {
  Rng rng(71);
  const int n = 5000, p = 6;
  Eigen::MatrixXd x(n, p);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  const LogisticModel model = fit_logistic(x, y, 1e-4);
  for (int j = 0; j < p; ++j) CHECK(std::fabs(model.weights(j)) < 0.1);
}

TEST_CASE("logistic recovers known generative weights") {
  Rng rng(72);
  const int n = 10000, p = 4;
  Eigen::VectorXd truth(p);
  truth << 1.2, -0.7, 0.4, 2.0;
  Eigen::MatrixXd x(n, p);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    const double logit = x.row(i).dot(truth);
    y[static_cast<std::size_t>(i)] = rng.bernoulli(1.0 / (1.0 + std::exp(-logit))) ? 1 : 0;
  }
  const LogisticModel model = fit_logistic(x, y, 1e-4);
  for (int j = 0; j < p; ++j) {
    CHECK(model.weights(j) == doctest::Approx(truth(j)).epsilon(0.10));
  }
}

TEST_CASE("stronger L2 never grows the logistic weight norm") {
  Rng rng(73);
  const int n = 400, p = 5;
  Eigen::MatrixXd x(n, p);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(x(i, 0) > 0.0 ? 0.8 : 0.2) ? 1 : 0;
  }
  double previous = std::numeric_limits<double>::infinity();
  for (double l2 : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    const double norm = fit_logistic(x, y, l2).weights.norm();
    CHECK(norm <= previous + 1e-9);
    previous = norm;
  }
}

TEST_CASE("perfect separation without L2 reports non-convergence but returns weights") {
  Eigen::MatrixXd x(4, 1);
  x << -2.0, -1.0, 1.0, 2.0;
  const LogisticModel model = fit_logistic(x, {0, 0, 1, 1}, 0.0, 500);
  CHECK_FALSE(model.converged);
  CHECK(model.weights(0) > 0.0);
}

TEST_CASE("logistic training is deterministic") {
  Rng rng(74);
  Eigen::MatrixXd x(200, 3);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  const LogisticModel a = fit_logistic(x, y, 1e-3);
  const LogisticModel b = fit_logistic(x, y, 1e-3);
  CHECK(a.weights == b.weights);
  CHECK(a.intercept == b.intercept);
}

// ---------- mlp ----------

TEST_CASE("mlp solves XOR") {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  x = 2.0 * x.array() - 1.0;
  const std::vector<int> y = {0, 1, 1, 0};
  MlpConfig config;
  config.hidden = {8};
  config.l2 = 0.0;
  config.learning_rate = 0.5;
  config.epochs = 4000;
  config.batch_size = 4;
  config.seed = 3;
  const MlpModel model = fit_mlp(x, y, config);
  const Eigen::VectorXd p = mlp_predict(model.params, x);
  for (int i = 0; i < 4; ++i) {
    CHECK((p(i) >= 0.5 ? 1 : 0) == y[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("untrained mlp carries no label information") {
  Rng rng(75);
  const int n = 2000;
  Eigen::MatrixXd x(n, 5);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 5; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = i % 2;
  }
  MlpConfig config;
  config.hidden = {16};
  config.epochs = 0;
  config.seed = 4;
  const MlpModel model = fit_mlp(x, y, config);
  const Eigen::VectorXd p = mlp_predict(model.params, x);
  // Individual outputs scatter with the He-uniform draw, but they center on
  // 0.5 and carry no label signal.
  CHECK(p.mean() == doctest::Approx(0.5).epsilon(0.3));
  CHECK(auroc(to_vec(p), y) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("mlp matches or beats logistic on separable training data") {
  Rng rng(76);
  const int n = 600;
  Eigen::MatrixXd x(n, 2);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    y[static_cast<std::size_t>(i)] = x(i, 0) + 0.5 * x(i, 1) > 0.0 ? 1 : 0;
  }
  const LogisticModel logit = fit_logistic(x, y, 1e-3);
  MlpConfig config;
  config.hidden = {32};
  config.learning_rate = 0.2;
  config.epochs = 300;
  config.batch_size = 64;
  config.seed = 5;
  const MlpModel mlp = fit_mlp(x, y, config);
  const double auroc_logit = auroc(to_vec(logistic_predict(logit, x)), y);
  const double auroc_mlp = auroc(to_vec(mlp_predict(mlp.params, x)), y);
  CHECK(auroc_mlp >= auroc_logit - 1e-9);
}

TEST_CASE("mlp analytic gradients match central finite differences") {
  Rng rng(77);
  const int n = 24;
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  MlpParams params = init_mlp(3, {5, 4}, 9);
  MlpParams grad;
  mlp_loss_and_gradient(params, x, y, 0.01, &grad);
  const Eigen::VectorXd flat = params.flatten();
  const Eigen::VectorXd analytic = grad.flatten();
  Rng pick(19);
  for (int check = 0; check < 60; ++check) {
    const Eigen::Index k =
        static_cast<Eigen::Index>(pick.below(static_cast<std::uint64_t>(flat.size())));
    const double h = 1e-5 * std::max(1.0, std::fabs(flat(k)));
    Eigen::VectorXd plus = flat, minus = flat;
    plus(k) += h;
    minus(k) -= h;
    MlpParams probe = params;
    probe.assign_from(plus);
    const double up = mlp_loss_and_gradient(probe, x, y, 0.01);
    probe.assign_from(minus);
    const double down = mlp_loss_and_gradient(probe, x, y, 0.01);
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({1e-8, std::fabs(numeric), std::fabs(analytic(k))});
    CHECK(std::fabs(numeric - analytic(k)) / scale < 1e-4);
  }
}

TEST_CASE("mlp divergence raises an actionable error") {
  Rng rng(78);
  Eigen::MatrixXd x(64, 2);
  std::vector<int> y(64);
  for (int i = 0; i < 64; ++i) {
    x(i, 0) = 1e3 * rng.normal();
    x(i, 1) = 1e3 * rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  MlpConfig config;
  config.hidden = {8};
  config.learning_rate = 1e9;
  config.epochs = 50;
  config.batch_size = 16;
  CHECK_THROWS_WITH_AS(fit_mlp(x, y, config), doctest::Contains("lower the learning rate"),
                       std::runtime_error);
}

TEST_CASE("mlp training is deterministic under a fixed seed") {
  Rng rng(79);
  Eigen::MatrixXd x(128, 3);
  std::vector<int> y(128);
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.6) ? 1 : 0;
  }
  MlpConfig config;
  config.hidden = {8};
  config.epochs = 20;
  config.batch_size = 32;
  config.seed = 11;
  const MlpModel a = fit_mlp(x, y, config);
  const MlpModel b = fit_mlp(x, y, config);
  for (std::size_t l = 0; l < a.params.weights.size(); ++l) {
    CHECK(a.params.weights[l] == b.params.weights[l]);
    CHECK(a.params.biases[l] == b.params.biases[l]);
  }
}

// ---------- gbm ----------

TEST_CASE("a single stump fits a one-dimensional step function") {
  Eigen::MatrixXd x(8, 1);
  std::vector<int> y(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = i;
    y[static_cast<std::size_t>(i)] = i >= 4 ? 1 : 0;
  }
  GbmConfig config;
  config.estimators = 1;
  config.max_depth = 1;
  const GbmModel model = fit_gbm(x, y, config);
  const Eigen::VectorXd p = gbm_predict(model, x);
  for (int i = 0; i < 8; ++i) {
    CHECK((p(i) >= 0.5 ? 1 : 0) == y[static_cast<std::size_t>(i)]);
  }
  // A stump yields exactly two distinct probability levels.
  CHECK(p(0) == p(3));
  CHECK(p(4) == p(7));
  CHECK(p(0) != p(4));
}

TEST_CASE("gbm on pure-noise labels carries no held-out signal") {
  Rng rng(80);
  const int n = 5000;
  Eigen::MatrixXd x(n, 4);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  Eigen::MatrixXd train_x = x.topRows(2500);
  Eigen::MatrixXd test_x = x.bottomRows(2500);
  std::vector<int> train_y(y.begin(), y.begin() + 2500);
  std::vector<int> test_y(y.begin() + 2500, y.end());
  GbmConfig config;
  config.estimators = 60;
  config.max_depth = 3;
  const GbmModel model = fit_gbm(train_x, train_y, config);
  const double score = auroc(to_vec(gbm_predict(model, test_x)), test_y);
  CHECK(score == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("gbm predictions are monotone for a monotone signal") {
  Rng rng(81);
  const int n = 800;
  Eigen::MatrixXd x(n, 1);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = rng.uniform(-3.0, 3.0);
    y[static_cast<std::size_t>(i)] = rng.bernoulli(1.0 / (1.0 + std::exp(-2.0 * x(i, 0)))) ? 1 : 0;
  }
  // Stump ensemble: every round adds a non-decreasing step function, so the
  // boosted score is monotone up to tree-resolution plateaus.
  GbmConfig config;
  config.estimators = 60;
  config.max_depth = 1;
  const GbmModel model = fit_gbm(x, y, config);

  // Probe the well-populated range; the extreme tails are too sparse for
  // stable leaf estimates.
  Eigen::MatrixXd grid(51, 1);
  for (int i = 0; i <= 50; ++i) grid(i, 0) = -2.5 + 0.1 * i;
  const Eigen::VectorXd p = gbm_predict(model, grid);
  std::vector<double> feature, probs;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i > 0) {
      const double floor_value = p(i - 1) - 0.02;
      CHECK(p(i) >= floor_value);
    }
    feature.push_back(grid(i, 0));
    probs.push_back(p(i));
  }
  CHECK(testsupport::spearman(feature, probs) > 0.98);
}

TEST_CASE("gbm training loss never increases across rounds") {
  Rng rng(82);
  const int n = 500;
  Eigen::MatrixXd x(n, 3);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] =
        rng.bernoulli(1.0 / (1.0 + std::exp(-x(i, 0) + 0.5 * x(i, 1)))) ? 1 : 0;
  }
  GbmConfig config;
  config.estimators = 80;
  const GbmModel model = fit_gbm(x, y, config);
  for (std::size_t r = 1; r < model.train_losses.size(); ++r) {
    CHECK(model.train_losses[r] <= model.train_losses[r - 1] + 1e-12);
  }
}

TEST_CASE("gbm rejects single-class labels and is deterministic") {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  CHECK_THROWS_AS(fit_gbm(x, {1, 1, 1, 1}, {}), std::invalid_argument);

  Rng rng(83);
  Eigen::MatrixXd data(200, 2);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) {
    data(i, 0) = rng.normal();
    data(i, 1) = rng.normal();
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  GbmConfig config;
  config.estimators = 10;
  const GbmModel a = fit_gbm(data, y, config);
  const GbmModel b = fit_gbm(data, y, config);
  const Eigen::VectorXd pa = gbm_predict(a, data);
  const Eigen::VectorXd pb = gbm_predict(b, data);
  CHECK(pa == pb);
}

// ---------- ladder wrapper ----------

TEST_CASE("predict_proba definitional cases") {
  Eigen::MatrixXd x(3, 2);
  x << 0.0, 1.0, 2.0, -1.0, -0.5, 0.25;
  TabularDataset data = make_dataset(x, {0, 1, 0});

  FittedModel model = train_logistic(data, Env::A, {}, 1e-3);
  // Zero weights give 0.5 everywhere.
  model.logistic->weights.setZero();
  model.logistic->intercept = 0.0;
  Eigen::VectorXd p = model.predict_proba(x);
  for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(p(i) == 0.5);

  // Known weights on known (standardized) input give sigmoid(w . z) exactly.
  model.logistic->weights << 1.0, -2.0;
  const Eigen::MatrixXd z = model.standardizer.transform(x);
  p = model.predict_proba(x);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double logit = z(i, 0) * 1.0 + z(i, 1) * -2.0;
    CHECK(p(i) == doctest::Approx(1.0 / (1.0 + std::exp(-logit))).epsilon(1e-12));
  }

  Eigen::MatrixXd wrong(2, 3);
  wrong.setZero();
  CHECK_THROWS_AS(model.predict_proba(wrong), std::invalid_argument);
}

TEST_CASE("the standardizer is frozen to the training environment") {
  SimConfig config;
  config.n_per_env = 300;
  config.max_spurious = 4;
  const TabularDataset pooled = generate_pooled(config, 4, 0);
  const FittedModel model = train_logistic(pooled, Env::A, {}, 1e-3);
  CHECK(model.standardizer.fitted_on == Env::A);
  // The stored means are env-A means, not pooled means.
  const Eigen::MatrixXd env_a = pooled.env_features(Env::A);
  for (Eigen::Index j = 0; j < env_a.cols(); ++j) {
    CHECK(model.standardizer.means(j) == doctest::Approx(env_a.col(j).mean()).epsilon(1e-12));
  }
}

TEST_CASE("feature subsets select named columns") {
  Eigen::MatrixXd x(6, 3);
  Rng rng(84);
  std::vector<int> y(6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
    y[static_cast<std::size_t>(i)] = i % 2;
  }
  TabularDataset data = make_dataset(x, y);
  const FittedModel model = train_logistic(data, Env::A, {"f2", "f0"}, 1e-2);
  CHECK(model.columns == std::vector<Eigen::Index>{2, 0});
  CHECK(model.logistic->weights.size() == 2);
  CHECK_THROWS_AS(train_logistic(data, Env::A, {"missing"}, 1e-2), std::invalid_argument);
}

TEST_CASE("rung defaults match the ladder description") {
  CHECK(ModelSpec::defaults(Rung::GBM).hp.estimators == 200);
  CHECK(ModelSpec::defaults(Rung::GBM).hp.max_depth == 3);
  CHECK(ModelSpec::defaults(Rung::ShallowMLP).hp.hidden == std::vector<int>{32});
  CHECK(ModelSpec::defaults(Rung::DeepMLP).hp.hidden == std::vector<int>{128, 64});
}

TEST_CASE("model save/load round trip preserves predictions exactly") {
  SimConfig config;
  config.n_per_env = 200;
  config.max_spurious = 4;
  const TabularDataset pooled = generate_pooled(config, 4, 1);

  for (Rung rung : {Rung::ExpertLR, Rung::GBM, Rung::ShallowMLP}) {
    ModelSpec spec = ModelSpec::defaults(rung);
    spec.hp.epochs = 5;
    spec.hp.estimators = 5;
    const FittedModel model = train(pooled, Env::A, spec);
    testsupport::TempFile file(std::string("model_") + to_string(rung) + ".json");
    save_model(model, file.path);
    const FittedModel back = load_model(file.path);
    const Eigen::VectorXd p0 = model.predict_proba(pooled.features);
    const Eigen::VectorXd p1 = back.predict_proba(pooled.features);
    CHECK(p0 == p1);
    CHECK(back.spec.rung == rung);
  }
}
