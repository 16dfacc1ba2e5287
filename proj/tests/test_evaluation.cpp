#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rgauge/evaluation.hpp"
#include "rgauge/rng.hpp"
#include "support.hpp"

using namespace rgauge;

TEST_CASE("auroc on hand cases") {
  CHECK(auroc({0.9, 0.8, 0.1, 0.2}, {1, 1, 0, 0}) == 1.0);
  CHECK(auroc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == 0.5);
  // Pair counting: (0.5 + 1 + 0 + 0) / 4.
  CHECK(auroc({0.8, 0.2, 0.8, 0.4}, {1, 1, 0, 0}) == doctest::Approx(0.375));
  CHECK_THROWS_WITH_AS(auroc({0.1, 0.2}, {1, 1}), doctest::Contains("AUROC undefined"),
                       std::invalid_argument);
  CHECK_THROWS_AS(auroc({0.1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("auroc equals brute-force pair counting on random tied instances") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(47));
    std::vector<double> scores(static_cast<std::size_t>(n));
    std::vector<int> labels(static_cast<std::size_t>(n));
    bool has_both = false;
    for (int i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i)] =
          std::floor(rng.uniform() * 8.0) / 8.0;  // coarse grid forces ties
      labels[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
    }
    labels[0] = 0;
    labels[1] = 1;
    has_both = true;
    REQUIRE(has_both);
    CHECK(auroc(scores, labels) == testsupport::brute_force_auroc(scores, labels));
  }
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
  Rng rng(43);
  std::vector<double> scores(200);
  std::vector<int> labels(200);
  for (int i = 0; i < 200; ++i) {
    scores[static_cast<std::size_t>(i)] = std::floor(rng.uniform() * 16.0) / 16.0;
    labels[static_cast<std::size_t>(i)] = rng.bernoulli(0.4) ? 1 : 0;
  }
  labels[0] = 0;
  labels[1] = 1;
  const double base = auroc(scores, labels);
  std::vector<double> transformed;
  for (double s : scores) transformed.push_back(std::exp(3.0 * s) - 7.0);
  CHECK(auroc(transformed, labels) == base);
}

TEST_CASE("negating tie-free scores flips auroc") {
  Rng rng(44);
  std::vector<double> scores(150);
  std::vector<int> labels(150);
  for (int i = 0; i < 150; ++i) {
    scores[static_cast<std::size_t>(i)] = rng.uniform();  // ties have probability ~0
    labels[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
  }
  labels[0] = 0;
  labels[1] = 1;
  std::vector<double> negated;
  for (double s : scores) negated.push_back(-s);
  CHECK(auroc(scores, labels) + auroc(negated, labels) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("report bookkeeping from per-environment aurocs") {
  const ShiftReport lr = shift_report_from_aurocs(
      {{Env::A, 0.733}, {Env::B, 0.716}, {Env::C, 0.739}});
  CHECK(lr.robust_auroc == doctest::Approx(0.716).epsilon(1e-12));
  CHECK(lr.delta == doctest::Approx(-0.006).epsilon(1e-9));

  const ShiftReport mlp = shift_report_from_aurocs(
      {{Env::A, 0.954}, {Env::B, 0.740}, {Env::C, 0.760}});
  CHECK(mlp.robust_auroc == doctest::Approx(0.740).epsilon(1e-12));
  CHECK(mlp.delta == doctest::Approx(0.194).epsilon(1e-9));

  // No shift: identical data in all environments.
  const ShiftReport flat = shift_report_from_aurocs(
      {{Env::A, 0.81}, {Env::B, 0.81}, {Env::C, 0.81}});
  CHECK(flat.delta == doctest::Approx(0.0));
  CHECK(flat.robust_auroc == doctest::Approx(0.81));

  // The robust minimum never exceeds any per-environment value.
  for (const auto& [env, value] : mlp.per_env_auroc) CHECK(mlp.robust_auroc <= value);
}

TEST_CASE("shift_report evaluates each environment and flags single-class ones") {
  // Identity passthrough model: one feature, unit weight, no shift in scale.
  FittedModel model;
  model.spec = ModelSpec::defaults(Rung::ExpertLR);
  model.schema = {"x"};
  model.columns = {0};
  model.standardizer.means = Eigen::VectorXd::Zero(1);
  model.standardizer.scales = Eigen::VectorXd::Ones(1);
  model.standardizer.constant_columns = {false};
  LogisticModel logit;
  logit.weights = Eigen::VectorXd::Ones(1);
  logit.intercept = 0.0;
  model.logistic = logit;

  TabularDataset data;
  data.feature_names = {"x"};
  data.features.resize(8, 1);
  data.features << 1, -1, 2, -2,  /* env A: perfectly ranked */
      -1, 1,                      /* env C: anti-ranked */
      5, 6;                       /* env B: single class */
  data.labels = {1, 0, 1, 0, 1, 0, 1, 1};
  data.env = {Env::A, Env::A, Env::A, Env::A, Env::C, Env::C, Env::B, Env::B};

  const ShiftReport report = shift_report(model, data);
  CHECK(report.per_env_auroc.at(Env::A) == 1.0);
  CHECK(report.per_env_auroc.at(Env::C) == 0.0);
  CHECK(report.per_env_auroc.count(Env::B) == 0);
  REQUIRE(report.skipped_envs.size() == 1);
  CHECK(report.skipped_envs[0] == Env::B);
  CHECK(report.robust_auroc == 0.0);
  CHECK(report.delta == doctest::Approx(1.0));
  REQUIRE(report.warnings.size() == 1);
}

TEST_CASE("cst decision rule") {
  const auto report = [](double a, double c) {
    return shift_report_from_aurocs({{Env::A, a}, {Env::C, c}});
  };
  const CstDecision adopt = cst(report(0.75, 0.70), report(0.85, 0.80), 0.05);
  CHECK(adopt.decision == CstOutcome::AdoptComplexity);
  CHECK(adopt.margin == doctest::Approx(0.10));

  const CstDecision keep = cst(report(0.75, 0.70), report(0.85, 0.72), 0.05);
  CHECK(keep.decision == CstOutcome::DefaultToSimplicity);
  CHECK(keep.margin == doctest::Approx(0.02));

  // Margin exactly at delta stays with simplicity (strict inequality).
  // Dyadic values keep the comparison exact in floating point.
  const CstDecision edge = cst(report(0.75, 0.5), report(0.875, 0.5625), 0.0625);
  CHECK(edge.margin == 0.0625);
  CHECK(edge.decision == CstOutcome::DefaultToSimplicity);

  // Adding the same constant to both env-C aurocs leaves the margin alone.
  const CstDecision shifted = cst(report(0.75, 0.80), report(0.85, 0.82), 0.05);
  CHECK(shifted.margin == doctest::Approx(0.02).epsilon(1e-9));

  CHECK_THROWS_AS(cst(shift_report_from_aurocs({{Env::A, 0.7}, {Env::C, 0.7}}),
                      shift_report_from_aurocs({{Env::A, 0.7}}), 0.05),
                  std::invalid_argument);
  CHECK_THROWS_AS(cst(shift_report_from_aurocs({{Env::A, 0.7}, {Env::B, 0.7}}),
                      shift_report_from_aurocs({{Env::A, 0.7}, {Env::B, 0.7}}), 0.05),
                  std::invalid_argument);
}

TEST_CASE("firewall gate") {
  const FirewallResult same = firewall_gate({0.2, 0.6, 0.9}, {0.2, 0.6, 0.9}, 0.3);
  CHECK(same.halt_rate == 0.0);

  const FirewallResult diverged = firewall_gate({0.2}, {0.9}, 0.5);
  CHECK(diverged.halt[0]);
  CHECK(diverged.halt_rate == 1.0);

  // theta = 1: divergence can never strictly exceed 1, even at the endpoints.
  Rng rng(45);
  std::vector<double> g(100), c(100);
  for (int i = 0; i < 100; ++i) {
    g[static_cast<std::size_t>(i)] = rng.uniform();
    c[static_cast<std::size_t>(i)] = rng.uniform();
  }
  g[0] = 0.0;
  c[0] = 1.0;
  const FirewallResult extreme = firewall_gate(g, c, 1.0);
  CHECK(extreme.halt_rate == 0.0);

  CHECK_THROWS_AS(firewall_gate({0.1}, {0.2, 0.3}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(firewall_gate({0.1}, {0.2}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(firewall_gate({0.1}, {0.2}, 1.5), std::invalid_argument);
}

TEST_CASE("firewall halt set shrinks as theta grows") {
  Rng rng(46);
  std::vector<double> g(500), c(500);
  for (int i = 0; i < 500; ++i) {
    g[static_cast<std::size_t>(i)] = rng.uniform();
    c[static_cast<std::size_t>(i)] = rng.uniform();
  }
  double previous = 1.1;
  for (double theta : {0.05, 0.1, 0.3, 0.6, 0.9}) {
    const double rate = firewall_gate(g, c, theta).halt_rate;
    CHECK(rate <= previous);
    previous = rate;
  }
}

TEST_CASE("degradation slope advantage") {
  const auto with_delta = [](double a, double c) {
    return shift_report_from_aurocs({{Env::A, a}, {Env::C, c}});
  };
  // Delta_FT = +0.039, Delta_LR = -0.020 -> advantage +0.059.
  CHECK(degradation_slope_advantage(with_delta(0.654, 0.674), with_delta(0.700, 0.661)) ==
        doctest::Approx(0.059).epsilon(1e-9));
  CHECK(degradation_slope_advantage(with_delta(0.8, 0.7), with_delta(0.9, 0.8)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(degradation_slope_advantage(with_delta(0.733, 0.739), with_delta(0.954, 0.760)) ==
        doctest::Approx(0.200).epsilon(1e-9));
}

TEST_CASE("bootstrap auroc ci is seeded and brackets the estimate") {
  Rng rng(47);
  std::vector<double> scores(300);
  std::vector<int> labels(300);
  for (int i = 0; i < 300; ++i) {
    const int y = rng.bernoulli(0.5) ? 1 : 0;
    labels[static_cast<std::size_t>(i)] = y;
    scores[static_cast<std::size_t>(i)] = 0.8 * y + rng.normal();
  }
  const AurocCI a = auroc_bootstrap_ci(scores, labels, 500, 0.95, 7);
  const AurocCI b = auroc_bootstrap_ci(scores, labels, 500, 0.95, 7);
  CHECK(a.low == b.low);
  CHECK(a.high == b.high);
  const double point = auroc(scores, labels);
  CHECK(a.low <= point);
  CHECK(a.high >= point);
}
