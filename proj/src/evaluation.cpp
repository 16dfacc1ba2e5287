#include "rgauge/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rgauge/rng.hpp"

namespace rgauge {

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("auroc: scores and labels must have equal length");
  }
  const std::size_t n = scores.size();
  long long positives = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw std::invalid_argument("auroc: labels must be 0/1");
    positives += label;
  }
  const long long negatives = static_cast<long long>(n) - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("AUROC undefined: labels contain a single class");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tied score runs; accumulate positive ranks.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double u = positive_rank_sum -
                   static_cast<double>(positives) * (static_cast<double>(positives) + 1.0) / 2.0;
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

AurocCI auroc_bootstrap_ci(const std::vector<double>& scores, const std::vector<int>& labels,
                           int resamples, double confidence, std::uint64_t seed) {
  if (resamples < 1) throw std::invalid_argument("bootstrap: resamples must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("bootstrap: confidence must lie in (0,1)");
  }
  Rng rng(derive_seed(seed, 0xb007));
  const std::size_t n = scores.size();
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  std::vector<double> s(n);
  std::vector<int> l(n);
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pick = static_cast<std::size_t>(rng.below(n));
      s[i] = scores[pick];
      l[i] = labels[pick];
    }
    try {
      stats.push_back(auroc(s, l));
    } catch (const std::invalid_argument&) {
      // single-class resample: skip
    }
  }
  if (stats.empty()) throw std::runtime_error("bootstrap: every resample was single-class");
  std::sort(stats.begin(), stats.end());
  const double alpha = (1.0 - confidence) / 2.0;
  const auto pick_quantile = [&](double q) {
    const double pos = q * static_cast<double>(stats.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(stats.size() - 1, lo + 1);
    const double frac = pos - std::floor(pos);
    return stats[lo] * (1.0 - frac) + stats[hi] * frac;
  };
  return {pick_quantile(alpha), pick_quantile(1.0 - alpha)};
}

ShiftReport shift_report(const FittedModel& model, const TabularDataset& data,
                         int bootstrap_resamples, std::uint64_t seed) {
  ShiftReport report;
  report.model = model.spec;
  for (Env env : {Env::A, Env::B, Env::C}) {
    const auto idx = data.env_rows(env);
    if (idx.empty()) continue;
    const Eigen::MatrixXd features = data.env_features(env);
    const std::vector<int> labels = data.env_labels(env);
    const Eigen::VectorXd probs = model.predict_proba(features);
    std::vector<double> scores(probs.data(), probs.data() + probs.size());
    try {
      const double value = auroc(scores, labels);
      report.per_env_auroc[env] = value;
      if (bootstrap_resamples > 0) {
        report.bootstrap_ci[env] =
            auroc_bootstrap_ci(scores, labels, bootstrap_resamples, 0.95, seed);
      }
    } catch (const std::invalid_argument&) {
      report.skipped_envs.push_back(env);
      report.warnings.push_back(std::string("environment ") + to_string(env) +
                                ": single-class labels, AUROC undefined; excluded from robust minimum");
    }
  }
  if (report.per_env_auroc.empty()) {
    throw std::invalid_argument("shift_report: no environment has a defined AUROC");
  }
  report.robust_auroc = std::numeric_limits<double>::infinity();
  for (const auto& [env, value] : report.per_env_auroc) {
    report.robust_auroc = std::min(report.robust_auroc, value);
  }
  const auto a = report.per_env_auroc.find(Env::A);
  const auto c = report.per_env_auroc.find(Env::C);
  if (a != report.per_env_auroc.end() && c != report.per_env_auroc.end()) {
    report.delta = a->second - c->second;
    report.delta_valid = true;
  }
  return report;
}

ShiftReport shift_report_from_aurocs(const std::map<Env, double>& per_env_auroc,
                                     const ModelSpec& model) {
  if (per_env_auroc.empty()) {
    throw std::invalid_argument("shift_report_from_aurocs: no environments given");
  }
  ShiftReport report;
  report.model = model;
  report.per_env_auroc = per_env_auroc;
  report.robust_auroc = std::numeric_limits<double>::infinity();
  for (const auto& [env, value] : per_env_auroc) {
    report.robust_auroc = std::min(report.robust_auroc, value);
  }
  const auto a = per_env_auroc.find(Env::A);
  const auto c = per_env_auroc.find(Env::C);
  if (a != per_env_auroc.end() && c != per_env_auroc.end()) {
    report.delta = a->second - c->second;
    report.delta_valid = true;
  }
  return report;
}

const char* to_string(CstOutcome outcome) {
  return outcome == CstOutcome::AdoptComplexity ? "adopt_complexity" : "default_to_simplicity";
}

CstDecision cst(const ShiftReport& baseline, const ShiftReport& challenger, double delta) {
  if (delta < 0.0) throw std::invalid_argument("cst: delta must be >= 0");
  if (baseline.per_env_auroc.size() != challenger.per_env_auroc.size()) {
    throw std::invalid_argument("cst: reports cover different environments");
  }
  for (const auto& [env, value] : baseline.per_env_auroc) {
    if (challenger.per_env_auroc.find(env) == challenger.per_env_auroc.end()) {
      throw std::invalid_argument("cst: reports cover different environments");
    }
  }
  const auto base_c = baseline.per_env_auroc.find(Env::C);
  const auto chal_c = challenger.per_env_auroc.find(Env::C);
  if (base_c == baseline.per_env_auroc.end() || chal_c == challenger.per_env_auroc.end()) {
    throw std::invalid_argument("cst: environment C (shifted test set) missing from a report");
  }
  CstDecision out;
  out.baseline = baseline;
  out.challenger = challenger;
  out.delta_threshold = delta;
  out.margin = chal_c->second - base_c->second;
  out.robust_margin = challenger.robust_auroc - baseline.robust_auroc;
  out.decision =
      out.margin > delta ? CstOutcome::AdoptComplexity : CstOutcome::DefaultToSimplicity;
  return out;
}

FirewallResult firewall_gate(const std::vector<double>& gatekeeper_probs,
                             const std::vector<double>& challenger_probs, double theta) {
  if (gatekeeper_probs.size() != challenger_probs.size()) {
    throw std::invalid_argument("firewall: probability vectors must have equal length");
  }
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("firewall: theta must lie in (0, 1]");
  }
  FirewallResult out;
  out.halt.resize(gatekeeper_probs.size());
  std::size_t halts = 0;
  for (std::size_t i = 0; i < gatekeeper_probs.size(); ++i) {
    const bool halt = std::fabs(challenger_probs[i] - gatekeeper_probs[i]) > theta;
    out.halt[i] = halt;
    if (halt) ++halts;
  }
  out.halt_rate = gatekeeper_probs.empty()
                      ? 0.0
                      : static_cast<double>(halts) / static_cast<double>(gatekeeper_probs.size());
  return out;
}

double degradation_slope_advantage(const ShiftReport& simple, const ShiftReport& complex_model) {
  if (!simple.delta_valid || !complex_model.delta_valid) {
    throw std::invalid_argument("slope advantage: both reports need env A and env C AUROC");
  }
  return complex_model.delta - simple.delta;
}

}  // namespace rgauge
