#pragma once

// Shift evaluation: tie-aware AUROC, per-environment shift reports with
// robust (minimum) AUROC and degradation, the compression superiority test,
// and the epistemic firewall gate.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rgauge/dataset.hpp"
#include "rgauge/models.hpp"

namespace rgauge {

/// Probability that a random positive outranks a random negative, ties
/// counted 1/2 (Mann-Whitney with average ranks). Throws "AUROC undefined"
/// when only one class is present.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

struct AurocCI {
  double low = 0.0;
  double high = 1.0;
};

/// Seeded percentile bootstrap over rows.
AurocCI auroc_bootstrap_ci(const std::vector<double>& scores, const std::vector<int>& labels,
                           int resamples = 2000, double confidence = 0.95,
                           std::uint64_t seed = 42);

struct ShiftReport {
  std::map<Env, double> per_env_auroc;       // valid environments only
  std::vector<Env> skipped_envs;             // flagged: single-class labels
  double robust_auroc = 0.0;                 // min over valid environments
  double delta = 0.0;                        // AUROC_A - AUROC_C
  bool delta_valid = false;
  ModelSpec model;
  std::map<Env, AurocCI> bootstrap_ci;       // present when requested
  std::vector<std::string> warnings;
};

/// Evaluates a fitted model on every environment present in the dataset.
/// Environments whose labels are single-class are flagged and excluded from
/// the minimum.
ShiftReport shift_report(const FittedModel& model, const TabularDataset& data,
                         int bootstrap_resamples = 0, std::uint64_t seed = 42);

/// Report bookkeeping (robust minimum, degradation) over externally computed
/// per-environment AUROCs.
ShiftReport shift_report_from_aurocs(const std::map<Env, double>& per_env_auroc,
                                     const ModelSpec& model = {});

enum class CstOutcome { AdoptComplexity, DefaultToSimplicity };
const char* to_string(CstOutcome outcome);

struct CstDecision {
  ShiftReport baseline;
  ShiftReport challenger;
  double delta_threshold = 0.05;
  CstOutcome decision = CstOutcome::DefaultToSimplicity;
  double margin = 0.0;         // challenger - baseline AUROC on env C
  double robust_margin = 0.0;  // challenger - baseline robust AUROC
};

/// Default adoption threshold, borrowed from the clinically-significant
/// AUROC margin; configurable.
inline constexpr double kDefaultCstDelta = 0.05;

/// Adopt complexity only when the challenger beats the baseline on the
/// shifted test environment (env C) by strictly more than delta.
CstDecision cst(const ShiftReport& baseline, const ShiftReport& challenger,
                double delta = kDefaultCstDelta);

struct FirewallResult {
  std::vector<bool> halt;  // per row: divergence strictly above theta
  double halt_rate = 0.0;
};

/// Halt where |challenger - gatekeeper| > theta; theta in (0, 1].
FirewallResult firewall_gate(const std::vector<double>& gatekeeper_probs,
                             const std::vector<double>& challenger_probs, double theta);

/// Delta_complex - Delta_simple; positive favors the simple model's
/// stability.
double degradation_slope_advantage(const ShiftReport& simple, const ShiftReport& complex_model);

}  // namespace rgauge
