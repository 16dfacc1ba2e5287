#pragma once

// Concordance statistics for regime-index validation: Wilson score interval,
// exact binomial test, Cohen's h, and the concordance table with the embedded
// 15-domain reference fixture.

#include <string>
#include <vector>

namespace rgauge {

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
double inverse_normal_cdf(double p);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score bounds for successes/trials at the given confidence
/// (default 0.95 -> z = 1.959964).
WilsonInterval wilson_interval(long long successes, long long trials,
                               double confidence = 0.95);

/// Exact two-sided binomial p-value: 2 * min(P(X <= s), P(X >= s)) capped at
/// 1. Exact binomial sums, no normal approximation.
double binomial_two_sided(long long successes, long long trials, double p0 = 0.5);

/// |2 asin(sqrt(p1)) - 2 asin(sqrt(p2))|.
double cohens_h(double p1, double p2);

enum class Winner { Simple, Complex };
const char* to_string(Winner winner);
Winner winner_from_string(const std::string& name);

struct ConcordanceRow {
  std::string domain;
  double ri_score = 0.0;  // raw regime-index total in [0,5]
  Winner winner = Winner::Simple;
};

struct RegimeBreakdown {
  long long shifting_successes = 0;
  long long shifting_trials = 0;
  long long stable_successes = 0;
  long long stable_trials = 0;
  long long borderline_excluded = 0;
};

struct ConcordanceResult {
  long long successes = 0;
  long long trials = 0;
  double proportion = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double p_two_sided = 1.0;
  double cohens_h = 0.0;  // vs the p = 0.5 random baseline
  RegimeBreakdown breakdown;
  std::vector<std::string> notes;
};

/// Concordance over the standard tiers: a row counts as concordant when
/// (Shifting and Simple) or (Stable and Complex); Borderline rows are
/// excluded with a note. Throws on empty input or when every row is
/// Borderline.
ConcordanceResult concordance_table(const std::vector<ConcordanceRow>& rows,
                                    double confidence = 0.95);

/// Sensitivity re-tiering: two-way classification with Shifting iff
/// ri_score >= threshold, else Stable (no Borderline band).
ConcordanceResult concordance_retier(const std::vector<ConcordanceRow>& rows,
                                     double shifting_threshold,
                                     double confidence = 0.95);

/// The embedded 15-domain synthesis fixture (domain, RI total, winner).
const std::vector<ConcordanceRow>& synthesis_fixture();

}  // namespace rgauge
