#include "rgauge/synthesis_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgauge {

// AS 241 algorithm PPND16 (Wichura 1988): relative error ~1e-15 over (0,1).
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

WilsonInterval wilson_interval(long long successes, long long trials, double confidence) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: successes must lie in [0, trials]");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0,1)");
  }
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

// log C(n, k) via lgamma; exact enough for doubled-tail sums at any n.
double log_choose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

double binom_pmf(long long n, long long k, double p) {
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_choose(n, k) + static_cast<double>(k) * std::log(p) +
                  static_cast<double>(n - k) * std::log1p(-p));
}

}  // namespace

double binomial_two_sided(long long successes, long long trials, double p0) {
  if (trials < 1) throw std::invalid_argument("binomial_two_sided: trials must be >= 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("binomial_two_sided: successes must lie in [0, trials]");
  }
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw std::invalid_argument("binomial_two_sided: p0 must lie in (0,1)");
  }
  double lower = 0.0, upper = 0.0;
  for (long long k = 0; k <= successes; ++k) lower += binom_pmf(trials, k, p0);
  for (long long k = successes; k <= trials; ++k) upper += binom_pmf(trials, k, p0);
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

double cohens_h(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("cohens_h: proportions must lie in [0,1]");
  }
  return std::fabs(2.0 * std::asin(std::sqrt(p1)) - 2.0 * std::asin(std::sqrt(p2)));
}

const char* to_string(Winner winner) {
  return winner == Winner::Simple ? "Simple" : "Complex";
}

Winner winner_from_string(const std::string& name) {
  if (name == "Simple" || name == "simple") return Winner::Simple;
  if (name == "Complex" || name == "complex") return Winner::Complex;
  throw std::invalid_argument("winner must be Simple or Complex, got '" + name + "'");
}

namespace {

enum class RowTier { Stable, Borderline, Shifting };

RowTier tier_from_total(double total) {
  if (total <= 1.0) return RowTier::Stable;
  if (total <= 2.5) return RowTier::Borderline;
  return RowTier::Shifting;
}

ConcordanceResult tally(const std::vector<ConcordanceRow>& rows,
                        const std::vector<RowTier>& tiers, double confidence) {
  ConcordanceResult out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    switch (tiers[i]) {
      case RowTier::Borderline:
        ++out.breakdown.borderline_excluded;
        out.notes.push_back(rows[i].domain + ": Borderline, excluded from concordance");
        continue;
      case RowTier::Shifting: {
        ++out.breakdown.shifting_trials;
        if (rows[i].winner == Winner::Simple) ++out.breakdown.shifting_successes;
        break;
      }
      case RowTier::Stable: {
        ++out.breakdown.stable_trials;
        if (rows[i].winner == Winner::Complex) ++out.breakdown.stable_successes;
        break;
      }
    }
  }
  out.trials = out.breakdown.shifting_trials + out.breakdown.stable_trials;
  out.successes = out.breakdown.shifting_successes + out.breakdown.stable_successes;
  if (out.trials == 0) {
    throw std::invalid_argument("concordance: no scorable (non-Borderline) rows");
  }
  out.proportion = static_cast<double>(out.successes) / static_cast<double>(out.trials);
  const WilsonInterval ci = wilson_interval(out.successes, out.trials, confidence);
  out.wilson_low = ci.low;
  out.wilson_high = ci.high;
  out.p_two_sided = binomial_two_sided(out.successes, out.trials, 0.5);
  out.cohens_h = cohens_h(out.proportion, 0.5);
  return out;
}

}  // namespace

ConcordanceResult concordance_table(const std::vector<ConcordanceRow>& rows,
                                    double confidence) {
  if (rows.empty()) throw std::invalid_argument("concordance: empty input");
  std::vector<RowTier> tiers;
  tiers.reserve(rows.size());
  for (const auto& row : rows) tiers.push_back(tier_from_total(row.ri_score));
  return tally(rows, tiers, confidence);
}

ConcordanceResult concordance_retier(const std::vector<ConcordanceRow>& rows,
                                     double shifting_threshold, double confidence) {
  if (rows.empty()) throw std::invalid_argument("concordance: empty input");
  std::vector<RowTier> tiers;
  tiers.reserve(rows.size());
  for (const auto& row : rows) {
    tiers.push_back(row.ri_score >= shifting_threshold ? RowTier::Shifting : RowTier::Stable);
  }
  return tally(rows, tiers, confidence);
}

const std::vector<ConcordanceRow>& synthesis_fixture() {
  static const std::vector<ConcordanceRow> rows = {
      {"ICU Mortality (MIMIC-IV v3.1)", 4.0, Winner::Simple},
      {"30-Day Readmission", 3.0, Winner::Simple},
      {"Sepsis Prediction", 3.0, Winner::Simple},
      {"Credit Default (LendingClub)", 3.0, Winner::Simple},
      {"Recidivism (COMPAS)", 3.0, Winner::Simple},
      {"Income Prediction (Adult)", 3.0, Winner::Complex},
      {"Stock Return Prediction", 3.0, Winner::Simple},
      {"Gene Expression (Cancer)", 3.0, Winner::Simple},
      {"Macroeconomic Forecasting", 3.0, Winner::Simple},
      {"Protein Structure", 0.0, Winner::Complex},
      {"Weather Forecasting", 0.0, Winner::Complex},
      {"ImageNet Classification", 0.0, Winner::Complex},
      {"Board Games (Go/Chess)", 0.0, Winner::Complex},
      {"Machine Translation", 1.0, Winner::Complex},
      {"Psychiatric Deterioration", 3.0, Winner::Complex},
  };
  return rows;
}

}  // namespace rgauge
