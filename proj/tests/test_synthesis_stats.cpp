#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rgauge/synthesis_stats.hpp"

using namespace rgauge;

TEST_CASE("wilson interval reproduces the 13/15 bounds") {
  const WilsonInterval ci = wilson_interval(13, 15, 0.95);
  CHECK(ci.low == doctest::Approx(0.621).epsilon(0.002));
  CHECK(ci.high == doctest::Approx(0.963).epsilon(0.002));
}

TEST_CASE("wilson boundary and symmetry cases") {
  CHECK(wilson_interval(0, 1).low == 0.0);
  const WilsonInterval half = wilson_interval(5, 10);
  CHECK(half.low + half.high == doctest::Approx(1.0).epsilon(1e-12));  // symmetric at p-hat = 0.5
}

TEST_CASE("wilson interval contains the point estimate and narrows with trials") {
  for (long long trials : {7LL, 20LL, 81LL}) {
    for (long long successes = 0; successes <= trials; ++successes) {
      const WilsonInterval ci = wilson_interval(successes, trials);
      const double phat = static_cast<double>(successes) / static_cast<double>(trials);
      CHECK(ci.low <= phat + 1e-12);
      CHECK(ci.high >= phat - 1e-12);
    }
  }
  const WilsonInterval small = wilson_interval(13, 15);
  const WilsonInterval big = wilson_interval(130, 150);
  CHECK(big.high - big.low < small.high - small.low);
}

TEST_CASE("exact binomial test") {
  // Enumeration oracle: comb(15,13)+comb(15,14)+comb(15,15) = 121.
  long long upper_tail = 0;
  const auto comb = [](long long n, long long k) {
    long long value = 1;
    for (long long i = 1; i <= k; ++i) value = value * (n - k + i) / i;
    return value;
  };
  for (long long k = 13; k <= 15; ++k) upper_tail += comb(15, k);
  CHECK(upper_tail == 121);
  CHECK(binomial_two_sided(13, 15, 0.5) ==
        doctest::Approx(2.0 * 121.0 / 32768.0).epsilon(1e-10));

  CHECK(binomial_two_sided(5, 10, 0.5) == 1.0);  // capped at 1 at the exact center
  CHECK(binomial_two_sided(15, 15, 0.5) == doctest::Approx(2.0 / 32768.0).epsilon(1e-10));
}

TEST_CASE("binomial test is symmetric at p0 = 0.5") {
  for (long long n : {9LL, 15LL, 24LL}) {
    for (long long s = 0; s <= n; ++s) {
      CHECK(binomial_two_sided(s, n, 0.5) ==
            doctest::Approx(binomial_two_sided(n - s, n, 0.5)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cohens h") {
  CHECK(cohens_h(13.0 / 15.0, 0.5) == doctest::Approx(0.82).epsilon(0.013));
  CHECK(cohens_h(0.37, 0.37) == 0.0);
  CHECK(cohens_h(1.0, 0.0) == doctest::Approx(3.14159265358979).epsilon(1e-10));
  CHECK(cohens_h(0.2, 0.7) == doctest::Approx(cohens_h(0.7, 0.2)).epsilon(1e-15));
  CHECK_THROWS_AS(cohens_h(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("embedded fixture reproduces the synthesis table") {
  const ConcordanceResult result = concordance_table(synthesis_fixture());
  CHECK(result.successes == 13);
  CHECK(result.trials == 15);
  CHECK(result.breakdown.shifting_successes == 8);
  CHECK(result.breakdown.shifting_trials == 10);
  CHECK(result.breakdown.stable_successes == 5);
  CHECK(result.breakdown.stable_trials == 5);
  CHECK(result.breakdown.borderline_excluded == 0);
  CHECK(result.proportion == doctest::Approx(13.0 / 15.0));
  CHECK(result.p_two_sided < 0.01);
  CHECK(result.cohens_h == doctest::Approx(0.82).epsilon(0.013));
}

TEST_CASE("sensitivity re-tiering at thresholds 2 and 3") {
  for (double threshold : {2.0, 3.0}) {
    const ConcordanceResult result = concordance_retier(synthesis_fixture(), threshold);
    CHECK(result.successes == 13);
    CHECK(result.trials == 15);
  }
}

TEST_CASE("concordance edge cases") {
  const ConcordanceResult single = concordance_table({{"one", 4.0, Winner::Simple}});
  CHECK(single.successes == 1);
  CHECK(single.trials == 1);

  const ConcordanceResult with_borderline = concordance_table(
      {{"a", 4.0, Winner::Simple}, {"b", 2.0, Winner::Complex}, {"c", 0.0, Winner::Complex}});
  CHECK(with_borderline.trials == 2);
  CHECK(with_borderline.breakdown.borderline_excluded == 1);
  CHECK(with_borderline.trials + with_borderline.breakdown.borderline_excluded == 3);
  REQUIRE(with_borderline.notes.size() == 1);

  CHECK_THROWS_AS(concordance_table({}), std::invalid_argument);
  CHECK_THROWS_AS(concordance_table({{"only", 2.0, Winner::Simple}}), std::invalid_argument);
}

TEST_CASE("inverse normal cdf sanity") {
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0));
  CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959964).epsilon(1e-6));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
}
