#pragma once

// Five-indicator regime scorecard with half-score support, tier thresholds,
// and the temporal-instability gate that forbids a Stable classification in
// the presence of documented drift.

#include <array>
#include <string>

#include <json.hpp>

namespace rgauge {

enum class IndicatorKind {
  TemporalStability,
  ContextInvariance,
  DataToComplexity,
  GroundTruth,
  CausalPriors,
};
inline constexpr int kIndicatorCount = 5;

const char* to_string(IndicatorKind kind);
IndicatorKind indicator_kind_from_string(const std::string& name);

// Documented evidence thresholds from the scorecard rubric. They are exposed
// for callers that want to pre-screen evidence; the scorecard itself takes
// already-judged scores.
inline constexpr double kDegradationAurocThreshold = 0.05;  // over 2-5 years
inline constexpr double kDataPovertyRatio = 100.0;          // N/D_eff below -> poverty
inline constexpr double kDataAbundanceRatio = 1000.0;       // N/D_eff above -> abundance
inline constexpr double kGroundTruthKappaThreshold = 0.8;   // inter-rater agreement

struct Indicator {
  IndicatorKind kind;
  double score = 0.0;  // one of {0, 0.5, 1}
  std::string note;    // required when score == 0.5

  /// Throws std::invalid_argument on an illegal score or an undocumented
  /// half-score.
  void validate() const;
};

struct Scorecard {
  std::string domain_name;
  std::array<Indicator, kIndicatorCount> indicators;  // one per kind

  /// Builds a validated scorecard; throws if any indicator is invalid or a
  /// kind is duplicated/missing.
  static Scorecard make(std::string domain_name, std::array<Indicator, kIndicatorCount> indicators);

  double score(IndicatorKind kind) const;

  static Scorecard from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

enum class Tier { Stable, Borderline, Shifting };
const char* to_string(Tier tier);

enum class Recommendation { CompressionMandatory, RunCST, ComplexityViable };
const char* to_string(Recommendation rec);
const char* recommendation_text(Recommendation rec);

struct RegimeTier {
  Tier tier = Tier::Stable;
  double total = 0.0;
  bool gated = false;  // true when the temporal gate overrode a raw Stable
};

/// Sum of the five indicator scores.
double score_total(const Scorecard& card);

/// Raw tier from the total (<=1 Stable, 1.5-2.5 Borderline, >=3 Shifting),
/// then the temporal-instability gate. With strict_gate (default) any
/// positive temporal score blocks Stable; otherwise only a full score of 1
/// does.
RegimeTier classify(const Scorecard& card, bool strict_gate = true);

Recommendation recommend(const RegimeTier& tier);

}  // namespace rgauge
