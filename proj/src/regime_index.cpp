#include "rgauge/regime_index.hpp"

#include <cmath>
#include <stdexcept>

namespace rgauge {

const char* to_string(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::TemporalStability: return "temporal_stability";
    case IndicatorKind::ContextInvariance: return "context_invariance";
    case IndicatorKind::DataToComplexity: return "data_to_complexity";
    case IndicatorKind::GroundTruth: return "ground_truth";
    case IndicatorKind::CausalPriors: return "causal_priors";
  }
  return "?";
}

IndicatorKind indicator_kind_from_string(const std::string& name) {
  for (int i = 0; i < kIndicatorCount; ++i) {
    auto kind = static_cast<IndicatorKind>(i);
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown indicator kind: '" + name + "'");
}

void Indicator::validate() const {
  if (score != 0.0 && score != 0.5 && score != 1.0) {
    throw std::invalid_argument(std::string("indicator ") + to_string(kind) +
                                ": score must be one of {0, 0.5, 1}");
  }
  if (score == 0.5 && note.empty()) {
    throw std::invalid_argument(std::string("indicator ") + to_string(kind) +
                                ": half-scores must be documented with a note");
  }
}

Scorecard Scorecard::make(std::string domain_name,
                          std::array<Indicator, kIndicatorCount> indicators) {
  bool seen[kIndicatorCount] = {};
  for (const auto& ind : indicators) {
    ind.validate();
    int k = static_cast<int>(ind.kind);
    if (seen[k]) {
      throw std::invalid_argument(std::string("duplicate indicator: ") + to_string(ind.kind));
    }
    seen[k] = true;
  }
  Scorecard card;
  card.domain_name = std::move(domain_name);
  card.indicators = std::move(indicators);
  return card;
}

double Scorecard::score(IndicatorKind kind) const {
  for (const auto& ind : indicators) {
    if (ind.kind == kind) return ind.score;
  }
  throw std::logic_error("scorecard missing indicator");  // unreachable for validated cards
}

Scorecard Scorecard::from_json(const nlohmann::json& doc) {
  if (!doc.contains("indicators") || !doc["indicators"].is_array() ||
      doc["indicators"].size() != kIndicatorCount) {
    throw std::invalid_argument("scorecard JSON must contain exactly 5 indicators");
  }
  std::array<Indicator, kIndicatorCount> inds;
  int i = 0;
  for (const auto& item : doc["indicators"]) {
    Indicator ind;
    ind.kind = indicator_kind_from_string(item.at("kind").get<std::string>());
    ind.score = item.at("score").get<double>();
    ind.note = item.value("note", std::string{});
    inds[i++] = std::move(ind);
  }
  return make(doc.value("domain", std::string{}), std::move(inds));
}

nlohmann::json Scorecard::to_json() const {
  nlohmann::json inds = nlohmann::json::array();
  for (const auto& ind : indicators) {
    inds.push_back({{"kind", to_string(ind.kind)}, {"score", ind.score}, {"note", ind.note}});
  }
  return {{"domain", domain_name}, {"indicators", inds}};
}

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::Stable: return "Stable";
    case Tier::Borderline: return "Borderline";
    case Tier::Shifting: return "Shifting";
  }
  return "?";
}

const char* to_string(Recommendation rec) {
  switch (rec) {
    case Recommendation::CompressionMandatory: return "compression_mandatory";
    case Recommendation::RunCST: return "run_cst";
    case Recommendation::ComplexityViable: return "complexity_viable";
  }
  return "?";
}

const char* recommendation_text(Recommendation rec) {
  switch (rec) {
    case Recommendation::CompressionMandatory:
      return "Compression Mandatory: prioritize epistemic compression; high-capacity black boxes are deleterious here.";
    case Recommendation::RunCST:
      return "Run a Compression Superiority Test; do not deploy complex models without direct shift-robustness evidence.";
    case Recommendation::ComplexityViable:
      return "Complexity Viable: prioritize complexity; scale model capacity and data.";
  }
  return "?";
}

double score_total(const Scorecard& card) {
  double total = 0.0;
  for (const auto& ind : card.indicators) total += ind.score;
  return total;
}

RegimeTier classify(const Scorecard& card, bool strict_gate) {
  RegimeTier out;
  out.total = score_total(card);
  if (out.total <= 1.0) {
    out.tier = Tier::Stable;
  } else if (out.total <= 2.5) {
    out.tier = Tier::Borderline;
  } else {
    out.tier = Tier::Shifting;
  }
  const double temporal = card.score(IndicatorKind::TemporalStability);
  const bool gate_hit = strict_gate ? temporal > 0.0 : temporal >= 1.0;
  if (gate_hit && out.tier == Tier::Stable) {
    out.tier = Tier::Borderline;
    out.gated = true;
  }
  return out;
}

Recommendation recommend(const RegimeTier& tier) {
  switch (tier.tier) {
    case Tier::Shifting: return Recommendation::CompressionMandatory;
    case Tier::Borderline: return Recommendation::RunCST;
    case Tier::Stable: return Recommendation::ComplexityViable;
  }
  return Recommendation::RunCST;
}

}  // namespace rgauge
