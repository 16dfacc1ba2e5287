#include "rgauge/report.hpp"

#include <stdexcept>

#include "rgauge/regime_index.hpp"

namespace rgauge {

namespace {

void merge_domain(std::string& domain, const nlohmann::json& doc) {
  const std::string candidate = doc.value("domain", std::string{});
  if (candidate.empty()) return;
  if (domain.empty()) {
    domain = candidate;
  } else if (domain != candidate) {
    throw std::invalid_argument("report: conflicting domain names ('" + domain + "' vs '" +
                                candidate + "')");
  }
}

}  // namespace

nlohmann::json report_bundle(const nlohmann::json& ri_output,
                             const std::optional<nlohmann::json>& deff_output,
                             const std::optional<nlohmann::json>& gap_output,
                             const std::optional<nlohmann::json>& cst_output) {
  std::string domain;
  merge_domain(domain, ri_output);
  if (deff_output) merge_domain(domain, *deff_output);
  if (gap_output) merge_domain(domain, *gap_output);
  if (cst_output) merge_domain(domain, *cst_output);

  nlohmann::json bundle;
  bundle["domain"] = domain;
  bundle["regime_index"] = ri_output;
  if (deff_output) bundle["deff"] = *deff_output;
  if (gap_output) bundle["viability"] = *gap_output;
  if (cst_output) bundle["cst"] = *cst_output;

  const std::string tier = ri_output.value("tier", std::string{});
  std::string recommendation;
  std::string text;
  if (tier == "Shifting") {
    recommendation = to_string(Recommendation::CompressionMandatory);
    text = "Compression Mandatory";
  } else if (tier == "Stable") {
    recommendation = to_string(Recommendation::ComplexityViable);
    text = "Complexity Viable";
  } else if (tier == "Borderline") {
    recommendation = to_string(Recommendation::RunCST);
    text = "Run CST";
    if (cst_output) {
      const std::string decision = cst_output->value("decision", std::string{});
      if (decision == "adopt_complexity") {
        text = "complexity adopted via CST";
      } else if (decision == "default_to_simplicity") {
        text = "defaulted to simplicity via CST";
      }
    }
  } else {
    throw std::invalid_argument("report: regime-index input lacks a tier");
  }
  bundle["recommendation"] = recommendation;
  bundle["recommendation_text"] = text;
  return bundle;
}

}  // namespace rgauge
