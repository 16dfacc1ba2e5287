#pragma once

// Diagnostic bundle: merges regime-index, effective-dimension, viability-gap
// and CST outputs produced by the CLI into a single report with the
// tier-based recommendation.

#include <optional>
#include <string>

#include <json.hpp>

namespace rgauge {

/// Inputs are the JSON documents emitted by `ri score`, `deff estimate`,
/// `gap` and `cst run`; any of the last three may be absent. Throws when two
/// inputs carry different non-empty domain names.
nlohmann::json report_bundle(const nlohmann::json& ri_output,
                             const std::optional<nlohmann::json>& deff_output,
                             const std::optional<nlohmann::json>& gap_output,
                             const std::optional<nlohmann::json>& cst_output);

}  // namespace rgauge
