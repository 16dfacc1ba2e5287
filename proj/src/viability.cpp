#include "rgauge/viability.hpp"

#include <cmath>
#include <stdexcept>

namespace rgauge {

const char* to_string(GapZone zone) {
  switch (zone) {
    case GapZone::StableSurplus: return "stable_surplus";
    case GapZone::TransitionZone: return "transition_zone";
    case GapZone::StructuralDeficit: return "structural_deficit";
  }
  return "?";
}

void BoundaryParams::validate() const {
  if (amplitude < 0.0) throw std::invalid_argument("boundary amplitude must be >= 0");
  if (steepness <= 0.0) throw std::invalid_argument("boundary steepness must be > 0");
  if (!(midpoint > 0.0 && midpoint < 1.0)) {
    throw std::invalid_argument("boundary midpoint must lie in (0, 1)");
  }
}

void ViabilityInput::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  if (n < 1) throw std::invalid_argument("sample count N must be >= 1");
  if (!(d_eff > 0.0)) throw std::invalid_argument("d_eff must be > 0");
  if (tau_half && *tau_half <= 0.0) throw std::invalid_argument("tau_half must be > 0");
  if (accrual && *accrual <= 0.0) throw std::invalid_argument("accrual must be > 0");
}

double boundary(double rho, const BoundaryParams& params) {
  params.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  return params.b_min +
         params.amplitude / (1.0 + std::exp(params.steepness * (rho - params.midpoint)));
}

GapResult viability_gap(const ViabilityInput& input, const BoundaryParams& params,
                        double zone_half_width) {
  input.validate();
  GapResult out;
  out.boundary_value = boundary(input.rho, params);
  out.log_richness = std::log10(static_cast<double>(input.n) / input.d_eff);
  out.gap = out.log_richness - out.boundary_value;
  if (out.gap > zone_half_width) {
    out.zone = GapZone::StableSurplus;
  } else if (out.gap < -zone_half_width) {
    out.zone = GapZone::StructuralDeficit;
  } else {
    out.zone = GapZone::TransitionZone;
  }
  if (input.tau_half && input.accrual) {
    out.n_viable = horizon_constraint(*input.tau_half, *input.accrual);
    out.forbidden_zone_advisory = (*out.n_viable / input.d_eff) < 100.0;
  }
  return out;
}

double horizon_constraint(double tau_half, double accrual) {
  if (tau_half <= 0.0 || accrual <= 0.0) {
    throw std::invalid_argument("horizon constraint needs positive tau_half and accrual");
  }
  return tau_half * accrual;
}

HalfLife estimate_half_life(const std::vector<std::pair<double, double>>& series,
                            double baseline) {
  if (series.size() < 2) throw std::invalid_argument("half-life needs at least 2 points");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].first > series[i - 1].first)) {
      throw std::invalid_argument("half-life series times must be strictly increasing");
    }
  }
  const double advantage = series.front().second - baseline;
  if (advantage <= 0.0) throw std::invalid_argument("no advantage to halve");
  const double threshold = baseline + 0.5 * advantage;

  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].second <= threshold) {
      const auto& [t0, p0] = series[i - 1];
      const auto& [t1, p1] = series[i];
      // p0 > threshold >= p1 here, so the denominator is positive.
      const double t = t0 + (p0 - threshold) / (p0 - p1) * (t1 - t0);
      return {t, true};
    }
  }
  return {};  // never crossed: +inf sentinel, observed = false
}

PhaseTable phase_points(const std::vector<PhaseDomain>& domains, const BoundaryParams& params,
                        double zone_half_width) {
  PhaseTable table;
  for (const auto& dom : domains) {
    ViabilityInput input;
    input.rho = dom.rho;
    input.n = dom.n;
    input.d_eff = dom.d_eff;
    try {
      GapResult gap = viability_gap(input, params, zone_half_width);
      table.points.push_back(
          {dom.name, dom.rho, gap.log_richness, gap.boundary_value, gap.gap, gap.zone});
    } catch (const std::exception& err) {
      table.row_errors.push_back(dom.name + ": " + err.what());
    }
  }
  return table;
}

}  // namespace rgauge
