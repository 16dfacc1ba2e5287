#pragma once

// Viability-gap geometry: the illustrative boundary B(rho), the gap
// V = log10(N/D_eff) - B(rho), the horizon-data constraint, and data
// half-life estimation. The boundary is a conceptual diagnostic, not a
// calibrated estimator; every emitter attaches that caveat.

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rgauge {

inline constexpr const char* kBoundaryCaveat =
    "boundary B(rho) is an illustrative diagnostic geometry, not a calibrated estimator";

struct BoundaryParams {
  double b_min = 2.8;    // log10 units
  double amplitude = 3.0;
  double steepness = 10.0;
  double midpoint = 0.45;

  void validate() const;  // amplitude >= 0, steepness > 0, midpoint in (0,1)
};

enum class GapZone { StableSurplus, TransitionZone, StructuralDeficit };
const char* to_string(GapZone zone);

struct ViabilityInput {
  double rho = 0.0;      // signal stability in [0,1]
  long long n = 1;       // sample count
  double d_eff = 1.0;    // effective dimension
  std::optional<double> tau_half;  // years
  std::optional<double> accrual;   // samples/year

  void validate() const;
};

struct GapResult {
  double gap = 0.0;             // V, log10 units
  GapZone zone = GapZone::TransitionZone;
  double boundary_value = 0.0;  // B(rho)
  double log_richness = 0.0;    // log10(N/D_eff)
  std::optional<double> n_viable;        // tau_half * accrual when both given
  bool forbidden_zone_advisory = false;  // n_viable/d_eff < 100
};

inline constexpr double kDefaultZoneHalfWidth = 0.25;  // epsilon around V = 0

/// B(rho) = b_min + A / (1 + exp(k (rho - rho0))). Throws if rho is outside
/// [0, 1].
double boundary(double rho, const BoundaryParams& params = {});

GapResult viability_gap(const ViabilityInput& input, const BoundaryParams& params = {},
                        double zone_half_width = kDefaultZoneHalfWidth);

/// N_viable = tau_half * accrual; both must be positive.
double horizon_constraint(double tau_half, double accrual);

struct HalfLife {
  double time = std::numeric_limits<double>::infinity();
  bool observed = false;  // false: advantage never halved within the series
};

/// First time the performance advantage over the baseline halves, by linear
/// interpolation between bracketing samples. Throws when the series is too
/// short, times are not strictly increasing, or there is no initial
/// advantage.
HalfLife estimate_half_life(const std::vector<std::pair<double, double>>& series,
                            double baseline);

struct PhaseDomain {
  std::string name;
  double rho = 0.0;
  long long n = 1;
  double d_eff = 1.0;
};

struct PhasePoint {
  std::string name;
  double rho = 0.0;
  double log_richness = 0.0;
  double boundary_value = 0.0;
  double gap = 0.0;
  GapZone zone = GapZone::TransitionZone;
};

struct PhaseTable {
  std::vector<PhasePoint> points;
  std::vector<std::string> row_errors;  // invalid rows, reported not fatal
};

PhaseTable phase_points(const std::vector<PhaseDomain>& domains,
                        const BoundaryParams& params = {},
                        double zone_half_width = kDefaultZoneHalfWidth);

}  // namespace rgauge
