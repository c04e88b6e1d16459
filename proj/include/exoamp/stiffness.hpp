#pragma once

#include "exoamp/types.hpp"

#include <optional>

namespace exoamp {

struct NaturalFrequencies {
    double omega_h;  // sqrt(K_h / M_h)
    double omega_he; // sqrt(K_h / (M_h + M_e))
};

struct LossFactor {
    double c_h;       // H_h / K_h from the power law
    double zeta;      // c_h / 2
    double phase_deg; // atan(c_h)
};

/// Dynamic stiffness of the human alone, S_h(jw).
/// M3: (K_h - M_h w^2) + j(B_h w + H_h); M1 drops the H term, M2 drops the
/// B term; Reduced resolves H_h through the power law at evaluation time.
/// Positive frequencies only: the hysteretic term has no two-sided extension.
ComplexResponse human_stiffness(const JointParams& params, ModelKind kind, double omega,
                                const std::optional<PowerLaw>& law = std::nullopt);

/// S_{h-e/alpha}(jw) = S_h(jw) - (M_e/alpha) w^2.
ComplexResponse coupled_stiffness(const JointParams& params, const CouplingConfig& coupling,
                                  ModelKind kind, double omega,
                                  const std::optional<PowerLaw>& law = std::nullopt);

NaturalFrequencies natural_frequencies(const JointParams& params, const CouplingConfig& coupling);

LossFactor loss_factor_and_ratio(double K_h, const PowerLaw& law);

/// G_SEA(jw) = w_sea^2 / (w_sea^2 - w^2 + 2 j zeta w_sea w); unity DC gain.
std::complex<double> sea_response(const SeaModel& sea, double omega);

} // namespace exoamp
