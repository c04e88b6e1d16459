#include "exoamp/stiffness.hpp"

#include "exoamp/powerlaw.hpp"

#include <cmath>

namespace exoamp {

ModelKind model_kind_from_string(const std::string& s)
{
    if (s == "M1")
        return ModelKind::M1;
    if (s == "M2")
        return ModelKind::M2;
    if (s == "M3")
        return ModelKind::M3;
    if (s == "Reduced")
        return ModelKind::Reduced;
    throw ConfigError("unknown model kind '" + s + "'");
}

ComplexResponse human_stiffness(const JointParams& params, ModelKind kind, double omega,
                                const std::optional<PowerLaw>& law)
{
    params.validate();
    if (!(omega > 0.0))
        throw DomainError("human_stiffness: omega must be > 0, got " + std::to_string(omega));

    const double re = params.K_h - params.M_h * omega * omega;
    double im = 0.0;
    switch (kind) {
    case ModelKind::M1:
        im = params.B_h * omega;
        break;
    case ModelKind::M2:
        im = params.H_h;
        break;
    case ModelKind::M3:
        im = params.B_h * omega + params.H_h;
        break;
    case ModelKind::Reduced:
        if (!law)
            throw ConfigError("human_stiffness: Reduced model requires a PowerLaw");
        im = predict_H(*law, params.K_h);
        break;
    }
    return {omega, {re, im}};
}

ComplexResponse coupled_stiffness(const JointParams& params, const CouplingConfig& coupling,
                                  ModelKind kind, double omega,
                                  const std::optional<PowerLaw>& law)
{
    coupling.validate();
    ComplexResponse r = human_stiffness(params, kind, omega, law);
    r.value -= coupling.M_e / coupling.alpha * omega * omega;
    return r;
}

NaturalFrequencies natural_frequencies(const JointParams& params, const CouplingConfig& coupling)
{
    params.validate();
    coupling.validate();
    return {std::sqrt(params.K_h / params.M_h),
            std::sqrt(params.K_h / (params.M_h + coupling.M_e))};
}

LossFactor loss_factor_and_ratio(double K_h, const PowerLaw& law)
{
    if (!(K_h > 0.0))
        throw DomainError("loss_factor_and_ratio: K_h must be > 0");
    const double c = std::pow(10.0, law.beta0) * std::pow(K_h, law.beta1 - 1.0);
    return {c, c / 2.0, deg(std::atan(c))};
}

std::complex<double> sea_response(const SeaModel& sea, double omega)
{
    sea.validate();
    if (omega < 0.0)
        throw DomainError("sea_response: omega must be >= 0");
    const double w2 = sea.omega_sea * sea.omega_sea;
    return w2 / std::complex<double>(w2 - omega * omega,
                                     2.0 * sea.zeta_sea * sea.omega_sea * omega);
}

} // namespace exoamp
