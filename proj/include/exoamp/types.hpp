#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exoamp {

// Error taxonomy, mapped to CLI exit codes: config/domain -> 2,
// numeric -> 3, infeasible design -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

enum class ModelKind { M1, M2, M3, Reduced };

inline const char* to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::M1: return "M1";
    case ModelKind::M2: return "M2";
    case ModelKind::M3: return "M3";
    case ModelKind::Reduced: return "Reduced";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s);

/// Power law H = 10^beta0 * K^beta1 on base-10 logarithms.
struct PowerLaw {
    double beta0 = 0.0;
    double beta1 = 1.0;
    double r2 = std::numeric_limits<double>::quiet_NaN();
};

/// One subject-condition's joint impedance parameters.
/// K_h [Nm/rad], H_h [Nm/rad], B_h [Nm s/rad], M_h [kg m^2].
/// Fitting may report negative H_h/B_h; they are kept as-is and flagged.
struct JointParams {
    double K_h = 0.0;
    double H_h = 0.0;
    double B_h = 0.0;
    double M_h = 0.0;
    bool flagged = false;

    void validate() const
    {
        if (!(K_h > 0.0))
            throw DomainError("JointParams: K_h must be > 0, got " + std::to_string(K_h));
        if (!(M_h > 0.0))
            throw DomainError("JointParams: M_h must be > 0, got " + std::to_string(M_h));
    }

    bool negative_damping() const { return H_h < 0.0 || B_h < 0.0; }
};

/// Exoskeleton inertia plus amplification factor; the subject feels M_e / alpha.
struct CouplingConfig {
    double M_e = 1.01;
    double alpha = 1.0;

    void validate() const
    {
        if (!(M_e > 0.0))
            throw DomainError("CouplingConfig: M_e must be > 0");
        if (!(alpha >= 1.0))
            throw DomainError("CouplingConfig: alpha must be >= 1");
    }
};

/// Closed force loop of the series elastic actuator as a unity-DC-gain
/// 2nd order low pass.
struct SeaModel {
    double omega_sea = 2.0 * std::numbers::pi * 10.0;
    double zeta_sea = 0.7;

    void validate() const
    {
        if (!(omega_sea > 0.0))
            throw DomainError("SeaModel: omega_sea must be > 0");
        if (!(zeta_sea > 0.0 && zeta_sea <= 1.0))
            throw DomainError("SeaModel: zeta_sea must be in (0, 1]");
    }
};

/// One complex dynamic-stiffness value at one frequency [rad/s], [Nm/rad].
struct ComplexResponse {
    double omega = 0.0;
    std::complex<double> value{};
};

inline double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
inline double rad(double deg_) { return deg_ * std::numbers::pi / 180.0; }

} // namespace exoamp
