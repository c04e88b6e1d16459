#pragma once

#include "exoamp/types.hpp"

#include <complex>
#include <vector>

namespace exoamp {

/// Proportional rule k_p = sqrt(M_{h-e}/M_h); places the crossover of
/// k_p P(s) at the log-midpoint of [omega_{h-e}, omega_h].
struct KpRule {
    double k_p;
    double M_h, M_e;

    /// omega_gc(K_h) = sqrt(K_h / sqrt(M_{h-e} M_h))
    double omega_gc(double K_h) const;
};

KpRule design_kp(double M_h, double M_e);

/// Geometric mean of the stiffness bounds.
double nominal_stiffness(double K_low, double K_high);

/// f = atan(c_h(K*))/90 - phi/90 with K* the loss-factor minimizer over
/// [K_low, K_high]: K_high if beta1 < 1, else K_low.  Throws
/// InfeasibleError (reporting the max attainable phi) if f <= 0.
double select_fractional_order(const PowerLaw& law, double K_low, double K_high,
                               double phi_deg);

struct AmplifierDesign {
    double k_p = 0.0;
    double f = 0.0;          // fractional order in (0, 1)
    double k_f = 0.0;        // (rad/s)^f, = omega_gc_hat^f
    double phi_deg = 0.0;    // guaranteed phase margin
    double K_low = 0.0, K_high = 0.0, K_hat = 0.0;
    double omega_gc_hat = 0.0;
    double M_h = 0.0, M_e = 0.0;
    PowerLaw law;
};

AmplifierDesign make_design(double M_h, double M_e, double K_low, double K_high,
                            const PowerLaw& law, double phi_deg);

/// Equal-ratio ladder of first-order lag sections approximating k_f s^{-f}:
/// F(s) = k_f/p_1^f * prod (1 + s/z_i)/(1 + s/p_i), z_i = p_i r_zp,
/// p_i = p_1 r_pp^{i-1}, r_zp = r_pp^f.
struct LagCascade {
    double f = 0.0;
    double k_f = 0.0;
    double dc_gain = 0.0; // k_f / p_1^f
    double r_zp = 0.0, r_pp = 0.0;
    std::vector<double> poles, zeros; // rad/s, ascending

    double band_lo() const { return poles.front(); }
    double band_hi() const { return zeros.back(); }
};

LagCascade build_lag_cascade(double f, double k_f, int n = 5, double p_1 = 1.0,
                             double r_pp = 3.16227766016837933); // 10^0.5

/// Ideal law: k_f w^{-f} e^{-j 90 f deg}.
std::complex<double> eval_ideal(double k_f, double f, double omega);

std::complex<double> eval_cascade(const LagCascade& cascade, double omega);

/// Rescales k_f (and dc_gain) so the cascade itself has unit magnitude at
/// omega_gc_hat; returns the gain correction applied.
double normalize_cascade_gain(LagCascade& cascade, double omega_gc_hat);

/// Bilinear-transform realization, one first-order section per lag filter:
/// y = b0 x + b1 x_prev - a1 y_prev, overall gain folded into `gain`.
struct DiscreteCascade {
    double sample_rate_hz = 0.0;
    double gain = 0.0;
    struct Section {
        double b0, b1, a1;
    };
    std::vector<Section> sections;

    double dc_gain() const;
};

DiscreteCascade to_discrete(const LagCascade& cascade, double sample_rate_hz);

} // namespace exoamp
