#pragma once

#include "exoamp/protocol.hpp"
#include "exoamp/types.hpp"

#include <complex>
#include <span>
#include <vector>

namespace exoamp {

/// One complex dynamic-stiffness sample: S_h = phasor(tau_c)/phasor(theta_e)
/// over the second 5 s of a period's sinusoid segment.
struct FrequencySample {
    double omega = 0.0;
    std::complex<double> S{};
    double t_start = 0.0, t_end = 0.0; // analysis window
};

struct FitResult {
    ModelKind kind = ModelKind::M2;
    JointParams params;
    double rss = 0.0;
    double r2 = 0.0;
    double cond = 0.0; // design-matrix condition number
    std::vector<std::complex<double>> residuals;
};

/// Phasors from a least-squares fit of x(t) to a cos(wt) + b sin(wt) + c;
/// the constant term absorbs bias and posture offset.
FrequencySample extract_sample(const TimeSeries& ts, const PeriodMarker& marker,
                               double min_theta_phasor = 1e-4);

/// Frequency-domain linear least squares for M1/M2/M3, stacking Re/Im rows.
FitResult fit_model(std::span<const FrequencySample> samples, ModelKind kind);

/// S_h(jw) - (M_e/alpha) w^2 from fitted parameters.
ComplexResponse recover_coupled(const FitResult& fit, const CouplingConfig& coupling,
                                double omega);

struct PhaseStats {
    double mean_deg = 0.0;
    double stderr_deg = 0.0;
    int n = 0;
};

/// Mean and standard error of phase(S) in degrees over the pooled
/// experiments of one group, excluding the last `exclude_last` frequencies
/// of each experiment (second-order zero at omega_h).
PhaseStats phase_shift_stats(const std::vector<std::vector<FrequencySample>>& experiments,
                             int exclude_last = 3);

} // namespace exoamp
