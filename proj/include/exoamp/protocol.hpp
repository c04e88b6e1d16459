#pragma once

#include "exoamp/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace exoamp {

/// Whether the 10^0.2 amplitude boost compounds each period from the 8th
/// on (periods 8,9,10 get 10^0.2, 10^0.4, 10^0.6) or is a one-time step.
enum class AmplitudeBoost { compounding, single_step };

/// One row of the nine-experiment perturbation protocol.
struct ExperimentSpec {
    int exp_id = 1;          // 1..9
    double alpha = 1.0;      // {1, 2, 4}
    double load_kg = 4.5;
    double grip_kg = 10.0;   // metadata only
    double bias_Nm = 0.0;
    double base_amplitude_Nm = 2.0;
    double base_freq = 2.0;  // rad/s, first period
    int n_periods = 10;

    int group() const { return (exp_id - 1) / 3; }

    /// Perturbation frequency of 1-indexed period k: base * 10^{0.1 (k-1)}.
    double omega(int period) const;

    /// Amplitude of 1-indexed period k: base * 10^{0.2 max(0, k-7)}
    /// (compounding) or base * 10^{0.2 [k>=8]} (single step).
    double amplitude(int period, AmplitudeBoost boost = AmplitudeBoost::compounding) const;
};

/// The nine rows of the modeling protocol: groups (10 kg, 0 Nm, 2 rad/s),
/// (14 kg, 4 Nm, 3 rad/s), (27 kg, 8 Nm, 4 rad/s), each at alpha = 1, 2, 4.
std::array<ExperimentSpec, 9> build_protocol();

/// Ground truth used to generate synthetic experiments.  H_h comes from the
/// power law applied to the group's K_h.
struct GroundTruthSubject {
    std::vector<double> K_h_by_group; // one per experiment group, Nm/rad
    PowerLaw powerlaw;
    double B_h = 0.0;
    double M_h = 0.11;
    double noise_std_torque = 0.05; // Nm
    double noise_std_angle = 0.002; // rad
    uint64_t rng_seed = 0;

    double K_for(const ExperimentSpec& spec) const; // throws ConfigError if group missing
    JointParams params_for(const ExperimentSpec& spec) const;
};

struct PeriodMarker {
    int period;     // 1-indexed
    double t_start; // sinusoid segment start [s]
    double t_end;   // sinusoid segment end [s]
    double omega;   // rad/s
    double amplitude; // Nm
};

/// Uniformly sampled columns theta_e [rad], tau_c [Nm], tau_s [Nm].
/// Each period spans 60 s: 5 s ramp, 10 s sinusoid, 5 s ramp-down, 40 s rest.
struct TimeSeries {
    double dt = 1e-3;
    std::vector<double> theta_e, tau_c, tau_s;
    std::vector<PeriodMarker> markers;

    std::size_t size() const { return theta_e.size(); }
    double t(std::size_t i) const { return dt * static_cast<double>(i); }
};

/// Generates the sinusoidal steady state per period directly from the
/// frequency response S_{h-e/alpha}(jw) (the hysteretic model has no causal
/// time-domain realization), with cosine-ramp filler and additive white
/// Gaussian noise on theta_e and tau_c.  Deterministic per
/// (subject.rng_seed, subject_index, exp_id) and kernel ISA.
TimeSeries synthesize_experiment(const ExperimentSpec& spec, const GroundTruthSubject& subject,
                                 const SeaModel& sea, double dt,
                                 double M_e = 1.01,
                                 AmplitudeBoost boost = AmplitudeBoost::compounding,
                                 uint32_t subject_index = 0);

} // namespace exoamp
