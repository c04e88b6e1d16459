#include "exoamp/protocol.hpp"

#include "exoamp/kernels.hpp"
#include "exoamp/powerlaw.hpp"
#include "exoamp/stiffness.hpp"

#include <algorithm>
#include <cmath>

namespace exoamp {

double ExperimentSpec::omega(int period) const
{
    if (period < 1 || period > n_periods)
        throw DomainError("ExperimentSpec::omega: period out of range");
    return base_freq * std::pow(10.0, 0.1 * (period - 1));
}

double ExperimentSpec::amplitude(int period, AmplitudeBoost boost) const
{
    if (period < 1 || period > n_periods)
        throw DomainError("ExperimentSpec::amplitude: period out of range");
    if (period < 8)
        return base_amplitude_Nm;
    const double e = (boost == AmplitudeBoost::compounding) ? 0.2 * (period - 7) : 0.2;
    return base_amplitude_Nm * std::pow(10.0, e);
}

std::array<ExperimentSpec, 9> build_protocol()
{
    std::array<ExperimentSpec, 9> out;
    const double grips[3] = {10.0, 14.0, 27.0};
    const double biases[3] = {0.0, 4.0, 8.0};
    const double freqs[3] = {2.0, 3.0, 4.0};
    const double alphas[3] = {1.0, 2.0, 4.0};
    for (int g = 0; g < 3; ++g) {
        for (int a = 0; a < 3; ++a) {
            ExperimentSpec& e = out[3 * g + a];
            e.exp_id = 3 * g + a + 1;
            e.alpha = alphas[a];
            e.grip_kg = grips[g];
            e.bias_Nm = biases[g];
            e.base_freq = freqs[g];
        }
    }
    return out;
}

double GroundTruthSubject::K_for(const ExperimentSpec& spec) const
{
    const int g = spec.group();
    if (g < 0 || static_cast<std::size_t>(g) >= K_h_by_group.size())
        throw ConfigError("GroundTruthSubject: no K_h for experiment group " +
                          std::to_string(g + 1) + " (exp " + std::to_string(spec.exp_id) + ")");
    const double K = K_h_by_group[static_cast<std::size_t>(g)];
    if (!(K > 0.0))
        throw ConfigError("GroundTruthSubject: K_h for group " + std::to_string(g + 1) +
                          " must be > 0");
    return K;
}

JointParams GroundTruthSubject::params_for(const ExperimentSpec& spec) const
{
    const double K = K_for(spec);
    JointParams p;
    p.K_h = K;
    p.H_h = predict_H(powerlaw, K);
    p.B_h = B_h;
    p.M_h = M_h;
    return p;
}

namespace {

// cosine blend from `from` to `to` over [i0, i1)
void fill_ramp(std::vector<double>& x, std::size_t i0, std::size_t i1, double dt,
               double from, double to)
{
    if (i1 <= i0)
        return;
    const double len = static_cast<double>(i1 - i0) * dt;
    kern::sinusoid(x.data() + i0, i1 - i0, 0.0, dt, std::numbers::pi / len,
                   -(to - from) / 2.0, 0.0, (from + to) / 2.0);
}

} // namespace

TimeSeries synthesize_experiment(const ExperimentSpec& spec, const GroundTruthSubject& subject,
                                 const SeaModel& sea, double dt, double M_e,
                                 AmplitudeBoost boost, uint32_t subject_index)
{
    if (!(dt > 0.0) || dt > 1e-3 + 1e-12)
        throw ConfigError("synthesize_experiment: dt must be in (0, 1 ms]");
    sea.validate();
    const JointParams truth = subject.params_for(spec);
    truth.validate();
    const CouplingConfig coupling{M_e, spec.alpha};
    coupling.validate();

    const auto samples_at = [dt](double seconds) {
        return static_cast<std::size_t>(std::llround(seconds / dt));
    };
    const std::size_t per_period = samples_at(60.0);
    const std::size_t ramp_end = samples_at(5.0);
    const std::size_t sin_end = samples_at(15.0);
    const std::size_t down_end = samples_at(20.0);
    const std::size_t n = per_period * static_cast<std::size_t>(spec.n_periods);

    constexpr double theta_hold = 0.7853981633974483; // ~45 deg raised posture

    TimeSeries ts;
    ts.dt = dt;
    ts.theta_e.assign(n, 0.0);
    ts.tau_c.assign(n, 0.0);
    ts.tau_s.assign(n, 0.0);
    ts.markers.reserve(static_cast<std::size_t>(spec.n_periods));

    for (int k = 1; k <= spec.n_periods; ++k) {
        const std::size_t base = per_period * static_cast<std::size_t>(k - 1);
        const double w = spec.omega(k);
        const double A = spec.amplitude(k, boost);

        // steady-state phasors for x(t') = Re(X e^{jwt'}):
        // commanded perturbation A sin(wt') filtered by the SEA loop
        const std::complex<double> pert = sea_response(sea, w) * std::complex<double>(0.0, -A);
        const std::complex<double> s_he =
            coupled_stiffness(truth, coupling, ModelKind::M3, w).value;
        const std::complex<double> s_h = human_stiffness(truth, ModelKind::M3, w).value;
        const std::complex<double> theta = pert / s_he;
        const std::complex<double> tc = s_h * theta;

        const std::size_t w0 = base + ramp_end, w1 = base + sin_end;
        const std::size_t wn = w1 - w0;
        // window content
        kern::sinusoid(ts.theta_e.data() + w0, wn, 0.0, dt, w, theta.real(), -theta.imag(),
                       theta_hold);
        kern::sinusoid(ts.tau_c.data() + w0, wn, 0.0, dt, w, tc.real(), -tc.imag(), 0.0);
        kern::sinusoid(ts.tau_s.data() + w0, wn, 0.0, dt, w, pert.real(), -pert.imag(),
                       spec.bias_Nm);

        // smooth filler into and out of the window; rest stays at zero
        const double t_win = static_cast<double>(wn - 1) * dt;
        const auto endval = [&](std::complex<double> X) {
            return X.real() * std::cos(w * t_win) - X.imag() * std::sin(w * t_win);
        };
        fill_ramp(ts.theta_e, base, w0, dt, 0.0, theta_hold + theta.real());
        fill_ramp(ts.theta_e, w1, base + down_end, dt, theta_hold + endval(theta), 0.0);
        fill_ramp(ts.tau_c, base, w0, dt, 0.0, tc.real());
        fill_ramp(ts.tau_c, w1, base + down_end, dt, endval(tc), 0.0);
        fill_ramp(ts.tau_s, base, w0, dt, 0.0, spec.bias_Nm + pert.real());
        fill_ramp(ts.tau_s, w1, base + down_end, dt, spec.bias_Nm + endval(pert), 0.0);

        ts.markers.push_back({k, static_cast<double>(w0) * dt, static_cast<double>(w1) * dt,
                              w, A});
    }

    // per-channel noise streams: key = (seed, subject/exp/channel tag)
    const auto key_lo = [&](uint64_t channel) {
        return (static_cast<uint64_t>(subject_index) << 16) |
               (static_cast<uint64_t>(spec.exp_id) << 4) | channel;
    };
    if (subject.noise_std_angle > 0.0)
        kern::gaussian_add(ts.theta_e.data(), n, subject.noise_std_angle, subject.rng_seed,
                           key_lo(0), 0);
    if (subject.noise_std_torque > 0.0)
        kern::gaussian_add(ts.tau_c.data(), n, subject.noise_std_torque, subject.rng_seed,
                           key_lo(1), 0);
    return ts;
}

} // namespace exoamp
