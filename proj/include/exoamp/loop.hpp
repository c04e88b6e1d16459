#pragma once

#include "exoamp/fractional.hpp"
#include "exoamp/types.hpp"

#include <complex>
#include <span>
#include <vector>

namespace exoamp {

/// Lag-cascade build parameters (defaults follow the hardware realization:
/// 5 sections, p_1 = 1 rad/s, r_pp = 10^0.5).
struct CascadeSpec {
    int n = 5;
    double p_1 = 1.0;
    double r_pp = 3.16227766016837933;
};

inline LagCascade build_lag_cascade(const AmplifierDesign& d, const CascadeSpec& spec)
{
    return build_lag_cascade(d.f, d.k_f, spec.n, spec.p_1, spec.r_pp);
}

/// P(jw) = [S_h(jw)/S_{h-e}(jw)] G_SEA(jw), M2 form, coupling alpha = 1.
std::complex<double> plant_response(const JointParams& params, double M_e, const SeaModel& sea,
                                    double omega);

struct LoopModel {
    AmplifierDesign design;
    LagCascade cascade;
    bool use_cascade = true;
    SeaModel sea;

    std::complex<double> controller(double omega) const;
    std::complex<double> loop(const JointParams& params, double omega) const;
    JointParams params_at(double K_h) const; // H_h from the design's power law
};

struct Crossover {
    double omega;
    double pm_deg;
};

enum class Verdict { stable, marginal, unstable, no_crossover };

const char* to_string(Verdict v);

struct Margins {
    std::vector<Crossover> crossovers;
    double min_pm = std::numeric_limits<double>::infinity();
    double omega_at_min = 0.0;
    Verdict verdict = Verdict::no_crossover;
    bool multiple = false;
};

/// Locates all unity-gain crossings of |L| on [1e-2, 1e3] rad/s by
/// sign-change search plus bisection (1e-6 in log10 omega); the phase is
/// unwrapped along the grid so margins at late crossovers stay meaningful.
Margins find_margins(const LoopModel& model, const JointParams& params,
                     int pts_per_decade = 200);

struct SweepPoint {
    double K_h;
    double min_pm;
    Verdict verdict;
};

struct StabilitySweep {
    std::vector<SweepPoint> points;
    double K_at_min = 0.0;
    double min_pm = std::numeric_limits<double>::infinity();
    double pm_at_K_low = 0.0, pm_at_K_high = 0.0;
    bool worst_at_high = false; // endpoint comparison
};

StabilitySweep stability_sweep(const LoopModel& model, int n_grid = 41);

struct MarginalF {
    double f = 0.0;
    bool bounded = true; // false: PM still positive at f = 0.99
};

/// Emulates the hardware tuning protocol: bisection on f for
/// min-PM(f) = 0 at the worst-case stiffness endpoint.
MarginalF marginal_f_search(const AmplifierDesign& skeleton, const CascadeSpec& cspec,
                            const SeaModel& sea, double f_tol = 1e-3);

struct AmplificationRow {
    double omega;
    double ratio_ideal, phase_ideal_deg;
    double ratio_cascade, phase_cascade_deg;
};

/// Commanded |tau_s~/tau_c~| = |k_p F(jw)| per the amplification law
/// alpha(s) - 1 = k_p F(s); ideal and cascade both reported.
std::vector<AmplificationRow> predicted_amplification(const AmplifierDesign& design,
                                                      const LagCascade& cascade,
                                                      std::span<const double> probe_omegas);

struct BodeTrace {
    std::vector<double> omega;
    std::vector<std::complex<double>> P, F, L;
};

BodeTrace bode_trace(const LoopModel& model, const JointParams& params, double omega_lo = 1e-2,
                     double omega_hi = 1e3, int pts_per_decade = 100);

} // namespace exoamp
