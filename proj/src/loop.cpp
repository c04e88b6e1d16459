#include "exoamp/loop.hpp"

#include "exoamp/powerlaw.hpp"
#include "exoamp/stiffness.hpp"

#include <algorithm>
#include <cmath>

namespace exoamp {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::marginal: return "marginal";
    case Verdict::unstable: return "unstable";
    case Verdict::no_crossover: return "no_crossover";
    }
    return "?";
}

std::complex<double> plant_response(const JointParams& params, double M_e, const SeaModel& sea,
                                    double omega)
{
    const std::complex<double> s_h = human_stiffness(params, ModelKind::M2, omega).value;
    const std::complex<double> s_he =
        coupled_stiffness(params, CouplingConfig{M_e, 1.0}, ModelKind::M2, omega).value;
    return s_h / s_he * sea_response(sea, omega);
}

std::complex<double> LoopModel::controller(double omega) const
{
    return use_cascade ? eval_cascade(cascade, omega) : eval_ideal(design.k_f, design.f, omega);
}

std::complex<double> LoopModel::loop(const JointParams& params, double omega) const
{
    return design.k_p * controller(omega) * plant_response(params, design.M_e, sea, omega);
}

JointParams LoopModel::params_at(double K_h) const
{
    JointParams p;
    p.K_h = K_h;
    p.H_h = predict_H(design.law, K_h);
    p.M_h = design.M_h;
    return p;
}

namespace {

constexpr double kBandLo = 1e-2;
constexpr double kBandHi = 1e3;

Verdict classify(double min_pm)
{
    if (min_pm <= 0.0)
        return Verdict::unstable;
    if (min_pm <= 0.25)
        return Verdict::marginal;
    return Verdict::stable;
}

} // namespace

Margins find_margins(const LoopModel& model, const JointParams& params, int pts_per_decade)
{
    if (pts_per_decade < 50)
        throw ConfigError("find_margins: need >= 50 points per decade");
    const double decades = std::log10(kBandHi / kBandLo);
    const int n = static_cast<int>(std::ceil(decades * pts_per_decade)) + 1;

    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> L(static_cast<std::size_t>(n));
    std::vector<double> phase(static_cast<std::size_t>(n)); // unwrapped, deg
    for (int i = 0; i < n; ++i) {
        w[i] = kBandLo * std::pow(10.0, decades * i / (n - 1));
        L[i] = model.loop(params, w[i]);
    }
    phase[0] = deg(std::arg(L[0]));
    for (int i = 1; i < n; ++i)
        phase[i] = phase[i - 1] + deg(std::arg(L[i] / L[i - 1]));

    Margins m;
    for (int i = 0; i + 1 < n; ++i) {
        const double g0 = std::abs(L[i]) - 1.0;
        const double g1 = std::abs(L[i + 1]) - 1.0;
        if (g0 == 0.0 || g0 * g1 >= 0.0)
            continue;
        double lo = std::log10(w[i]), hi = std::log10(w[i + 1]);
        const bool rising = g1 > 0.0;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            const double g = std::abs(model.loop(params, std::pow(10.0, mid))) - 1.0;
            if ((g > 0.0) == rising)
                hi = mid;
            else
                lo = mid;
        }
        const double wc = std::pow(10.0, 0.5 * (lo + hi));
        const double ph =
            phase[i] + deg(std::arg(model.loop(params, wc) / L[i]));
        m.crossovers.push_back({wc, 180.0 + ph});
    }

    if (m.crossovers.empty()) {
        m.verdict = Verdict::no_crossover;
        return m;
    }
    m.multiple = m.crossovers.size() > 1;
    for (const auto& c : m.crossovers) {
        if (c.pm_deg < m.min_pm) {
            m.min_pm = c.pm_deg;
            m.omega_at_min = c.omega;
        }
    }
    m.verdict = classify(m.min_pm);
    return m;
}

StabilitySweep stability_sweep(const LoopModel& model, int n_grid)
{
    if (n_grid < 20)
        throw ConfigError("stability_sweep: need a grid of >= 20 points");
    const double K_lo = model.design.K_low, K_hi = model.design.K_high;

    StabilitySweep sweep;
    sweep.points.reserve(static_cast<std::size_t>(n_grid));
    for (int i = 0; i < n_grid; ++i) {
        const double K = K_lo * std::pow(K_hi / K_lo, static_cast<double>(i) / (n_grid - 1));
        const Margins m = find_margins(model, model.params_at(K));
        const double pm = m.crossovers.empty() ? std::numeric_limits<double>::infinity()
                                               : m.min_pm;
        sweep.points.push_back({K, pm, m.verdict});
        if (pm < sweep.min_pm) {
            sweep.min_pm = pm;
            sweep.K_at_min = K;
        }
    }
    sweep.pm_at_K_low = sweep.points.front().min_pm;
    sweep.pm_at_K_high = sweep.points.back().min_pm;
    sweep.worst_at_high = sweep.pm_at_K_high < sweep.pm_at_K_low;
    return sweep;
}

MarginalF marginal_f_search(const AmplifierDesign& skeleton, const CascadeSpec& cspec,
                            const SeaModel& sea, double f_tol)
{
    const double K_star = (skeleton.law.beta1 < 1.0) ? skeleton.K_high : skeleton.K_low;

    const auto min_pm_at = [&](double f) {
        AmplifierDesign d = skeleton;
        d.f = f;
        d.k_f = std::pow(d.omega_gc_hat, f);
        LoopModel model{d, build_lag_cascade(d, cspec), true, sea};
        // dense grid: small loss factors make the resonance phase step sharp
        const Margins m = find_margins(model, model.params_at(K_star), 400);
        return m.crossovers.empty() ? std::numeric_limits<double>::infinity() : m.min_pm;
    };

    double lo = 1e-3, hi = 0.99;
    if (min_pm_at(hi) > 0.0)
        return {hi, false};
    if (min_pm_at(lo) <= 0.0)
        throw InfeasibleError("marginal_f_search: loop unstable even as f -> 0");
    while (hi - lo > f_tol) {
        const double mid = 0.5 * (lo + hi);
        if (min_pm_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), true};
}

std::vector<AmplificationRow> predicted_amplification(const AmplifierDesign& design,
                                                      const LagCascade& cascade,
                                                      std::span<const double> probe_omegas)
{
    std::vector<AmplificationRow> rows;
    rows.reserve(probe_omegas.size());
    for (double w : probe_omegas) {
        const std::complex<double> fi = eval_ideal(design.k_f, design.f, w);
        const std::complex<double> fc = eval_cascade(cascade, w);
        rows.push_back({w, design.k_p * std::abs(fi), deg(std::arg(fi)),
                        design.k_p * std::abs(fc), deg(std::arg(fc))});
    }
    return rows;
}

BodeTrace bode_trace(const LoopModel& model, const JointParams& params, double omega_lo,
                     double omega_hi, int pts_per_decade)
{
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
        throw DomainError("bode_trace: need 0 < omega_lo < omega_hi");
    const double decades = std::log10(omega_hi / omega_lo);
    const int n = static_cast<int>(std::ceil(decades * pts_per_decade)) + 1;
    BodeTrace tr;
    tr.omega.resize(static_cast<std::size_t>(n));
    tr.P.resize(static_cast<std::size_t>(n));
    tr.F.resize(static_cast<std::size_t>(n));
    tr.L.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = omega_lo * std::pow(10.0, decades * i / (n - 1));
        tr.omega[i] = w;
        tr.P[i] = plant_response(params, model.design.M_e, model.sea, w);
        tr.F[i] = model.controller(w);
        tr.L[i] = model.design.k_p * tr.F[i] * tr.P[i];
    }
    return tr;
}

} // namespace exoamp
