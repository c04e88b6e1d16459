#include "exoamp/fractional.hpp"

#include "exoamp/stiffness.hpp"

#include <cmath>
#include <sstream>

namespace exoamp {

double KpRule::omega_gc(double K_h) const
{
    if (!(K_h > 0.0))
        throw DomainError("KpRule::omega_gc: K_h must be > 0");
    return std::sqrt(K_h / std::sqrt((M_h + M_e) * M_h));
}

KpRule design_kp(double M_h, double M_e)
{
    if (!(M_h > 0.0) || M_e < 0.0)
        throw DomainError("design_kp: M_h must be > 0 and M_e >= 0");
    return {std::sqrt((M_h + M_e) / M_h), M_h, M_e};
}

double nominal_stiffness(double K_low, double K_high)
{
    if (!(K_low > 0.0) || !(K_high >= K_low))
        throw DomainError("nominal_stiffness: need 0 < K_low <= K_high");
    return std::sqrt(K_low * K_high);
}

double select_fractional_order(const PowerLaw& law, double K_low, double K_high,
                               double phi_deg)
{
    if (phi_deg < 0.0)
        throw DomainError("select_fractional_order: phi must be >= 0");
    if (!(K_low > 0.0) || !(K_high >= K_low))
        throw DomainError("select_fractional_order: need 0 < K_low <= K_high");
    const double K_star = (law.beta1 < 1.0) ? K_high : K_low;
    const double phase_min = loss_factor_and_ratio(K_star, law).phase_deg;
    const double f = phase_min / 90.0 - phi_deg / 90.0;
    if (!(f > 0.0)) {
        std::ostringstream os;
        os << "select_fractional_order: requested phi = " << phi_deg
           << " deg is unattainable; max attainable phi = " << phase_min
           << " deg (loss-factor phase at K = " << K_star << ")";
        throw InfeasibleError(os.str());
    }
    return f;
}

AmplifierDesign make_design(double M_h, double M_e, double K_low, double K_high,
                            const PowerLaw& law, double phi_deg)
{
    const KpRule rule = design_kp(M_h, M_e);
    AmplifierDesign d;
    d.k_p = rule.k_p;
    d.f = select_fractional_order(law, K_low, K_high, phi_deg);
    d.K_low = K_low;
    d.K_high = K_high;
    d.K_hat = nominal_stiffness(K_low, K_high);
    d.omega_gc_hat = rule.omega_gc(d.K_hat);
    d.k_f = std::pow(d.omega_gc_hat, d.f);
    d.phi_deg = phi_deg;
    d.M_h = M_h;
    d.M_e = M_e;
    d.law = law;
    return d;
}

LagCascade build_lag_cascade(double f, double k_f, int n, double p_1, double r_pp)
{
    if (n < 1)
        throw DomainError("build_lag_cascade: n must be >= 1");
    if (!(p_1 > 0.0))
        throw DomainError("build_lag_cascade: p_1 must be > 0");
    if (!(r_pp > 1.0))
        throw DomainError("build_lag_cascade: r_pp must be > 1");
    const double r_zp = std::pow(r_pp, f);
    if (!(r_zp > 1.0) || r_zp >= r_pp)
        throw DomainError("build_lag_cascade: need 0 < f < 1 (z_i must lie between poles)");

    LagCascade c;
    c.f = f;
    c.k_f = k_f;
    c.dc_gain = k_f / std::pow(p_1, f);
    c.r_zp = r_zp;
    c.r_pp = r_pp;
    c.poles.resize(static_cast<std::size_t>(n));
    c.zeros.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        c.poles[static_cast<std::size_t>(i)] = p_1 * std::pow(r_pp, i);
        c.zeros[static_cast<std::size_t>(i)] = c.poles[static_cast<std::size_t>(i)] * r_zp;
    }
    return c;
}

std::complex<double> eval_ideal(double k_f, double f, double omega)
{
    if (!(omega > 0.0))
        throw DomainError("eval_ideal: omega must be > 0");
    return std::polar(k_f * std::pow(omega, -f), -std::numbers::pi / 2.0 * f);
}

std::complex<double> eval_cascade(const LagCascade& c, double omega)
{
    if (!(omega > 0.0))
        throw DomainError("eval_cascade: omega must be > 0");
    const std::complex<double> s(0.0, omega);
    std::complex<double> v(c.dc_gain, 0.0);
    for (std::size_t i = 0; i < c.poles.size(); ++i)
        v *= (1.0 + s / c.zeros[i]) / (1.0 + s / c.poles[i]);
    return v;
}

double normalize_cascade_gain(LagCascade& c, double omega_gc_hat)
{
    const double g = std::abs(eval_cascade(c, omega_gc_hat));
    if (!(g > 0.0))
        throw NumericError("normalize_cascade_gain: cascade gain vanished");
    const double corr = 1.0 / g;
    c.k_f *= corr;
    c.dc_gain *= corr;
    return corr;
}

DiscreteCascade to_discrete(const LagCascade& c, double sample_rate_hz)
{
    if (!(sample_rate_hz > 0.0))
        throw DomainError("to_discrete: sample rate must be > 0");
    const double K = 2.0 * sample_rate_hz; // bilinear s = K (1 - z^-1)/(1 + z^-1)
    for (double p : c.poles)
        if (p >= K)
            throw DomainError("to_discrete: pole above Nyquist prewarp limit");

    DiscreteCascade d;
    d.sample_rate_hz = sample_rate_hz;
    d.gain = c.dc_gain;
    d.sections.reserve(c.poles.size());
    for (std::size_t i = 0; i < c.poles.size(); ++i) {
        const double z = c.zeros[i], p = c.poles[i];
        // (1 + s/z) / (1 + s/p) under the bilinear map, normalized by the
        // z^0 denominator coefficient
        const double a0 = 1.0 + K / p;
        d.sections.push_back({(1.0 + K / z) / a0, (1.0 - K / z) / a0, (1.0 - K / p) / a0});
    }
    return d;
}

double DiscreteCascade::dc_gain() const
{
    double g = gain;
    for (const auto& s : sections)
        g *= (s.b0 + s.b1) / (1.0 + s.a1);
    return g;
}

} // namespace exoamp
