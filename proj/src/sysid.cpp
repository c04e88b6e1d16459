#include "exoamp/sysid.hpp"

#include "exoamp/kernels.hpp"
#include "exoamp/stiffness.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace exoamp {

namespace {

std::complex<double> window_phasor(const double* x, std::size_t n, double t0, double dt,
                                   double omega)
{
    const kern::PhasorSums ps = kern::phasor_sums(x, n, t0, dt, omega);
    Eigen::Matrix3d G;
    G << ps.cc, ps.cs, ps.c,
         ps.cs, ps.ss, ps.s,
         ps.c,  ps.s,  static_cast<double>(ps.n);
    Eigen::Vector3d b(ps.xc, ps.xs, ps.x);
    const Eigen::Vector3d sol = G.ldlt().solve(b);
    // x(t) = a cos + b sin ->  X = a - j b  (x = Re(X e^{jwt}))
    return {sol(0), -sol(1)};
}

} // namespace

FrequencySample extract_sample(const TimeSeries& ts, const PeriodMarker& marker,
                               double min_theta_phasor)
{
    if (!(ts.dt > 0.0) || ts.size() == 0)
        throw ConfigError("extract_sample: empty time series");
    const double mid = marker.t_start + (marker.t_end - marker.t_start) / 2.0;
    const auto i0 = static_cast<std::size_t>(std::llround(mid / ts.dt));
    const auto i1 = static_cast<std::size_t>(std::llround(marker.t_end / ts.dt));
    if (i1 <= i0 || i1 > ts.size())
        throw ConfigError("extract_sample: marker window outside the series");

    const std::size_t n = i1 - i0;
    const double t0 = static_cast<double>(i0) * ts.dt;
    const std::complex<double> th =
        window_phasor(ts.theta_e.data() + i0, n, t0, ts.dt, marker.omega);
    const std::complex<double> tc =
        window_phasor(ts.tau_c.data() + i0, n, t0, ts.dt, marker.omega);

    if (std::abs(th) < min_theta_phasor)
        throw NumericError("extract_sample: degenerate excitation, |theta phasor| = " +
                           std::to_string(std::abs(th)) + " rad below threshold");
    return {marker.omega, tc / th, t0, marker.t_end};
}

FitResult fit_model(std::span<const FrequencySample> samples, ModelKind kind)
{
    if (kind == ModelKind::Reduced)
        throw ConfigError("fit_model: Reduced is evaluation-only; fit M2 and a power law");
    const int p = (kind == ModelKind::M3) ? 4 : 3;
    const int n = static_cast<int>(samples.size());
    if (n < (kind == ModelKind::M3 ? 4 : 3))
        throw ConfigError(std::string("fit_model: need at least ") +
                          (kind == ModelKind::M3 ? "4" : "3") + " samples for " +
                          to_string(kind));

    // columns: M1 (K, B, M); M2 (K, H, M); M3 (K, B, H, M)
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, p);
    Eigen::VectorXd y(2 * n);
    for (int i = 0; i < n; ++i) {
        const double w = samples[i].omega;
        A(i, 0) = 1.0;
        A(i, p - 1) = -w * w;
        y(i) = samples[i].S.real();
        switch (kind) {
        case ModelKind::M1:
            A(n + i, 1) = w;
            break;
        case ModelKind::M2:
            A(n + i, 1) = 1.0;
            break;
        default: // M3
            A(n + i, 1) = w;
            A(n + i, 2) = 1.0;
            break;
        }
        y(n + i) = samples[i].S.imag();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(p - 1);
    const double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(smin > smax * 1e-12))
        throw NumericError("fit_model: rank-deficient design matrix, condition number " +
                           std::to_string(cond));
    const Eigen::VectorXd beta = svd.solve(y);

    FitResult fit;
    fit.kind = kind;
    fit.cond = cond;
    fit.params.K_h = beta(0);
    fit.params.M_h = beta(p - 1);
    if (kind == ModelKind::M1) {
        fit.params.B_h = beta(1);
    } else if (kind == ModelKind::M2) {
        fit.params.H_h = beta(1);
    } else {
        fit.params.B_h = beta(1);
        fit.params.H_h = beta(2);
    }
    fit.params.flagged = fit.params.negative_damping();

    const Eigen::VectorXd r = y - A * beta;
    fit.rss = r.squaredNorm();
    const double mean = y.mean();
    const double tss = (y.array() - mean).matrix().squaredNorm();
    fit.r2 = (tss > 0.0) ? 1.0 - fit.rss / tss : 1.0;
    fit.residuals.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        fit.residuals.emplace_back(-r(i), -r(n + i)); // model minus sample
    return fit;
}

ComplexResponse recover_coupled(const FitResult& fit, const CouplingConfig& coupling,
                                double omega)
{
    return coupled_stiffness(fit.params, coupling, fit.kind, omega);
}

PhaseStats phase_shift_stats(const std::vector<std::vector<FrequencySample>>& experiments,
                             int exclude_last)
{
    std::vector<double> phases;
    for (const auto& exp : experiments) {
        const int keep = static_cast<int>(exp.size()) - exclude_last;
        for (int i = 0; i < keep; ++i)
            phases.push_back(deg(std::arg(exp[static_cast<std::size_t>(i)].S)));
    }
    if (phases.empty())
        throw ConfigError("phase_shift_stats: no samples after exclusion");

    double mean = 0.0;
    for (double v : phases)
        mean += v;
    mean /= static_cast<double>(phases.size());
    double var = 0.0;
    for (double v : phases)
        var += (v - mean) * (v - mean);
    const auto n = static_cast<double>(phases.size());
    const double stderr_ = (phases.size() > 1) ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return {mean, stderr_, static_cast<int>(phases.size())};
}

} // namespace exoamp
