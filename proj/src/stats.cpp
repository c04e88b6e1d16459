#include "exoamp/stats.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace exoamp {

const char* to_string(Scope s)
{
    switch (s) {
    case Scope::subject: return "subject";
    case Scope::experiment: return "experiment";
    case Scope::all: return "all";
    }
    return "?";
}

const char* to_string(Comparison c)
{
    return c == Comparison::M1_vs_M3 ? "M1-vs-M3" : "M2-vs-M3";
}

RssTable::RssTable(int n_sub, int n_exp, int n_samples)
    : n_sub_(n_sub), n_exp_(n_exp), n_samples_(n_samples)
{
    if (n_sub < 1 || n_exp < 1)
        throw ConfigError("RssTable: dimensions must be >= 1");
}

void RssTable::set(int sub, int exp, ModelKind kind, double rss)
{
    if (sub < 0 || sub >= n_sub_ || exp < 0 || exp >= n_exp_)
        throw ConfigError("RssTable::set: index out of range");
    if (rss < 0.0)
        throw DomainError("RssTable::set: rss must be >= 0");
    cells_[{sub, exp, kind}] = rss;
}

double RssTable::get(int sub, int exp, ModelKind kind) const
{
    auto it = cells_.find({sub, exp, kind});
    if (it == cells_.end()) {
        std::ostringstream os;
        os << "RssTable: missing cell (sub=" << sub << ", exp=" << exp << ", model="
           << to_string(kind) << ")";
        throw ConfigError(os.str());
    }
    return it->second;
}

bool RssTable::complete() const
{
    for (int s = 0; s < n_sub_; ++s)
        for (int e = 0; e < n_exp_; ++e)
            for (ModelKind k : {ModelKind::M1, ModelKind::M2, ModelKind::M3})
                if (!cells_.count({s, e, k}))
                    return false;
    return true;
}

double aggregate_rss(const RssTable& table, Scope scope, int index, ModelKind kind)
{
    double sum = 0.0;
    switch (scope) {
    case Scope::subject:
        for (int e = 0; e < table.n_exp(); ++e)
            sum += table.get(index, e, kind);
        return sum;
    case Scope::experiment:
        for (int s = 0; s < table.n_sub(); ++s)
            sum += table.get(s, index, kind);
        return sum;
    case Scope::all:
        for (int s = 0; s < table.n_sub(); ++s)
            for (int e = 0; e < table.n_exp(); ++e)
                sum += table.get(s, e, kind);
        return sum;
    }
    throw ConfigError("aggregate_rss: bad scope");
}

FTestReport f_statistic(const RssTable& table, Scope scope, int index, Comparison cmp, double p)
{
    const int n = table.n_samples();
    if (n < 3)
        throw ConfigError("f_statistic: need n >= 3 samples per experiment");

    const ModelKind mi = (cmp == Comparison::M1_vs_M3) ? ModelKind::M1 : ModelKind::M2;
    const double r_mi = aggregate_rss(table, scope, index, mi);
    const double r_m3 = aggregate_rss(table, scope, index, ModelKind::M3);
    if (r_m3 == 0.0)
        throw NumericError("f_statistic: R_M3 == 0 (perfect fit, statistic degenerate)");

    // d1 carries the (4-3) * n_exp (resp. n_sub) structure of Eq. (ft);
    // the group factors cancel to d2/d1 = 2n-4 but df are reported as written.
    int group = 0;
    switch (scope) {
    case Scope::subject: group = table.n_exp(); break;
    case Scope::experiment: group = table.n_sub(); break;
    case Scope::all: group = table.n_exp() * table.n_sub(); break;
    }
    const int d1 = group;
    const int d2 = (2 * n - 4) * group;

    FTestReport rep;
    rep.scope = scope;
    rep.index = (scope == Scope::all) ? -1 : index;
    rep.comparison = cmp;
    rep.F = (r_mi - r_m3) / r_m3 * (static_cast<double>(d2) / d1);
    rep.d1 = d1;
    rep.d2 = d2;
    rep.F_crit = f_critical(p, d1, d2);
    rep.significant = rep.F > rep.F_crit;
    return rep;
}

namespace {

double ln_gamma(double x)
{
    // Lanczos, g=7, n=9; good to ~1e-14 for x > 0.
    static const double c[9] = {
        0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - ln_gamma(1.0 - x);
    x -= 1.0;
    double a = c[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i)
        a += c[i] / (x + i);
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

// Continued fraction for I_x(a,b), modified Lentz.
double betacf(double a, double b, double x)
{
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin)
        d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin)
            d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin)
            d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            return h;
    }
    throw NumericError("incomplete beta: continued fraction did not converge (a=" +
                       std::to_string(a) + ", b=" + std::to_string(b) + ", x=" +
                       std::to_string(x) + ")");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("regularized_incomplete_beta: a, b must be > 0");
    if (x < 0.0 || x > 1.0)
        throw DomainError("regularized_incomplete_beta: x must be in [0, 1]");
    if (x == 0.0 || x == 1.0)
        return x;
    const double ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b; // symmetry switch
}

double f_cdf(double x, int d1, int d2)
{
    if (d1 < 1 || d2 < 1)
        throw DomainError("f_cdf: degrees of freedom must be >= 1");
    if (x <= 0.0)
        return 0.0;
    const double xa = d1 * x / (d1 * x + d2);
    return regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, xa);
}

double f_critical(double p, int d1, int d2)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("f_critical: p must be in (0, 1)");
    if (d1 < 1 || d2 < 1)
        throw DomainError("f_critical: degrees of freedom must be >= 1");

    const double target = 1.0 - p;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (f_cdf(hi, d1, d2) < target) {
        hi *= 2.0;
        if (++guard > 200)
            throw NumericError("f_critical: bracket expansion failed (p=" +
                               std::to_string(p) + ")");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_cdf(mid, d1, d2) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * (1.0 + hi))
            break;
    }
    return 0.5 * (lo + hi);
}

} // namespace exoamp
