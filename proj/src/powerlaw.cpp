#include "exoamp/powerlaw.hpp"

#include <cmath>

namespace exoamp {

PowerLaw fit_power_law(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 2)
        throw DomainError("fit_power_law: need at least 2 points, got " +
                          std::to_string(points.size()));
    double sx = 0, sy = 0;
    for (const auto& [K, H] : points) {
        if (!(K > 0.0) || !(H > 0.0))
            throw DomainError("fit_power_law: K_h and H_h must be > 0 (filter flagged fits)");
        sx += std::log10(K);
        sy += std::log10(H);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [K, H] : points) {
        const double dx = std::log10(K) - mx;
        const double dy = std::log10(H) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw DomainError("fit_power_law: all K_h identical; slope undefined");
    PowerLaw law;
    law.beta1 = sxy / sxx;
    law.beta0 = my - law.beta1 * mx;
    const double ss_res = syy - law.beta1 * sxy;
    law.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return law;
}

double geometric_average(std::span<const double> values)
{
    if (values.empty())
        throw DomainError("geometric_average: empty input");
    double s = 0;
    for (double v : values) {
        if (!(v > 0.0))
            throw DomainError("geometric_average: values must be > 0");
        s += std::log10(v);
    }
    return std::pow(10.0, s / static_cast<double>(values.size()));
}

double predict_H(const PowerLaw& law, double K_h)
{
    if (!(K_h > 0.0))
        throw DomainError("predict_H: K_h must be > 0");
    return std::pow(10.0, law.beta0) * std::pow(K_h, law.beta1);
}

} // namespace exoamp
