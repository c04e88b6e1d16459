#include "kernels_impl.hpp"
#include "philox.hpp"

#include <cmath>
#include <numbers>

namespace exoamp::kern {

void sinusoid_scalar(double* out, std::size_t n, double t0, double dt, double omega,
                     double amp_c, double amp_s, double dc)
{
    const double step = omega * dt;
    const double rc = std::cos(step);
    const double rs = std::sin(step);
    std::size_t i = 0;
    while (i < n) {
        const std::size_t block = std::min(kRenormBlock, n - i);
        const double phase = omega * (t0 + static_cast<double>(i) * dt);
        double c = std::cos(phase);
        double s = std::sin(phase);
        for (std::size_t j = 0; j < block; ++j) {
            out[i + j] = dc + amp_c * c + amp_s * s;
            const double cn = c * rc - s * rs;
            s = s * rc + c * rs;
            c = cn;
        }
        i += block;
    }
}

PhasorSums phasor_sums_scalar(const double* x, std::size_t n, double t0, double dt, double omega)
{
    PhasorSums acc;
    acc.n = n;
    const double step = omega * dt;
    const double rc = std::cos(step);
    const double rs = std::sin(step);
    std::size_t i = 0;
    while (i < n) {
        const std::size_t block = std::min(kRenormBlock, n - i);
        const double phase = omega * (t0 + static_cast<double>(i) * dt);
        double c = std::cos(phase);
        double s = std::sin(phase);
        for (std::size_t j = 0; j < block; ++j) {
            const double xi = x[i + j];
            acc.cc += c * c;
            acc.ss += s * s;
            acc.cs += c * s;
            acc.c += c;
            acc.s += s;
            acc.xc += xi * c;
            acc.xs += xi * s;
            acc.x += xi;
            const double cn = c * rc - s * rs;
            s = s * rc + c * rs;
            c = cn;
        }
        i += block;
    }
    return acc;
}

void gaussian_add_scalar(double* x, std::size_t n, double sigma,
                         uint64_t key_hi, uint64_t key_lo, uint64_t ctr0)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    // One Philox block yields two uniforms -> one Box-Muller pair.
    for (std::size_t i = 0; i < n; i += 2) {
        const auto w = philox4x32(ctr0 + i / 2, key_hi, key_lo);
        const double u1 = u64_to_unit((static_cast<uint64_t>(w[0]) << 32) | w[1]);
        const double u2 = u64_to_unit((static_cast<uint64_t>(w[2]) << 32) | w[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = two_pi * u2;
        x[i] += sigma * (r * std::cos(a));
        if (i + 1 < n)
            x[i + 1] += sigma * (r * std::sin(a));
    }
}

} // namespace exoamp::kern
