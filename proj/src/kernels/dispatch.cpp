#include "kernels_impl.hpp"

#include "exoamp/types.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace exoamp::kern {

namespace {

enum class Mode { auto_detect, scalar, avx2 };

std::atomic<Mode> g_mode{Mode::auto_detect};

Mode env_mode()
{
    const char* e = std::getenv("EXOAMP_ISA");
    if (!e || !*e)
        return Mode::auto_detect;
    if (std::strcmp(e, "scalar") == 0)
        return Mode::scalar;
    if (std::strcmp(e, "avx2") == 0)
        return Mode::avx2;
    if (std::strcmp(e, "auto") == 0)
        return Mode::auto_detect;
    throw ConfigError(std::string("EXOAMP_ISA: unknown value '") + e +
                      "' (expected scalar|avx2|auto)");
}

Isa resolve(Mode m)
{
    if (m == Mode::auto_detect) {
        static const Mode env = env_mode();
        if (env != Mode::auto_detect)
            m = env;
    }
    switch (m) {
    case Mode::scalar:
        return Isa::scalar;
    case Mode::avx2:
        if (!cpu_has_avx2())
            throw ConfigError("AVX2 kernels requested but not available on this CPU/build");
        return Isa::avx2;
    case Mode::auto_detect:
    default:
        return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    }
}

} // namespace

bool cpu_has_avx2()
{
#if defined(EXOAMP_X86) && defined(EXOAMP_HAVE_AVX2)
    static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return has;
#else
    return false;
#endif
}

Isa active_isa() { return resolve(g_mode.load()); }

void force_isa(Isa isa)
{
    if (isa == Isa::avx2 && !cpu_has_avx2())
        throw ConfigError("force_isa(avx2): not available on this CPU/build");
    g_mode.store(isa == Isa::avx2 ? Mode::avx2 : Mode::scalar);
}

void reset_isa() { g_mode.store(Mode::auto_detect); }

void sinusoid(double* out, std::size_t n, double t0, double dt, double omega,
              double amp_c, double amp_s, double dc)
{
#if defined(EXOAMP_X86) && defined(EXOAMP_HAVE_AVX2)
    if (active_isa() == Isa::avx2)
        return sinusoid_avx2(out, n, t0, dt, omega, amp_c, amp_s, dc);
#endif
    sinusoid_scalar(out, n, t0, dt, omega, amp_c, amp_s, dc);
}

PhasorSums phasor_sums(const double* x, std::size_t n, double t0, double dt, double omega)
{
#if defined(EXOAMP_X86) && defined(EXOAMP_HAVE_AVX2)
    if (active_isa() == Isa::avx2)
        return phasor_sums_avx2(x, n, t0, dt, omega);
#endif
    return phasor_sums_scalar(x, n, t0, dt, omega);
}

void gaussian_add(double* x, std::size_t n, double sigma,
                  uint64_t key_hi, uint64_t key_lo, uint64_t ctr0)
{
#if defined(EXOAMP_X86) && defined(EXOAMP_HAVE_AVX2)
    if (active_isa() == Isa::avx2)
        return gaussian_add_avx2(x, n, sigma, key_hi, key_lo, ctr0);
#endif
    gaussian_add_scalar(x, n, sigma, key_hi, key_lo, ctr0);
}

} // namespace exoamp::kern
