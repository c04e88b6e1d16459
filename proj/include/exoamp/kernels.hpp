#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by synthesis and sample extraction.
// Each kernel has a scalar reference implementation and an AVX2 variant;
// the active one is selected at runtime (cpuid), overridable through
// force_isa() or the EXOAMP_ISA environment variable (scalar|avx2|auto).
namespace exoamp::kern {

enum class Isa { scalar, avx2 };

bool cpu_has_avx2();
Isa active_isa();
void force_isa(Isa isa);
void reset_isa(); // back to auto detection

/// Accumulated sums for the least-squares fit of x(t) to
/// a*cos(w t) + b*sin(w t) + c over n uniform samples t = t0 + i*dt.
struct PhasorSums {
    double cc = 0, ss = 0, cs = 0, c = 0, s = 0; // Gram entries
    double xc = 0, xs = 0, x = 0;                // data projections
    std::size_t n = 0;
};

/// out[i] = dc + amp_c*cos(w*(t0+i*dt)) + amp_s*sin(w*(t0+i*dt))
void sinusoid(double* out, std::size_t n, double t0, double dt, double omega,
              double amp_c, double amp_s, double dc);

PhasorSums phasor_sums(const double* x, std::size_t n, double t0, double dt, double omega);

/// x[i] += sigma * z_i with z_i standard normal, generated from a
/// counter-based stream: Philox4x32-10 keyed by (key_hi, key_lo), block
/// index ctr0 + i/2, Box-Muller transform.  Random access: disjoint
/// [ctr0, ctr0+n/2) ranges are independent, so streams may be split
/// freely across channels and experiments.
void gaussian_add(double* x, std::size_t n, double sigma,
                  uint64_t key_hi, uint64_t key_lo, uint64_t ctr0);

} // namespace exoamp::kern
