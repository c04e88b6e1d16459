#pragma once

#include "exoamp/kernels.hpp"

// Per-ISA entry points; dispatch.cpp wires them up.
namespace exoamp::kern {

// Trig recurrences are re-anchored from libm every kRenormBlock samples,
// keeping both ISA paths within ~1e-13 of exact over arbitrarily long runs.
constexpr std::size_t kRenormBlock = 256;

void sinusoid_scalar(double* out, std::size_t n, double t0, double dt, double omega,
                     double amp_c, double amp_s, double dc);
PhasorSums phasor_sums_scalar(const double* x, std::size_t n, double t0, double dt, double omega);
void gaussian_add_scalar(double* x, std::size_t n, double sigma,
                         uint64_t key_hi, uint64_t key_lo, uint64_t ctr0);

#if defined(__x86_64__) || defined(_M_X64)
#define EXOAMP_X86 1
void sinusoid_avx2(double* out, std::size_t n, double t0, double dt, double omega,
                   double amp_c, double amp_s, double dc);
PhasorSums phasor_sums_avx2(const double* x, std::size_t n, double t0, double dt, double omega);
void gaussian_add_avx2(double* x, std::size_t n, double sigma,
                       uint64_t key_hi, uint64_t key_lo, uint64_t ctr0);
#endif

} // namespace exoamp::kern
