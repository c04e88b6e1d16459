#pragma once

#include <array>
#include <cstdint>

// Philox4x32-10 counter-based RNG (Salmon et al., SC'11).  One block of
// four 32-bit words per counter value; bit-exact on every platform.
namespace exoamp::kern {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<uint32_t, 4> philox4x32(uint64_t ctr, uint64_t key_hi, uint64_t key_lo)
{
    uint32_t c0 = static_cast<uint32_t>(ctr);
    uint32_t c1 = static_cast<uint32_t>(ctr >> 32);
    uint32_t c2 = static_cast<uint32_t>(key_hi);
    uint32_t c3 = static_cast<uint32_t>(key_hi >> 32);
    uint32_t k0 = static_cast<uint32_t>(key_lo);
    uint32_t k1 = static_cast<uint32_t>(key_lo >> 32);

    for (int round = 0; round < 10; ++round) {
        uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c0;
        uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c2;
        uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
        uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
        uint32_t n0 = hi1 ^ c1 ^ k0;
        uint32_t n1 = lo1;
        uint32_t n2 = hi0 ^ c3 ^ k1;
        uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return {c0, c1, c2, c3};
}

// uint64 -> double in (0, 1); a 52-bit grid offset away from 0 so log() is
// safe and the SIMD mantissa-or trick reproduces it bit-exactly.
inline double u64_to_unit(uint64_t u)
{
    return static_cast<double>(u >> 12) * 0x1p-52 + 0x1p-53;
}

} // namespace exoamp::kern
