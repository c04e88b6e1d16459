#include "kernels_impl.hpp"

#if defined(EXOAMP_X86) && defined(EXOAMP_HAVE_AVX2)

#include "philox.hpp"

#include <cmath>
#include <immintrin.h>
#include <numbers>

namespace exoamp::kern {

namespace {

// ---- vector math ---------------------------------------------------------

// natural log for normal positive doubles, ~3e-14 relative.
// x = m * 2^k with m in [sqrt(1/2), sqrt(2)); ln m via atanh series.
inline __m256d log_pd(__m256d x)
{
    const __m256i bits = _mm256_castpd_si256(x);
    __m256i kq = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits)); // [1, 2)

    const __m256d sqrt2 = _mm256_set1_pd(1.41421356237309515);
    const __m256d ge = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), ge);
    kq = _mm256_sub_epi64(kq, _mm256_castpd_si256(ge)); // k += 1 where ge (mask == -1)

    // int64 lanes -> double (k is tiny, low 32 bits suffice)
    const __m256i pack_idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    const __m128i k32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(kq, pack_idx));
    const __m256d k = _mm256_cvtepi32_pd(k32);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d t = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d t2 = _mm256_mul_pd(t, t);
    // 2*atanh(t) = 2t(1 + t^2/3 + t^4/5 + ...), |t| <= 0.1716
    __m256d p = _mm256_set1_pd(1.0 / 15.0);
    p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, t2, one);
    const __m256d lnm = _mm256_mul_pd(_mm256_add_pd(t, t), p);

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_add_pd(_mm256_fmadd_pd(k, ln2_hi, lnm), _mm256_mul_pd(k, ln2_lo));
}

// sin and cos for x in [0, 2*pi + eps]; fdlibm kernel polynomials.
inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out)
{
    const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
    const __m256d jd = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // Cody-Waite 3-term pi/2 split
    const __m256d c1 = _mm256_set1_pd(1.57079632673412561417e+00);
    const __m256d c2 = _mm256_set1_pd(6.07710050650619224932e-11);
    const __m256d c3 = _mm256_set1_pd(2.02226624879595063154e-21);
    __m256d r = _mm256_fnmadd_pd(jd, c1, x);
    r = _mm256_fnmadd_pd(jd, c2, r);
    r = _mm256_fnmadd_pd(jd, c3, r);

    const __m256d z = _mm256_mul_pd(r, r);
    // sin(r) = r + r^3 * S(z)
    __m256d sp = _mm256_set1_pd(1.58969099521155010221e-10);
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-2.50507602534068634195e-08));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(2.75573137070700676789e-06));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.98412698298579493134e-04));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(8.33333333332248946124e-03));
    sp = _mm256_fmadd_pd(sp, z, _mm256_set1_pd(-1.66666666666666324348e-01));
    const __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(z, r), sp, r);
    // cos(r) = 1 - z/2 + z^2 * C(z)
    __m256d cp = _mm256_set1_pd(-1.13596475577881948265e-11);
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(2.08757232129817482790e-09));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-2.75573143513906633035e-07));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(2.48015872894767294178e-05));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(-1.38888888888741095749e-03));
    cp = _mm256_fmadd_pd(cp, z, _mm256_set1_pd(4.16666666666666019037e-02));
    __m256d cr = _mm256_fmadd_pd(_mm256_mul_pd(z, z), cp,
                                 _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5),
                                                  _mm256_set1_pd(1.0)));

    const __m128i j32 = _mm256_cvtpd_epi32(jd);
    const __m256i j = _mm256_cvtepi32_epi64(j32);
    const __m256i one64 = _mm256_set1_epi64x(1);
    const __m256i two64 = _mm256_set1_epi64x(2);
    const __m256i swap_i = _mm256_cmpeq_epi64(_mm256_and_si256(j, one64), one64);
    const __m256d swap = _mm256_castsi256_pd(swap_i);

    const __m256d s1 = _mm256_blendv_pd(sr, cr, swap);
    const __m256d c1v = _mm256_blendv_pd(cr, sr, swap);

    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    const __m256i sneg_i = _mm256_cmpeq_epi64(_mm256_and_si256(j, two64), two64);
    const __m256i cneg_i = _mm256_cmpeq_epi64(
        _mm256_and_si256(_mm256_add_epi64(j, one64), two64), two64);
    const __m256d sflip = _mm256_and_pd(_mm256_castsi256_pd(sneg_i), sign_bit);
    const __m256d cflip = _mm256_and_pd(_mm256_castsi256_pd(cneg_i), sign_bit);
    s_out = _mm256_xor_pd(s1, sflip);
    c_out = _mm256_xor_pd(c1v, cflip);
}

// ---- Philox4x32-10, eight blocks per call --------------------------------

struct Philox8 {
    __m256i w0, w1, w2, w3; // 8 lanes of u32 per output word
};

inline __m256i mullo_hi(__m256i a, uint32_t m, __m256i& hi)
{
    const __m256i mv = _mm256_set1_epi64x(static_cast<int64_t>(static_cast<uint64_t>(m)));
    const __m256i pe = _mm256_mul_epu32(a, mv);                          // lanes 0,2,4,6
    const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), mv);   // lanes 1,3,5,7
    const __m256i hi_mask = _mm256_set1_epi64x(static_cast<int64_t>(0xFFFFFFFF00000000ULL));
    hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), _mm256_and_si256(po, hi_mask), 0xAA);
    return _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0xAA);
}

inline Philox8 philox8(uint64_t ctr_base, uint64_t key_hi, uint64_t key_lo)
{
    // counters ctr_base .. ctr_base+7, split into 32-bit words
    const __m256i idxA = _mm256_setr_epi64x(0, 1, 2, 3);
    const __m256i idxB = _mm256_setr_epi64x(4, 5, 6, 7);
    const __m256i base = _mm256_set1_epi64x(static_cast<int64_t>(ctr_base));
    const __m256i ctrA = _mm256_add_epi64(base, idxA);
    const __m256i ctrB = _mm256_add_epi64(base, idxB);
    // pack low/high 32-bit halves of the two u64 vectors into 8-lane u32 vectors
    const __m256 fA = _mm256_castsi256_ps(ctrA);
    const __m256 fB = _mm256_castsi256_ps(ctrB);
    const __m256i fix = _mm256_setr_epi32(0, 1, 4, 5, 2, 3, 6, 7);
    __m256i c0 = _mm256_permutevar8x32_epi32(
        _mm256_castps_si256(_mm256_shuffle_ps(fA, fB, 0x88)), fix);
    __m256i c1 = _mm256_permutevar8x32_epi32(
        _mm256_castps_si256(_mm256_shuffle_ps(fA, fB, 0xDD)), fix);
    __m256i c2 = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(key_hi)));
    __m256i c3 = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(key_hi >> 32)));
    __m256i k0 = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(key_lo)));
    __m256i k1 = _mm256_set1_epi32(static_cast<int>(static_cast<uint32_t>(key_lo >> 32)));

    for (int round = 0; round < 10; ++round) {
        __m256i hi0, hi1;
        const __m256i lo0 = mullo_hi(c0, kPhiloxM0, hi0);
        const __m256i lo1 = mullo_hi(c2, kPhiloxM1, hi1);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
        c0 = n0;
        c1 = lo1;
        c2 = n2;
        c3 = lo0;
        k0 = _mm256_add_epi32(k0, _mm256_set1_epi32(static_cast<int>(kPhiloxW0)));
        k1 = _mm256_add_epi32(k1, _mm256_set1_epi32(static_cast<int>(kPhiloxW1)));
    }
    return {c0, c1, c2, c3};
}

// (hi<<32)|lo per lane pair -> u64 blocks in counter order, as two vectors
inline void join_u64(__m256i hi, __m256i lo, __m256i& blocks0123, __m256i& blocks4567)
{
    const __m256i a = _mm256_unpacklo_epi32(lo, hi); // blocks 0,1 | 4,5
    const __m256i b = _mm256_unpackhi_epi32(lo, hi); // blocks 2,3 | 6,7
    blocks0123 = _mm256_permute2x128_si256(a, b, 0x20);
    blocks4567 = _mm256_permute2x128_si256(a, b, 0x31);
}

// u64 >> 12 -> double in (0, 1), bit-exact with the scalar u64_to_unit
inline __m256d u64_to_unit_pd(__m256i u)
{
    const __m256i shifted = _mm256_srli_epi64(u, 12); // < 2^52: fits the mantissa
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL); // 2^52
    const __m256d d = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(shifted, magic)),
                                    _mm256_set1_pd(0x1p52));
    return _mm256_fmadd_pd(d, _mm256_set1_pd(0x1p-52), _mm256_set1_pd(0x1p-53));
}

inline double reduce_add(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    const __m128d sum1 = _mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2));
    return _mm_cvtsd_f64(sum1);
}

} // namespace

void sinusoid_avx2(double* out, std::size_t n, double t0, double dt, double omega,
                   double amp_c, double amp_s, double dc)
{
    const double step4 = 4.0 * omega * dt;
    const __m256d rc = _mm256_set1_pd(std::cos(step4));
    const __m256d rs = _mm256_set1_pd(std::sin(step4));
    const __m256d vac = _mm256_set1_pd(amp_c);
    const __m256d vas = _mm256_set1_pd(amp_s);
    const __m256d vdc = _mm256_set1_pd(dc);

    std::size_t i = 0;
    while (i + 4 <= n) {
        const std::size_t block_end = std::min(i + kRenormBlock, n & ~std::size_t{3});
        const double phase = omega * (t0 + static_cast<double>(i) * dt);
        const double d = omega * dt;
        __m256d c = _mm256_setr_pd(std::cos(phase), std::cos(phase + d),
                                   std::cos(phase + 2 * d), std::cos(phase + 3 * d));
        __m256d s = _mm256_setr_pd(std::sin(phase), std::sin(phase + d),
                                   std::sin(phase + 2 * d), std::sin(phase + 3 * d));
        for (; i + 4 <= block_end; i += 4) {
            const __m256d v = _mm256_fmadd_pd(vac, c, _mm256_fmadd_pd(vas, s, vdc));
            _mm256_storeu_pd(out + i, v);
            const __m256d cn = _mm256_fmsub_pd(c, rc, _mm256_mul_pd(s, rs));
            s = _mm256_fmadd_pd(s, rc, _mm256_mul_pd(c, rs));
            c = cn;
        }
    }
    if (i < n)
        sinusoid_scalar(out + i, n - i, t0 + static_cast<double>(i) * dt, dt, omega,
                        amp_c, amp_s, dc);
}

PhasorSums phasor_sums_avx2(const double* x, std::size_t n, double t0, double dt, double omega)
{
    PhasorSums acc;
    acc.n = n;
    const double step4 = 4.0 * omega * dt;
    const __m256d rc = _mm256_set1_pd(std::cos(step4));
    const __m256d rs = _mm256_set1_pd(std::sin(step4));
    __m256d vcc = _mm256_setzero_pd(), vss = _mm256_setzero_pd(), vcs = _mm256_setzero_pd();
    __m256d vc = _mm256_setzero_pd(), vs = _mm256_setzero_pd();
    __m256d vxc = _mm256_setzero_pd(), vxs = _mm256_setzero_pd(), vx = _mm256_setzero_pd();

    std::size_t i = 0;
    while (i + 4 <= n) {
        const std::size_t block_end = std::min(i + kRenormBlock, n & ~std::size_t{3});
        const double phase = omega * (t0 + static_cast<double>(i) * dt);
        const double d = omega * dt;
        __m256d c = _mm256_setr_pd(std::cos(phase), std::cos(phase + d),
                                   std::cos(phase + 2 * d), std::cos(phase + 3 * d));
        __m256d s = _mm256_setr_pd(std::sin(phase), std::sin(phase + d),
                                   std::sin(phase + 2 * d), std::sin(phase + 3 * d));
        for (; i + 4 <= block_end; i += 4) {
            const __m256d xi = _mm256_loadu_pd(x + i);
            vcc = _mm256_fmadd_pd(c, c, vcc);
            vss = _mm256_fmadd_pd(s, s, vss);
            vcs = _mm256_fmadd_pd(c, s, vcs);
            vc = _mm256_add_pd(vc, c);
            vs = _mm256_add_pd(vs, s);
            vxc = _mm256_fmadd_pd(xi, c, vxc);
            vxs = _mm256_fmadd_pd(xi, s, vxs);
            vx = _mm256_add_pd(vx, xi);
            const __m256d cn = _mm256_fmsub_pd(c, rc, _mm256_mul_pd(s, rs));
            s = _mm256_fmadd_pd(s, rc, _mm256_mul_pd(c, rs));
            c = cn;
        }
    }
    acc.cc = reduce_add(vcc);
    acc.ss = reduce_add(vss);
    acc.cs = reduce_add(vcs);
    acc.c = reduce_add(vc);
    acc.s = reduce_add(vs);
    acc.xc = reduce_add(vxc);
    acc.xs = reduce_add(vxs);
    acc.x = reduce_add(vx);
    if (i < n) {
        const PhasorSums tail =
            phasor_sums_scalar(x + i, n - i, t0 + static_cast<double>(i) * dt, dt, omega);
        acc.cc += tail.cc;
        acc.ss += tail.ss;
        acc.cs += tail.cs;
        acc.c += tail.c;
        acc.s += tail.s;
        acc.xc += tail.xc;
        acc.xs += tail.xs;
        acc.x += tail.x;
    }
    return acc;
}

void gaussian_add_avx2(double* x, std::size_t n, double sigma,
                       uint64_t key_hi, uint64_t key_lo, uint64_t ctr0)
{
    const __m256d vsigma = _mm256_set1_pd(sigma);
    const __m256d two_pi = _mm256_set1_pd(2.0 * std::numbers::pi);
    const __m256d minus_two = _mm256_set1_pd(-2.0);

    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const Philox8 ph = philox8(ctr0 + i / 2, key_hi, key_lo);
        __m256i u1a, u1b, u2a, u2b;
        join_u64(ph.w0, ph.w1, u1a, u1b);
        join_u64(ph.w2, ph.w3, u2a, u2b);

        for (int half = 0; half < 2; ++half) {
            const __m256d u1 = u64_to_unit_pd(half ? u1b : u1a);
            const __m256d u2 = u64_to_unit_pd(half ? u2b : u2a);
            const __m256d r = _mm256_sqrt_pd(_mm256_mul_pd(minus_two, log_pd(u1)));
            __m256d sa, ca;
            sincos_pd(_mm256_mul_pd(two_pi, u2), sa, ca);
            const __m256d ze = _mm256_mul_pd(r, ca);
            const __m256d zo = _mm256_mul_pd(r, sa);
            const __m256d lo = _mm256_unpacklo_pd(ze, zo);
            const __m256d hi = _mm256_unpackhi_pd(ze, zo);
            const __m256d out0 = _mm256_permute2f128_pd(lo, hi, 0x20);
            const __m256d out1 = _mm256_permute2f128_pd(lo, hi, 0x31);
            double* dst = x + i + (half ? 8 : 0);
            _mm256_storeu_pd(dst, _mm256_fmadd_pd(vsigma, out0, _mm256_loadu_pd(dst)));
            _mm256_storeu_pd(dst + 4, _mm256_fmadd_pd(vsigma, out1, _mm256_loadu_pd(dst + 4)));
        }
    }
    if (i < n)
        gaussian_add_scalar(x + i, n - i, sigma, key_hi, key_lo, ctr0 + i / 2);
}

} // namespace exoamp::kern

#endif // EXOAMP_X86 && EXOAMP_HAVE_AVX2
