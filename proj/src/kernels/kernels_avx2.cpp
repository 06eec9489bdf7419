// AVX2 variants of the placement kernels. This translation unit is compiled
// with -mavx2 -mfma and must only be entered after avx2_supported() returns
// true (see dispatch.cpp).

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "iaspa/kernels.hpp"

namespace iaspa::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d odd = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, odd));
}

// log1p(x) for x >= 0, accurate to a few ulp.
//
// u = 1+x is decomposed as m * 2^e with m in [sqrt2/2, sqrt2]; log(m) is the
// atanh series 2z * (1 + z^2/3 + ... + z^18/19) with z = (m-1)/(m+1),
// |z| <= 0.1716, so the truncated tail is below 1e-17 relative. The final
// multiply by x/d (d = u-1) recovers the precision lost when 1+x rounds.
inline __m256d v_log1p_nonneg(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d u = _mm256_add_pd(one, x);
    const __m256d d = _mm256_sub_pd(u, one);

    const __m256i ui = _mm256_castpd_si256(u);
    __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(ui, 52), _mm256_set1_epi64x(1023));
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(ui, mant_mask), one_bits));

    const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
    const __m256d gt = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), gt);
    e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(gt), _mm256_set1_epi64x(1)));

    // int64 -> double for exponents in [0, 1025)
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    const __m256d e_d =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(e, magic)), _mm256_set1_pd(4503599627370496.0));

    const __m256d z = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z2 = _mm256_mul_pd(z, z);

    __m256d p = _mm256_set1_pd(1.0 / 19.0);
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 17.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 15.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, z2, one);
    const __m256d logm = _mm256_mul_pd(_mm256_add_pd(z, z), p);

    // ln2 split with 20 trailing zero bits: e * ln2_hi is exact.
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d logu = _mm256_add_pd(_mm256_fmadd_pd(e_d, ln2_lo, logm), _mm256_mul_pd(e_d, ln2_hi));

    const __m256d tiny = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_EQ_OQ);
    const __m256d r = _mm256_mul_pd(logu, _mm256_div_pd(x, d));
    return _mm256_blendv_pd(r, x, tiny);
}

void acc_max(double* acc, const double* field, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(acc + i);
        __m256d f = _mm256_loadu_pd(field + i);
        _mm256_storeu_pd(acc + i, _mm256_max_pd(a, f));
    }
    for (; i < n; ++i) acc[i] = std::max(acc[i], field[i]);
}

void acc_sum(double* acc, const double* field, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(acc + i);
        __m256d f = _mm256_loadu_pd(field + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(a, f));
    }
    for (; i < n; ++i) acc[i] += field[i];
}

double w_log1p(const double* acc, const double* dens, std::size_t n, double cap) {
    const __m256d vcap = _mm256_set1_pd(cap);
    __m256d s = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_min_pd(_mm256_loadu_pd(acc + i), vcap);
        s = _mm256_fmadd_pd(_mm256_loadu_pd(dens + i), v_log1p_nonneg(a), s);
    }
    double out = hsum(s);
    for (; i < n; ++i) out += dens[i] * std::log1p(std::min(acc[i], cap));
    return out;
}

double w_sat(const double* acc, const double* dens, std::size_t n, double c, double cap) {
    const __m256d vcap = _mm256_set1_pd(cap);
    const __m256d vc = _mm256_set1_pd(c);
    __m256d s = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_min_pd(_mm256_loadu_pd(acc + i), vcap);
        __m256d t = _mm256_div_pd(a, _mm256_add_pd(a, vc));
        s = _mm256_fmadd_pd(_mm256_loadu_pd(dens + i), t, s);
    }
    double out = hsum(s);
    for (; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        out += dens[i] * (a / (a + c));
    }
    return out;
}

template <bool SumMode>
double g_log1p(const double* acc, const double* field, const double* dens, std::size_t n,
               double cap) {
    const __m256d vcap = _mm256_set1_pd(cap);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d s = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(acc + i);
        __m256d vf = _mm256_loadu_pd(field + i);
        __m256d a = _mm256_min_pd(va, vcap);
        __m256d b = SumMode ? _mm256_min_pd(_mm256_add_pd(va, vf), vcap)
                            : _mm256_min_pd(_mm256_max_pd(va, vf), vcap);
        __m256d x = _mm256_div_pd(_mm256_sub_pd(b, a), _mm256_add_pd(one, a));
        s = _mm256_fmadd_pd(_mm256_loadu_pd(dens + i), v_log1p_nonneg(x), s);
    }
    double out = hsum(s);
    for (; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        const double b = std::min(SumMode ? acc[i] + field[i] : std::max(acc[i], field[i]), cap);
        if (b > a) out += dens[i] * std::log1p((b - a) / (1.0 + a));
    }
    return out;
}

template <bool SumMode>
double g_sat(const double* acc, const double* field, const double* dens, std::size_t n, double c,
             double cap) {
    const __m256d vcap = _mm256_set1_pd(cap);
    const __m256d vc = _mm256_set1_pd(c);
    __m256d s = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(acc + i);
        __m256d vf = _mm256_loadu_pd(field + i);
        __m256d a = _mm256_min_pd(va, vcap);
        __m256d b = SumMode ? _mm256_min_pd(_mm256_add_pd(va, vf), vcap)
                            : _mm256_min_pd(_mm256_max_pd(va, vf), vcap);
        __m256d num = _mm256_mul_pd(vc, _mm256_sub_pd(b, a));
        __m256d den = _mm256_mul_pd(_mm256_add_pd(b, vc), _mm256_add_pd(a, vc));
        s = _mm256_fmadd_pd(_mm256_loadu_pd(dens + i), _mm256_div_pd(num, den), s);
    }
    double out = hsum(s);
    for (; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        const double b = std::min(SumMode ? acc[i] + field[i] : std::max(acc[i], field[i]), cap);
        if (b > a) out += dens[i] * (c * (b - a) / ((b + c) * (a + c)));
    }
    return out;
}

double g_log1p_max(const double* a, const double* f, const double* d, std::size_t n, double cap) {
    return g_log1p<false>(a, f, d, n, cap);
}
double g_log1p_sum(const double* a, const double* f, const double* d, std::size_t n, double cap) {
    return g_log1p<true>(a, f, d, n, cap);
}
double g_sat_max(const double* a, const double* f, const double* d, std::size_t n, double c,
                 double cap) {
    return g_sat<false>(a, f, d, n, c, cap);
}
double g_sat_sum(const double* a, const double* f, const double* d, std::size_t n, double c,
                 double cap) {
    return g_sat<true>(a, f, d, n, c, cap);
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2", acc_max, acc_sum, w_log1p, w_sat, g_log1p_max, g_log1p_sum, g_sat_max, g_sat_sum,
    };
    return ops;
}

}  // namespace iaspa::kernels

#endif  // x86
