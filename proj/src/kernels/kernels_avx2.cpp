// AVX2/FMA variants of the batch kernels. Compiled with -mavx2 -mfma and
// only reached after a runtime CPU check.

#include <immintrin.h>

#include <array>
#include <cstddef>

#include "dce/kernels.hpp"

namespace dce::kernels::avx2 {
namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// exp(x) to ~1 ulp. Inputs below −708 flush to zero, which is all the
// callers need: they only ever exponentiate non-positive arguments.
inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = set1(1.4426950408889634);
    const __m256d ln2_hi = set1(6.93147180369123816490e-01);
    const __m256d ln2_lo = set1(1.90821492927058770002e-10);
    const __m256d lo_limit = set1(-708.0);
    const __m256d hi_limit = set1(709.0);

    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // Taylor series of e^r on |r| ≤ ln2/2, degree 13.
    constexpr std::array<double, 14> c = {
        1.0,
        1.0,
        1.0 / 2.0,
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 120.0,
        1.0 / 720.0,
        1.0 / 5040.0,
        1.0 / 40320.0,
        1.0 / 362880.0,
        1.0 / 3628800.0,
        1.0 / 39916800.0,
        1.0 / 479001600.0,
        1.0 / 6227020800.0,
    };
    __m256d poly = set1(c[13]);
    for (int i = 12; i >= 0; --i) poly = _mm256_fmadd_pd(poly, r, set1(c[i]));

    // 2^n via the exponent field. n is in [−1022, 1023] after clamping.
    const __m256d magic = set1(6755399441055744.0);  // 2^52 + 2^51
    __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                  _mm256_castpd_si256(magic));
    ni = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
    const __m256d result = _mm256_mul_pd(poly, _mm256_castsi256_pd(ni));

    const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
    return _mm256_andnot_pd(underflow, result);
}

// 1 − e^{−y} for y ≥ 0 without cancellation at small y: alternating series
// below 0.5 (degree 17, truncation < 1e-21), 1 − exp_pd(−y) above.
inline __m256d one_minus_exp_neg(__m256d y) {
    __m256d poly = set1(0.0);
    double coef = 1.0;
    std::array<double, 18> c{};
    for (int i = 1; i < 18; ++i) {
        coef /= i;
        c[i] = (i % 2 == 1) ? coef : -coef;
    }
    for (int i = 17; i >= 1; --i) poly = _mm256_fmadd_pd(poly, y, set1(c[i]));
    const __m256d series = _mm256_mul_pd(poly, y);
    const __m256d direct = _mm256_sub_pd(set1(1.0), exp_pd(_mm256_sub_pd(set1(0.0), y)));
    const __m256d small = _mm256_cmp_pd(y, set1(0.5), _CMP_LT_OQ);
    return _mm256_blendv_pd(direct, series, small);
}

struct Reflect4 {
    __m256d re;
    __m256d im;
    __m256d inv_den;
};

inline Reflect4 reflect4(const KernelParams& p, __m256d x, __m256d k) {
    const __m256d one = set1(1.0);
    const __m256d bk = _mm256_mul_pd(set1(p.beta), k);
    const __m256d dre = _mm256_sub_pd(_mm256_sub_pd(one, _mm256_mul_pd(bk, bk)),
                                      _mm256_mul_pd(x, x));
    const __m256d dim = _mm256_mul_pd(set1(-p.damping), x);
    const __m256d inv_den =
        _mm256_div_pd(one, _mm256_add_pd(_mm256_mul_pd(dre, dre), _mm256_mul_pd(dim, dim)));

    const __m256d strength = set1(p.eps_inf * p.plasma_sq);
    const __m256d ere =
        _mm256_add_pd(set1(p.eps_inf), _mm256_mul_pd(_mm256_mul_pd(strength, dre), inv_den));
    const __m256d eim = _mm256_mul_pd(
        _mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), strength), dim), inv_den);

    const __m256d nre = _mm256_sub_pd(ere, one);
    const __m256d mre = _mm256_add_pd(ere, one);
    const __m256d eim2 = _mm256_mul_pd(eim, eim);
    const __m256d inv_m = _mm256_div_pd(one, _mm256_add_pd(_mm256_mul_pd(mre, mre), eim2));
    const __m256d rre = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(nre, mre), eim2), inv_m);
    const __m256d rim = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_mul_pd(eim, mre), _mm256_mul_pd(nre, eim)), inv_m);

    const __m256d e = exp_pd(_mm256_mul_pd(set1(-2.0 * p.slab), k));
    const __m256d one_minus_e = one_minus_exp_neg(_mm256_mul_pd(set1(2.0 * p.slab), k));
    const __m256d r2re = _mm256_sub_pd(_mm256_mul_pd(rre, rre), _mm256_mul_pd(rim, rim));
    const __m256d r2im = _mm256_mul_pd(set1(2.0), _mm256_mul_pd(rre, rim));
    const __m256d qre = _mm256_sub_pd(one, _mm256_mul_pd(e, r2re));
    const __m256d qim = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(e, r2im));
    const __m256d inv_q = _mm256_div_pd(
        one_minus_e, _mm256_add_pd(_mm256_mul_pd(qre, qre), _mm256_mul_pd(qim, qim)));
    const __m256d re =
        _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(rre, qre), _mm256_mul_pd(rim, qim)), inv_q);
    const __m256d im =
        _mm256_mul_pd(_mm256_sub_pd(_mm256_mul_pd(rim, qre), _mm256_mul_pd(rre, qim)), inv_q);
    return {re, im, inv_den};
}

// Runs body on full lanes, then on a zero-padded copy of the tail so every
// point goes through the same vector arithmetic.
template <class Body>
inline void for_each_lane(std::size_t n, Body&& body) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) body(i, 4);
    if (i < n) body(i, n - i);
}

inline __m256d load(std::span<const double> v, std::size_t i, std::size_t count) {
    if (count == 4) return _mm256_loadu_pd(v.data() + i);
    alignas(32) std::array<double, 4> tmp{};
    for (std::size_t j = 0; j < count; ++j) tmp[j] = v[i + j];
    return _mm256_load_pd(tmp.data());
}

inline void store(std::span<double> v, std::size_t i, std::size_t count, __m256d x) {
    if (count == 4) {
        _mm256_storeu_pd(v.data() + i, x);
        return;
    }
    alignas(32) std::array<double, 4> tmp;
    _mm256_store_pd(tmp.data(), x);
    for (std::size_t j = 0; j < count; ++j) v[i + j] = tmp[j];
}

}  // namespace

void reflection(const KernelParams& p, double x, std::span<const double> k,
                std::span<double> re, std::span<double> im) {
    const __m256d xv = set1(x);
    for_each_lane(k.size(), [&](std::size_t i, std::size_t count) {
        const auto r = reflect4(p, xv, load(k, i, count));
        store(re, i, count, r.re);
        store(im, i, count, r.im);
    });
}

void pair_kernel(const KernelParams& p, double x, double xp, std::span<const double> k,
                 std::span<double> out) {
    const __m256d xv = set1(x);
    const __m256d xpv = set1(xp);
    for_each_lane(k.size(), [&](std::size_t i, std::size_t count) {
        const __m256d kv = load(k, i, count);
        const auto a = reflect4(p, xv, kv);
        const auto b = reflect4(p, xpv, kv);
        const __m256d t = one_minus_exp_neg(_mm256_mul_pd(set1(2.0 * p.layer), kv));
        __m256d v = _mm256_mul_pd(_mm256_mul_pd(kv, t), t);
        v = _mm256_mul_pd(v, _mm256_mul_pd(a.im, a.inv_den));
        v = _mm256_mul_pd(v, _mm256_mul_pd(b.im, b.inv_den));
        store(out, i, count, v);
    });
}

}  // namespace dce::kernels::avx2
