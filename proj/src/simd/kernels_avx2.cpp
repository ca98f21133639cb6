#include "unfold/simd/dispatch.hpp"

#include <immintrin.h>

#include <cmath>

// AVX2+FMA backend. 4-wide main loops with scalar libm tails; the vector
// exp/log are Cephes-style polynomial evaluations accurate to a few ulp,
// which the equivalence tests bound against the scalar backend.

namespace unfold::kern {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// int64 lanes with |v| < 2^51 to double
inline __m256d small_i64_to_pd(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4338000000000000LL);  // 2^52 + 2^51
    __m256d d = _mm256_castsi256_pd(_mm256_add_epi64(v, magic));
    return _mm256_sub_pd(d, _mm256_castsi256_pd(magic));
}

// exp(x) for x <= ~705; inputs below -708.396 flush to 0 (the scalar
// backend produces subnormals there, covered by the absolute tolerance).
inline __m256d exp_pd(__m256d x) {
    const __m256d lo_cut = _mm256_set1_pd(-708.396);
    const __m256d hi_cut = _mm256_set1_pd(709.0);
    const __m256d flush = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_cut);

    const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // r = x - n*ln2, split high/low for accuracy
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);
    __m256d rr = _mm256_mul_pd(r, r);

    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910e-1));
    __m256d px = _mm256_mul_pd(r, p);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.0));

    __m256d e = _mm256_div_pd(px, _mm256_sub_pd(q, px));
    __m256d y = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    __m256i n64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
    __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    y = _mm256_mul_pd(y, _mm256_castsi256_pd(pow2));
    return _mm256_andnot_pd(flush, y);
}

// log(x) for normal x > 0 (callers floor their arguments).
inline __m256d log_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256i bits = _mm256_castpd_si256(x);
    __m256i e_i = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
    __m256i mant = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                   _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);  // [1, 2)
    __m256d e = small_i64_to_pd(e_i);

    // fold m into [1/sqrt2, sqrt2)
    __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.41421356237309504880), _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, one));

    // log m = 2 atanh r, r = (m-1)/(m+1), |r| < 0.1716
    __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    __m256d r2 = _mm256_mul_pd(r, r);
    __m256d s = _mm256_set1_pd(1.0 / 19.0);
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 17.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 15.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 13.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 11.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 9.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 7.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 5.0));
    s = _mm256_fmadd_pd(s, r2, _mm256_set1_pd(1.0 / 3.0));
    s = _mm256_fmadd_pd(s, r2, one);
    __m256d logm = _mm256_mul_pd(_mm256_add_pd(r, r), s);

    __m256d y = _mm256_fmadd_pd(e, _mm256_set1_pd(6.93147180369123816490e-1), logm);
    return _mm256_fmadd_pd(e, _mm256_set1_pd(1.90821492927058770002e-10), y);
}

// log(1+x) with the u = 1+x correction so small x stay accurate.
inline __m256d log1p_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d u = _mm256_add_pd(one, x);
    __m256d lu = log_pd(u);
    __m256d um1 = _mm256_sub_pd(u, one);
    __m256d exact = _mm256_cmp_pd(um1, _mm256_setzero_pd(), _CMP_EQ_OQ);
    __m256d corr = _mm256_div_pd(x, um1);  // NaN where um1 == 0, blended away
    return _mm256_blendv_pd(_mm256_mul_pd(lu, corr), x, exact);
}

double sum_v(const double* x, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double dot_v(const double* x, const double* y, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

double min_v(const double* x, size_t n) {
    size_t i = 0;
    double r = x[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(x);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
        r = hmin(acc);
    }
    for (; i < n; ++i)
        if (x[i] < r) r = x[i];
    return r;
}

double sq_diff_v(const double* x, const double* y, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

double abs_diff_v(const double* x, const double* y, size_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_add_pd(acc, _mm256_and_pd(d, absmask));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::fabs(x[i] - y[i]);
    return r;
}

double masked_sq_diff_v(const double* x, const double* y, const double* mask, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(mask + i), d), d, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += mask[i] * d * d;
    }
    return r;
}

double sammon_v(const double* dhat, const double* d, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dv = _mm256_loadu_pd(d + i);
        __m256d r = _mm256_sub_pd(dv, _mm256_loadu_pd(dhat + i));
        acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(r, r), dv));
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double t = d[i] - dhat[i];
        r += t * t / d[i];
    }
    return r;
}

double cca_recip_v(const double* dhat, const double* d, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(dhat + i);
        __m256d r = _mm256_sub_pd(_mm256_loadu_pd(d + i), hv);
        acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(r, r), hv));
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double t = d[i] - dhat[i];
        r += t * t / dhat[i];
    }
    return r;
}

double cca_exp_v(const double* dhat, const double* d, double inv_sigma, size_t n) {
    const __m256d nis = _mm256_set1_pd(-inv_sigma);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(dhat + i);
        __m256d r = _mm256_sub_pd(_mm256_loadu_pd(d + i), hv);
        __m256d w = exp_pd(_mm256_mul_pd(hv, nis));
        acc = _mm256_fmadd_pd(_mm256_mul_pd(r, r), w, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double t = d[i] - dhat[i];
        r += t * t * std::exp(-dhat[i] * inv_sigma);
    }
    return r;
}

double sqrt_diff_v(const double* dhat, const double* d, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_sub_pd(_mm256_sqrt_pd(_mm256_loadu_pd(d + i)),
                                  _mm256_sqrt_pd(_mm256_loadu_pd(dhat + i)));
        acc = _mm256_fmadd_pd(r, r, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double t = std::sqrt(d[i]) - std::sqrt(dhat[i]);
        r += t * t;
    }
    return r;
}

double breg_exp_v(const double* dhat, const double* d, double inv_sigma, size_t n) {
    const __m256d nis = _mm256_set1_pd(-inv_sigma);
    const __m256d is = _mm256_set1_pd(inv_sigma);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(dhat + i);
        __m256d dv = _mm256_loadu_pd(d + i);
        __m256d eh = exp_pd(_mm256_mul_pd(hv, nis));
        __m256d ed = exp_pd(_mm256_mul_pd(dv, nis));
        __m256d lin = _mm256_mul_pd(_mm256_mul_pd(is, ed), _mm256_sub_pd(hv, dv));
        acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_sub_pd(eh, ed), lin));
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double ed = std::exp(-d[i] * inv_sigma);
        r += std::exp(-dhat[i] * inv_sigma) - ed + inv_sigma * ed * (dhat[i] - d[i]);
    }
    return r;
}

double breg_entropy_v(const double* dhat, const double* d, size_t n) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(dhat + i);
        __m256d dv = _mm256_loadu_pd(d + i);
        __m256d lr = _mm256_sub_pd(log_pd(hv), log_pd(dv));
        acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_fmsub_pd(hv, lr, hv), dv));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += dhat[i] * (std::log(dhat[i]) - std::log(d[i])) - dhat[i] + d[i];
    return r;
}

double exp_neg_sum_v(const double* x, double bias, size_t n) {
    const __m256d b = _mm256_set1_pd(bias);
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, exp_pd(_mm256_sub_pd(b, _mm256_loadu_pd(x + i))));
    double r = hsum(acc);
    for (; i < n; ++i) r += std::exp(bias - x[i]);
    return r;
}

void scale_v(const double* x, double c, double* out, size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(cv, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = c * x[i];
}

void sub_vec_scalar_v(const double* x, const double* v, double c, double* out, size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(v + i));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(t, cv));
    }
    for (; i < n; ++i) out[i] = x[i] - v[i] - c;
}

void edm_col_v(const double* kcol, const double* kdiag, double kjj, double* out, size_t n) {
    const __m256d kj = _mm256_set1_pd(kjj);
    const __m256d m2 = _mm256_set1_pd(-2.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_loadu_pd(kdiag + i), kj);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(m2, _mm256_loadu_pd(kcol + i), t));
    }
    for (; i < n; ++i) out[i] = kdiag[i] + kjj - 2.0 * kcol[i];
}

void exp_neg_v(const double* x, double bias, double* out, size_t n) {
    const __m256d b = _mm256_set1_pd(bias);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, exp_pd(_mm256_sub_pd(b, _mm256_loadu_pd(x + i))));
    for (; i < n; ++i) out[i] = std::exp(bias - x[i]);
}

void scaled_diff_v(const double* x, const double* y, double c, double* out, size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(cv, d));
    }
    for (; i < n; ++i) out[i] = c * (x[i] - y[i]);
}

void masked_scaled_diff_v(const double* x, const double* y, const double* mask, double c,
                          double* out, size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        __m256d m = _mm256_mul_pd(_mm256_loadu_pd(mask + i), cv);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(m, d));
    }
    for (; i < n; ++i) out[i] = mask[i] * c * (x[i] - y[i]);
}

void sign_diff_v(const double* x, const double* y, double c, double* out, size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d cp = _mm256_set1_pd(c);
    const __m256d cn = _mm256_set1_pd(-c);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        __m256d pos = _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_GT_OQ), cp);
        __m256d neg = _mm256_and_pd(_mm256_cmp_pd(d, zero, _CMP_LT_OQ), cn);
        _mm256_storeu_pd(out + i, _mm256_or_pd(pos, neg));
    }
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        out[i] = d > 0.0 ? c : (d < 0.0 ? -c : 0.0);
    }
}

void sammon_grad_v(const double* dhat, const double* d, double* out, size_t n) {
    const __m256d two = _mm256_set1_pd(2.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dv = _mm256_loadu_pd(d + i);
        __m256d r = _mm256_sub_pd(_mm256_loadu_pd(dhat + i), dv);
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(two, r), dv));
    }
    for (; i < n; ++i) out[i] = 2.0 * (dhat[i] - d[i]) / d[i];
}

void cca_recip_grad_v(const double* dhat, const double* d, double* out, size_t n) {
    const __m256d m2 = _mm256_set1_pd(-2.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(dhat + i);
        __m256d r = _mm256_sub_pd(_mm256_loadu_pd(d + i), hv);
        __m256d q = _mm256_div_pd(r, hv);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(q, _mm256_sub_pd(m2, q)));
    }
    for (; i < n; ++i) {
        const double q = (d[i] - dhat[i]) / dhat[i];
        out[i] = q * (-2.0 - q);
    }
}

void cca_exp_grad_v(const double* dhat, const double* d, double inv_sigma, double* out, size_t n) {
    const __m256d nis = _mm256_set1_pd(-inv_sigma);
    const __m256d m2 = _mm256_set1_pd(-2.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d hv = _mm256_loadu_pd(dhat + i);
        __m256d r = _mm256_sub_pd(_mm256_loadu_pd(d + i), hv);
        __m256d w = exp_pd(_mm256_mul_pd(hv, nis));
        __m256d inner = _mm256_fmadd_pd(_mm256_mul_pd(nis, r), r, _mm256_mul_pd(m2, r));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(w, inner));
    }
    for (; i < n; ++i) {
        const double r = d[i] - dhat[i];
        out[i] = std::exp(-dhat[i] * inv_sigma) * (-2.0 * r - inv_sigma * r * r);
    }
}

void sqrt_ratio_grad_v(const double* dhat, const double* d, double* out, size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d q = _mm256_div_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(dhat + i));
        _mm256_storeu_pd(out + i, _mm256_sub_pd(one, _mm256_sqrt_pd(q)));
    }
    for (; i < n; ++i) out[i] = 1.0 - std::sqrt(d[i] / dhat[i]);
}

void breg_exp_grad_v(const double* dhat, const double* d, double inv_sigma, double* out,
                     size_t n) {
    const __m256d nis = _mm256_set1_pd(-inv_sigma);
    const __m256d is = _mm256_set1_pd(inv_sigma);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ed = exp_pd(_mm256_mul_pd(_mm256_loadu_pd(d + i), nis));
        __m256d eh = exp_pd(_mm256_mul_pd(_mm256_loadu_pd(dhat + i), nis));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(is, _mm256_sub_pd(ed, eh)));
    }
    for (; i < n; ++i)
        out[i] = inv_sigma * (std::exp(-d[i] * inv_sigma) - std::exp(-dhat[i] * inv_sigma));
}

void breg_entropy_grad_v(const double* dhat, const double* d, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d lr = _mm256_sub_pd(log_pd(_mm256_loadu_pd(dhat + i)),
                                   log_pd(_mm256_loadu_pd(d + i)));
        _mm256_storeu_pd(out + i, lr);
    }
    for (; i < n; ++i) out[i] = std::log(dhat[i]) - std::log(d[i]);
}

void tsne_weight_v(const double* x, double* out, size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d w = _mm256_div_pd(one, _mm256_add_pd(one, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(out + i, w);
    }
    for (; i < n; ++i) out[i] = 1.0 / (1.0 + x[i]);
}

void log1p_v(const double* x, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log1p_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::log1p(x[i]);
}

}  // namespace

const Table& avx2_table_impl() {
    static const Table t = {
        "avx2",
        sum_v,
        dot_v,
        min_v,
        sq_diff_v,
        abs_diff_v,
        masked_sq_diff_v,
        sammon_v,
        cca_recip_v,
        cca_exp_v,
        sqrt_diff_v,
        breg_exp_v,
        breg_entropy_v,
        exp_neg_sum_v,
        scale_v,
        sub_vec_scalar_v,
        edm_col_v,
        exp_neg_v,
        scaled_diff_v,
        masked_scaled_diff_v,
        sign_diff_v,
        sammon_grad_v,
        cca_recip_grad_v,
        cca_exp_grad_v,
        sqrt_ratio_grad_v,
        breg_exp_grad_v,
        breg_entropy_grad_v,
        tsne_weight_v,
        log1p_v,
    };
    return t;
}

}  // namespace unfold::kern
