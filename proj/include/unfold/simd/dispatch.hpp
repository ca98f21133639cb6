#pragma once

#include <cstddef>

// Vectorized inner loops for the pairwise-loss catalog and the matrix
// geometry maps. Every entry exists in a scalar reference version and,
// on x86-64, an AVX2+FMA version. The active table is chosen once at
// runtime from CPUID, overridable with UNFOLD_SIMD=scalar|avx2|auto.
//
// Contracts shared by all kernels:
//   * pointers are non-aliasing unless stated, n may be 0;
//   * divisor/log arguments are assumed positive -- callers apply the
//     documented floors before entering the kernel layer;
//   * exponential arguments stay below ~700 so results fit in normals
//     (softmax-style callers shift by the row minimum first).
// Both backends evaluate the same formulas; they may differ by summation
// order and by the vector exp/log polynomial, which is why equivalence
// tests compare them under a relative tolerance instead of bitwise.

namespace unfold::kern {

using std::size_t;

struct Table {
    const char* name;

    // reductions
    double (*sum)(const double* x, size_t n);
    double (*dot)(const double* x, const double* y, size_t n);
    double (*min)(const double* x, size_t n);  // n >= 1
    double (*sq_diff)(const double* x, const double* y, size_t n);
    double (*abs_diff)(const double* x, const double* y, size_t n);
    double (*masked_sq_diff)(const double* x, const double* y, const double* mask, size_t n);
    // sum (d - dhat)^2 / d
    double (*sammon)(const double* dhat, const double* d, size_t n);
    // sum (d - dhat)^2 / dhat
    double (*cca_recip)(const double* dhat, const double* d, size_t n);
    // sum (d - dhat)^2 * exp(-dhat * inv_sigma)
    double (*cca_exp)(const double* dhat, const double* d, double inv_sigma, size_t n);
    // sum (sqrt(d) - sqrt(dhat))^2
    double (*sqrt_diff)(const double* dhat, const double* d, size_t n);
    // sum exp(-dhat*is) - exp(-d*is) + is*exp(-d*is)*(dhat - d)
    double (*breg_exp)(const double* dhat, const double* d, double inv_sigma, size_t n);
    // sum dhat*(log dhat - log d) - dhat + d
    double (*breg_entropy)(const double* dhat, const double* d, size_t n);
    // sum exp(bias - x)
    double (*exp_neg_sum)(const double* x, double bias, size_t n);

    // elementwise maps, out may not alias inputs
    void (*scale)(const double* x, double c, double* out, size_t n);
    // out = x - v - c
    void (*sub_vec_scalar)(const double* x, const double* v, double c, double* out, size_t n);
    // out = kdiag + kjj - 2*kcol  (one column of a squared-distance matrix)
    void (*edm_col)(const double* kcol, const double* kdiag, double kjj, double* out, size_t n);
    // out = exp(bias - x)
    void (*exp_neg)(const double* x, double bias, double* out, size_t n);
    // out = c*(x - y)
    void (*scaled_diff)(const double* x, const double* y, double c, double* out, size_t n);
    void (*masked_scaled_diff)(const double* x, const double* y, const double* mask, double c,
                               double* out, size_t n);
    // out = c*sign(x - y), 0 at ties
    void (*sign_diff)(const double* x, const double* y, double c, double* out, size_t n);
    // out = 2*(dhat - d)/d
    void (*sammon_grad)(const double* dhat, const double* d, double* out, size_t n);
    // out = -2*(d - dhat)/dhat - (d - dhat)^2/dhat^2
    void (*cca_recip_grad)(const double* dhat, const double* d, double* out, size_t n);
    // out = exp(-dhat*is) * (-2*(d - dhat) - is*(d - dhat)^2)
    void (*cca_exp_grad)(const double* dhat, const double* d, double inv_sigma, double* out,
                         size_t n);
    // out = 1 - sqrt(d/dhat)
    void (*sqrt_ratio_grad)(const double* dhat, const double* d, double* out, size_t n);
    // out = is*(exp(-d*is) - exp(-dhat*is))
    void (*breg_exp_grad)(const double* dhat, const double* d, double inv_sigma, double* out,
                          size_t n);
    // out = log(dhat) - log(d)
    void (*breg_entropy_grad)(const double* dhat, const double* d, double* out, size_t n);
    // out = 1/(1 + x)
    void (*tsne_weight)(const double* x, double* out, size_t n);
    // out = log(1 + x)
    void (*log1p)(const double* x, double* out, size_t n);
};

const Table& scalar_table();

// nullptr when the binary lacks the AVX2 translation unit or the CPU
// lacks AVX2+FMA.
const Table* avx2_table();

bool avx2_supported();

// Active table; resolved once (thread-safe) honoring UNFOLD_SIMD.
const Table& active();

// Test hook: "scalar", "avx2" or "auto". Throws invalid_parameter on an
// unknown name, unsupported_operation when avx2 is requested but absent.
void force_backend(const char* name);

}  // namespace unfold::kern
