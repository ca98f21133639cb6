#include "unfold/simd/dispatch.hpp"

#include <cmath>

// Reference backend. Straight loops over libm; the AVX2 backend is tested
// against these, so keep them obviously correct.

namespace unfold::kern {
namespace {

double sum_s(const double* x, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_s(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double min_s(const double* x, size_t n) {
    double m = x[0];
    for (size_t i = 1; i < n; ++i)
        if (x[i] < m) m = x[i];
    return m;
}

double sq_diff_s(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

double abs_diff_s(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
    return acc;
}

double masked_sq_diff_s(const double* x, const double* y, const double* mask, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += mask[i] * d * d;
    }
    return acc;
}

double sammon_s(const double* dhat, const double* d, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = d[i] - dhat[i];
        acc += r * r / d[i];
    }
    return acc;
}

double cca_recip_s(const double* dhat, const double* d, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = d[i] - dhat[i];
        acc += r * r / dhat[i];
    }
    return acc;
}

double cca_exp_s(const double* dhat, const double* d, double inv_sigma, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = d[i] - dhat[i];
        acc += r * r * std::exp(-dhat[i] * inv_sigma);
    }
    return acc;
}

double sqrt_diff_s(const double* dhat, const double* d, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(d[i]) - std::sqrt(dhat[i]);
        acc += r * r;
    }
    return acc;
}

double breg_exp_s(const double* dhat, const double* d, double inv_sigma, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double ed = std::exp(-d[i] * inv_sigma);
        acc += std::exp(-dhat[i] * inv_sigma) - ed + inv_sigma * ed * (dhat[i] - d[i]);
    }
    return acc;
}

double breg_entropy_s(const double* dhat, const double* d, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
        acc += dhat[i] * (std::log(dhat[i]) - std::log(d[i])) - dhat[i] + d[i];
    return acc;
}

double exp_neg_sum_s(const double* x, double bias, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += std::exp(bias - x[i]);
    return acc;
}

void scale_s(const double* x, double c, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = c * x[i];
}

void sub_vec_scalar_s(const double* x, const double* v, double c, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = x[i] - v[i] - c;
}

void edm_col_s(const double* kcol, const double* kdiag, double kjj, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = kdiag[i] + kjj - 2.0 * kcol[i];
}

void exp_neg_s(const double* x, double bias, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::exp(bias - x[i]);
}

void scaled_diff_s(const double* x, const double* y, double c, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = c * (x[i] - y[i]);
}

void masked_scaled_diff_s(const double* x, const double* y, const double* mask, double c,
                          double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = mask[i] * c * (x[i] - y[i]);
}

void sign_diff_s(const double* x, const double* y, double c, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        out[i] = d > 0.0 ? c : (d < 0.0 ? -c : 0.0);
    }
}

void sammon_grad_s(const double* dhat, const double* d, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = 2.0 * (dhat[i] - d[i]) / d[i];
}

void cca_recip_grad_s(const double* dhat, const double* d, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        const double r = d[i] - dhat[i];
        out[i] = -2.0 * r / dhat[i] - r * r / (dhat[i] * dhat[i]);
    }
}

void cca_exp_grad_s(const double* dhat, const double* d, double inv_sigma, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        const double r = d[i] - dhat[i];
        out[i] = std::exp(-dhat[i] * inv_sigma) * (-2.0 * r - inv_sigma * r * r);
    }
}

void sqrt_ratio_grad_s(const double* dhat, const double* d, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = 1.0 - std::sqrt(d[i] / dhat[i]);
}

void breg_exp_grad_s(const double* dhat, const double* d, double inv_sigma, double* out,
                     size_t n) {
    for (size_t i = 0; i < n; ++i)
        out[i] = inv_sigma * (std::exp(-d[i] * inv_sigma) - std::exp(-dhat[i] * inv_sigma));
}

void breg_entropy_grad_s(const double* dhat, const double* d, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::log(dhat[i]) - std::log(d[i]);
}

void tsne_weight_s(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = 1.0 / (1.0 + x[i]);
}

void log1p_s(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = std::log1p(x[i]);
}

}  // namespace

const Table& scalar_table() {
    static const Table t = {
        "scalar",
        sum_s,
        dot_s,
        min_s,
        sq_diff_s,
        abs_diff_s,
        masked_sq_diff_s,
        sammon_s,
        cca_recip_s,
        cca_exp_s,
        sqrt_diff_s,
        breg_exp_s,
        breg_entropy_s,
        exp_neg_sum_s,
        scale_s,
        sub_vec_scalar_s,
        edm_col_s,
        exp_neg_s,
        scaled_diff_s,
        masked_scaled_diff_s,
        sign_diff_s,
        sammon_grad_s,
        cca_recip_grad_s,
        cca_exp_grad_s,
        sqrt_ratio_grad_s,
        breg_exp_grad_s,
        breg_entropy_grad_s,
        tsne_weight_s,
        log1p_s,
    };
    return t;
}

}  // namespace unfold::kern
