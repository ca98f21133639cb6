#include "unfold/losses.hpp"

#include "unfold/simd/dispatch.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace unfold {

namespace {

constexpr double kFloor = tol::dist_floor;

void warn_floor_once(LossTag tag) {
    static std::atomic<unsigned> warned{0};
    const unsigned bit = 1u << static_cast<unsigned>(tag);
    if ((warned.fetch_or(bit) & bit) == 0)
        std::fprintf(stderr,
                     "unfold: %s: off-diagonal distance below %.0e floored (duplicate points?)\n",
                     loss_tag_name(tag), kFloor);
}

bool has_offdiag_below_floor(const Matrix& m) {
    const Index t = m.rows();
    for (Index j = 0; j < t; ++j)
        for (Index i = 0; i < t; ++i)
            if (i != j && m(i, j) < kFloor) return true;
    return false;
}

// Floors every entry (including the structurally-zero diagonal, so that
// divergence terms cancel exactly there) and warns when a real
// off-diagonal entry was raised.
Matrix floored(const Matrix& m, LossTag tag) {
    if (has_offdiag_below_floor(m)) warn_floor_once(tag);
    return m.cwiseMax(kFloor);
}

struct Seg {
    const double* p;
    size_t n;
};

std::array<Seg, 2> col_segs(const Matrix& m, Index j) {
    const double* base = m.col(j).data();
    return {{{base, static_cast<size_t>(j)},
             {base + j + 1, static_cast<size_t>(m.rows() - j - 1)}}};
}

double offdiag_min(const Matrix& m) {
    const auto& kt = kern::active();
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < m.cols(); ++j)
        for (const Seg& s : col_segs(m, j))
            if (s.n > 0) best = std::min(best, kt.min(s.p, s.n));
    return best;
}

double offdiag_exp_neg_sum(const Matrix& m, double bias) {
    const auto& kt = kern::active();
    double acc = 0.0;
    for (Index j = 0; j < m.cols(); ++j)
        for (const Seg& s : col_segs(m, j)) acc += kt.exp_neg_sum(s.p, bias, s.n);
    return acc;
}

Matrix symmetrized_zero_diag(Matrix g) {
    g = 0.5 * (g + g.transpose()).eval();
    g.diagonal().setZero();
    return g;
}

struct EvalResult {
    double value = 0.0;
    Matrix grad;
};

// ---- simple elementwise kinds ----------------------------------------

EvalResult eval_sq_centered(const Matrix& dh, const Matrix& dt, bool want_grad) {
    EvalResult r;
    Matrix c = double_center(dt - dh);
    r.value = c.squaredNorm();
    if (want_grad) r.grad = symmetrized_zero_diag(-2.0 * c);
    return r;
}

EvalResult eval_sq(const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    EvalResult r;
    r.value = kt.sq_diff(dh.data(), dt.data(), n);
    if (want_grad) {
        r.grad.resize(dh.rows(), dh.cols());
        kt.scaled_diff(dh.data(), dt.data(), 2.0, r.grad.data(), n);
    }
    return r;
}

EvalResult eval_sqrt_sq(const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    EvalResult r;
    r.value = kt.sqrt_diff(dh.data(), dt.data(), n);
    if (want_grad) {
        const Matrix fh = floored(dh, LossTag::sqrt_sq);
        const Matrix ft = floored(dt, LossTag::sqrt_sq);
        r.grad.resize(dh.rows(), dh.cols());
        kt.sqrt_ratio_grad(fh.data(), ft.data(), r.grad.data(), n);
        r.grad.diagonal().setZero();
    }
    return r;
}

EvalResult eval_abs(const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    EvalResult r;
    r.value = kt.abs_diff(dh.data(), dt.data(), n);
    if (want_grad) {
        r.grad.resize(dh.rows(), dh.cols());
        kt.sign_diff(dh.data(), dt.data(), 1.0, r.grad.data(), n);
    }
    return r;
}

EvalResult eval_sammon(const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    const Matrix fh = floored(dh, LossTag::sammon);
    const Matrix ft = floored(dt, LossTag::sammon);
    EvalResult r;
    r.value = kt.sammon(fh.data(), ft.data(), n);
    if (want_grad) {
        r.grad.resize(dh.rows(), dh.cols());
        kt.sammon_grad(fh.data(), ft.data(), r.grad.data(), n);
        r.grad.diagonal().setZero();
    }
    return r;
}

EvalResult eval_cca(const LossKind& kind, const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    EvalResult r;
    switch (kind.cca_weight) {
        case CcaWeight::reciprocal: {
            const Matrix fh = floored(dh, LossTag::cca);
            const Matrix ft = floored(dt, LossTag::cca);
            r.value = kt.cca_recip(fh.data(), ft.data(), n);
            if (want_grad) {
                r.grad.resize(dh.rows(), dh.cols());
                kt.cca_recip_grad(fh.data(), ft.data(), r.grad.data(), n);
                r.grad.diagonal().setZero();
            }
            break;
        }
        case CcaWeight::exponential: {
            const double is = 1.0 / kind.sigma;
            r.value = kt.cca_exp(dh.data(), dt.data(), is, n);
            if (want_grad) {
                r.grad.resize(dh.rows(), dh.cols());
                kt.cca_exp_grad(dh.data(), dt.data(), is, r.grad.data(), n);
                r.grad.diagonal().setZero();
            }
            break;
        }
        case CcaWeight::indicator: {
            const auto w = (dh.array() <= kind.eps).cast<double>();
            const auto res = (dt - dh).array();
            r.value = (res.square() * w).sum();
            if (want_grad) {
                r.grad = ((-2.0 * res) * w).matrix();
                r.grad.diagonal().setZero();
            }
            break;
        }
    }
    return r;
}

EvalResult eval_breg_entropy(const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    const Matrix fh = floored(dh, LossTag::breg_entropy);
    const Matrix ft = floored(dt, LossTag::breg_entropy);
    EvalResult r;
    r.value = kt.breg_entropy(fh.data(), ft.data(), n);
    if (want_grad) {
        r.grad.resize(dh.rows(), dh.cols());
        kt.breg_entropy_grad(fh.data(), ft.data(), r.grad.data(), n);
        r.grad.diagonal().setZero();
    }
    return r;
}

EvalResult eval_breg_exp(const LossKind& kind, const Matrix& dh, const Matrix& dt,
                         bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    const double is = 1.0 / kind.sigma;
    EvalResult r;
    r.value = kt.breg_exp(dh.data(), dt.data(), is, n);
    if (want_grad) {
        r.grad.resize(dh.rows(), dh.cols());
        kt.breg_exp_grad(dh.data(), dt.data(), is, r.grad.data(), n);
        r.grad.diagonal().setZero();
    }
    return r;
}

// ---- adjacency-weighted kinds ----------------------------------------

EvalResult eval_nbr_indicator(const LossKind& kind, const Matrix& dh, const Matrix& dt) {
    const Matrix& nb = kind.adjacency->mat();
    EvalResult r;
    for (Index j = 0; j < dh.cols(); ++j)
        for (Index i = 0; i < dh.rows(); ++i)
            if (nb(i, j) != 0.0 &&
                std::fabs(dh(i, j) - dt(i, j)) > 1e-12 * std::max(1.0, std::fabs(dt(i, j)))) {
                r.value = std::numeric_limits<double>::infinity();
                return r;
            }
    r.value = 0.0;
    return r;
}

EvalResult eval_nbr_quadratic(const LossKind& kind, const Matrix& dh, const Matrix& dt,
                              bool want_grad) {
    const auto& kt = kern::active();
    const Matrix& nb = kind.adjacency->mat();
    const size_t n = static_cast<size_t>(dh.size());
    EvalResult r;
    r.value = kt.masked_sq_diff(dh.data(), dt.data(), nb.data(), n);
    if (want_grad) {
        r.grad.resize(dh.rows(), dh.cols());
        kt.masked_scaled_diff(dh.data(), dt.data(), nb.data(), 2.0, r.grad.data(), n);
        if (!kind.adjacency->symmetrized()) r.grad = symmetrized_zero_diag(std::move(r.grad));
    }
    return r;
}

EvalResult eval_margin_hinge(const LossKind& kind, const Matrix& dh, bool want_grad) {
    const Matrix& nb = kind.adjacency->mat();
    const Index t = dh.rows();
    EvalResult r;
    if (want_grad) r.grad = Matrix::Zero(t, t);
    for (Index i = 0; i < t; ++i) {
        // furthest-neighbor term: first argmax of N_ik * Dhat_ik over k
        double inner = 0.0;
        Index kstar = -1;
        for (Index k = 0; k < t; ++k) {
            const double term = nb(i, k) * dh(i, k);
            if (kstar < 0 || term > inner) {
                inner = term;
                kstar = k;
            }
        }
        // hinge over disconnected nodes; the complement excludes the
        // diagonal (a node is neither neighbor nor non-neighbor of itself)
        double best = 0.0;
        Index jstar = -1;
        for (Index j = 0; j < t; ++j) {
            if (j == i || nb(i, j) != 0.0) continue;
            const double term = inner - dh(i, j);
            if (term > best) {
                best = term;
                jstar = j;
            }
        }
        r.value += best;
        if (want_grad && jstar >= 0) {
            if (nb(i, kstar) != 0.0) r.grad(i, kstar) += 1.0;
            r.grad(i, jstar) -= 1.0;
        }
    }
    if (want_grad) r.grad = symmetrized_zero_diag(std::move(r.grad));
    return r;
}

// ---- softmax-transfer kinds ------------------------------------------

// One row's KL term between softmax transfers, working on the column of
// the symmetric matrix (identical data, contiguous). p is scratch of
// length t.
double sne_row_term(const Matrix& dt, const Matrix& dh, Index i, bool exclude_diag, Vector& p,
                    Matrix* grad) {
    const auto& kt = kern::active();
    const Index t = dt.rows();
    const auto ts = col_segs(dt, i);
    const auto hs = col_segs(dh, i);

    double m, mh, s, sh;
    if (exclude_diag) {
        m = std::numeric_limits<double>::infinity();
        mh = m;
        for (const Seg& sg : ts)
            if (sg.n) m = std::min(m, kt.min(sg.p, sg.n));
        for (const Seg& sg : hs)
            if (sg.n) mh = std::min(mh, kt.min(sg.p, sg.n));
        s = kt.exp_neg_sum(ts[0].p, m, ts[0].n) + kt.exp_neg_sum(ts[1].p, m, ts[1].n);
        sh = kt.exp_neg_sum(hs[0].p, mh, hs[0].n) + kt.exp_neg_sum(hs[1].p, mh, hs[1].n);
    } else {
        m = kt.min(dt.col(i).data(), static_cast<size_t>(t));
        mh = kt.min(dh.col(i).data(), static_cast<size_t>(t));
        s = kt.exp_neg_sum(dt.col(i).data(), m, static_cast<size_t>(t));
        sh = kt.exp_neg_sum(dh.col(i).data(), mh, static_cast<size_t>(t));
    }

    kt.exp_neg(dt.col(i).data(), m, p.data(), static_cast<size_t>(t));
    if (exclude_diag) p[i] = 0.0;
    kt.scale(p.data(), 1.0 / s, p.data(), static_cast<size_t>(t));

    const double dot_h = kt.dot(p.data(), dh.col(i).data(), static_cast<size_t>(t));
    const double dot_t = kt.dot(p.data(), dt.col(i).data(), static_cast<size_t>(t));
    const double term = dot_h - dot_t + (m - mh) + std::log(sh) - std::log(s);

    if (grad) {
        // free gradient of the row term is p - phat
        Vector ph(t);
        kt.exp_neg(dh.col(i).data(), mh, ph.data(), static_cast<size_t>(t));
        if (exclude_diag) ph[i] = 0.0;
        kt.scale(ph.data(), 1.0 / sh, ph.data(), static_cast<size_t>(t));
        grad->col(i) += p - ph;
    }
    return term;
}

EvalResult eval_sne_row(const LossKind& kind, const Matrix& dh, const Matrix& dt,
                        bool want_grad) {
    const Index t = dh.rows();
    EvalResult r;
    Matrix g;
    if (want_grad) g = Matrix::Zero(t, t);
    Vector scratch(t);
    for (Index i = 0; i < t; ++i)
        r.value += sne_row_term(dt, dh, i, kind.exclude_diagonal, scratch,
                                want_grad ? &g : nullptr);
    if (want_grad) r.grad = symmetrized_zero_diag(std::move(g));
    return r;
}

EvalResult eval_sne_matrix(const LossKind& kind, const Matrix& dh, const Matrix& dt,
                           bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    const Index t = dh.rows();
    double m, mh, s, sh;
    if (kind.exclude_diagonal) {
        m = offdiag_min(dt);
        mh = offdiag_min(dh);
        s = offdiag_exp_neg_sum(dt, m);
        sh = offdiag_exp_neg_sum(dh, mh);
    } else {
        m = kt.min(dt.data(), n);
        mh = kt.min(dh.data(), n);
        s = kt.exp_neg_sum(dt.data(), m, n);
        sh = kt.exp_neg_sum(dh.data(), mh, n);
    }

    Matrix p(t, t);
    kt.exp_neg(dt.data(), m, p.data(), n);
    if (kind.exclude_diagonal) p.diagonal().setZero();
    kt.scale(p.data(), 1.0 / s, p.data(), n);

    EvalResult r;
    r.value = kt.dot(p.data(), dh.data(), n) - kt.dot(p.data(), dt.data(), n) + (m - mh) +
              std::log(sh) - std::log(s);
    if (want_grad) {
        Matrix ph(t, t);
        kt.exp_neg(dh.data(), mh, ph.data(), n);
        if (kind.exclude_diagonal) ph.diagonal().setZero();
        kt.scale(ph.data(), 1.0 / sh, ph.data(), n);
        r.grad = symmetrized_zero_diag(p - ph);
    }
    return r;
}

EvalResult eval_tsne(const Matrix& dh, const Matrix& dt, bool want_grad) {
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(dh.size());
    const Index t = dh.rows();

    // target transfer normalized over the off-diagonal support of q
    const double m = offdiag_min(dt);
    const double s = offdiag_exp_neg_sum(dt, m);
    Matrix p(t, t);
    kt.exp_neg(dt.data(), m, p.data(), n);
    p.diagonal().setZero();
    kt.scale(p.data(), 1.0 / s, p.data(), n);

    Matrix w(t, t);
    kt.tsne_weight(dh.data(), w.data(), n);
    w.diagonal().setZero();
    const double z = kt.sum(w.data(), n);

    Matrix l1p(t, t);
    kt.log1p(dh.data(), l1p.data(), n);

    EvalResult r;
    r.value = kt.dot(p.data(), l1p.data(), n) - kt.dot(p.data(), dt.data(), n) + m -
              std::log(s) + std::log(z);
    if (want_grad) {
        Matrix q = w / z;
        r.grad = symmetrized_zero_diag(((p - q).array() * w.array()).matrix());
    }
    return r;
}

EvalResult eval_loss(const LossKind& kind, const Matrix& dh, const Matrix& dt, bool want_grad) {
    switch (kind.tag) {
        case LossTag::sq_centered: return eval_sq_centered(dh, dt, want_grad);
        case LossTag::sq: return eval_sq(dh, dt, want_grad);
        case LossTag::sqrt_sq: return eval_sqrt_sq(dh, dt, want_grad);
        case LossTag::abs: return eval_abs(dh, dt, want_grad);
        case LossTag::sammon: return eval_sammon(dh, dt, want_grad);
        case LossTag::cca: return eval_cca(kind, dh, dt, want_grad);
        case LossTag::nbr_indicator: return eval_nbr_indicator(kind, dh, dt);
        case LossTag::nbr_quadratic: return eval_nbr_quadratic(kind, dh, dt, want_grad);
        case LossTag::breg_entropy: return eval_breg_entropy(dh, dt, want_grad);
        case LossTag::breg_exp: return eval_breg_exp(kind, dh, dt, want_grad);
        case LossTag::breg_sne_row: return eval_sne_row(kind, dh, dt, want_grad);
        case LossTag::breg_sne_matrix: return eval_sne_matrix(kind, dh, dt, want_grad);
        case LossTag::margin_hinge: return eval_margin_hinge(kind, dh, want_grad);
        case LossTag::tsne: return eval_tsne(dh, dt, want_grad);
    }
    throw invalid_parameter("unknown loss tag");
}

void check_pair(const LossKind& kind, const DistanceMatrix& dhat, const DistanceMatrix& d) {
    kind.check();
    if (dhat.size() != d.size()) {
        std::ostringstream os;
        os << "distance matrix size mismatch: " << dhat.size() << " vs " << d.size();
        throw invalid_input(os.str());
    }
    if (kind.needs_adjacency() && kind.adjacency->size() != d.size()) {
        std::ostringstream os;
        os << "adjacency size " << kind.adjacency->size() << " does not match distances "
           << d.size();
        throw invalid_input(os.str());
    }
}

}  // namespace

LossKind LossKind::simple(LossTag tag) {
    LossKind k;
    k.tag = tag;
    return k;
}

LossKind LossKind::with_sigma(LossTag tag, double sigma) {
    LossKind k;
    k.tag = tag;
    k.sigma = sigma;
    return k;
}

LossKind LossKind::cca(CcaWeight w, double sigma_or_eps) {
    LossKind k;
    k.tag = LossTag::cca;
    k.cca_weight = w;
    if (w == CcaWeight::exponential) k.sigma = sigma_or_eps;
    if (w == CcaWeight::indicator) k.eps = sigma_or_eps;
    return k;
}

LossKind LossKind::with_adjacency(LossTag tag, std::shared_ptr<const AdjacencyMatrix> adj) {
    LossKind k;
    k.tag = tag;
    k.adjacency = std::move(adj);
    return k;
}

bool LossKind::needs_adjacency() const {
    return tag == LossTag::nbr_indicator || tag == LossTag::nbr_quadratic ||
           tag == LossTag::margin_hinge;
}

bool LossKind::is_convex() const {
    if (tag == LossTag::tsne) return false;
    if (tag == LossTag::cca) return cca_weight == CcaWeight::reciprocal;
    return true;
}

void LossKind::check() const {
    if (tag == LossTag::breg_exp && !(sigma > 0.0))
        throw invalid_parameter("breg_exp requires sigma > 0");
    if (tag == LossTag::cca && cca_weight == CcaWeight::exponential && !(sigma > 0.0))
        throw invalid_parameter("cca exponential weight requires sigma > 0");
    if (tag == LossTag::cca && cca_weight == CcaWeight::indicator && !(eps > 0.0))
        throw invalid_parameter("cca indicator weight requires eps > 0");
    if (needs_adjacency() && !adjacency)
        throw invalid_parameter(std::string(loss_tag_name(tag)) + " requires an adjacency matrix");
}

const char* loss_tag_name(LossTag tag) {
    switch (tag) {
        case LossTag::sq_centered: return "sq_centered";
        case LossTag::sq: return "sq";
        case LossTag::sqrt_sq: return "sqrt_sq";
        case LossTag::abs: return "abs";
        case LossTag::sammon: return "sammon";
        case LossTag::cca: return "cca";
        case LossTag::nbr_indicator: return "nbr_indicator";
        case LossTag::nbr_quadratic: return "nbr_quadratic";
        case LossTag::breg_entropy: return "breg_entropy";
        case LossTag::breg_exp: return "breg_exp";
        case LossTag::breg_sne_row: return "breg_sne_row";
        case LossTag::breg_sne_matrix: return "breg_sne_matrix";
        case LossTag::margin_hinge: return "margin_hinge";
        case LossTag::tsne: return "tsne";
    }
    return "unknown";
}

double loss_value(const LossKind& kind, const DistanceMatrix& dhat, const DistanceMatrix& d) {
    check_pair(kind, dhat, d);
    return eval_loss(kind, dhat.mat(), d.mat(), false).value;
}

Matrix loss_subgradient(const LossKind& kind, const DistanceMatrix& dhat,
                        const DistanceMatrix& d) {
    check_pair(kind, dhat, d);
    if (!kind.supports_subgradient())
        throw unsupported_operation(
            "nbr_indicator has no usable subgradient; optimize nbr_quadratic instead");
    return eval_loss(kind, dhat.mat(), d.mat(), true).grad;
}

Vector transfer_row(const DistanceMatrix& d, Index i, bool exclude_diagonal) {
    const Matrix& m = d.mat();
    const Index t = m.rows();
    if (i < 0 || i >= t) throw invalid_parameter("transfer_row index out of range");
    const auto& kt = kern::active();
    Vector p(t);
    double mn, s;
    if (exclude_diagonal) {
        const auto segs = col_segs(m, i);
        mn = std::numeric_limits<double>::infinity();
        for (const Seg& sg : segs)
            if (sg.n) mn = std::min(mn, kt.min(sg.p, sg.n));
        s = kt.exp_neg_sum(segs[0].p, mn, segs[0].n) + kt.exp_neg_sum(segs[1].p, mn, segs[1].n);
    } else {
        mn = kt.min(m.col(i).data(), static_cast<size_t>(t));
        s = kt.exp_neg_sum(m.col(i).data(), mn, static_cast<size_t>(t));
    }
    kt.exp_neg(m.col(i).data(), mn, p.data(), static_cast<size_t>(t));
    if (exclude_diagonal) p[i] = 0.0;
    kt.scale(p.data(), 1.0 / s, p.data(), static_cast<size_t>(t));
    return p;
}

Matrix transfer_matrix(const DistanceMatrix& d, bool exclude_diagonal) {
    const Matrix& m = d.mat();
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(m.size());
    double mn, s;
    if (exclude_diagonal) {
        mn = offdiag_min(m);
        s = offdiag_exp_neg_sum(m, mn);
    } else {
        mn = kt.min(m.data(), n);
        s = kt.exp_neg_sum(m.data(), mn, n);
    }
    Matrix p(m.rows(), m.cols());
    kt.exp_neg(m.data(), mn, p.data(), n);
    if (exclude_diagonal) p.diagonal().setZero();
    kt.scale(p.data(), 1.0 / s, p.data(), n);
    return p;
}

Matrix transfer_q_tsne(const DistanceMatrix& dhat) {
    const Matrix& m = dhat.mat();
    const auto& kt = kern::active();
    const size_t n = static_cast<size_t>(m.size());
    Matrix w(m.rows(), m.cols());
    kt.tsne_weight(m.data(), w.data(), n);
    w.diagonal().setZero();
    const double z = kt.sum(w.data(), n);
    kt.scale(w.data(), 1.0 / z, w.data(), n);
    return w;
}

}  // namespace unfold
