#include "unfold/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace unfold {

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// sum of clamp(v - tau, 0, 1)
double fantope_mass(const Vector& v, double tau) {
    double s = 0.0;
    for (Index i = 0; i < v.size(); ++i) s += clamp01(v[i] - tau);
    return s;
}

Matrix spectral_matrix(const EigenPair& eig, const Vector& diag) {
    Matrix m = eig.vectors * diag.asDiagonal() * eig.vectors.transpose();
    return 0.5 * (m + m.transpose()).eval();
}

Matrix top_projector(const EigenPair& eig, Index d) {
    const auto q = eig.vectors.leftCols(d);
    Matrix p = q * q.transpose();
    return 0.5 * (p + p.transpose()).eval();
}

}  // namespace

RegKind RegKind::make(RegTag tag, Index d, double alpha, double beta, double gamma) {
    RegKind k;
    k.tag = tag;
    k.d = d;
    k.alpha = alpha;
    k.beta = beta;
    k.gamma = gamma;
    return k;
}

bool RegKind::is_convex() const {
    return tag != RegTag::partition && tag != RegTag::partition_smoothed;
}

bool RegKind::uses_spectrum() const {
    switch (tag) {
        case RegTag::partition:
        case RegTag::partition_smoothed:
        case RegTag::completed_square:
        case RegTag::biconjugate: return true;
        default: return false;
    }
}

void RegKind::check(Index t) const {
    if (alpha < 0.0 || beta < 0.0) throw invalid_parameter("alpha and beta must be >= 0");
    const bool needs_gamma = tag == RegTag::partition_smoothed ||
                             tag == RegTag::completed_square || tag == RegTag::biconjugate;
    if (needs_gamma && !(gamma > 0.0)) throw invalid_parameter("gamma must be > 0");
    if (uses_spectrum() && (d < 1 || d > t - 1)) {
        std::ostringstream os;
        os << "embedding dimension " << d << " outside [1, " << t - 1 << "]";
        throw invalid_parameter(os.str());
    }
}

const char* reg_tag_name(RegTag tag) {
    switch (tag) {
        case RegTag::rank_trunc: return "rank_trunc";
        case RegTag::trace: return "trace";
        case RegTag::neg_trace: return "neg_trace";
        case RegTag::partition: return "partition";
        case RegTag::partition_smoothed: return "partition_smoothed";
        case RegTag::completed_square: return "completed_square";
        case RegTag::biconjugate: return "biconjugate";
    }
    return "unknown";
}

Vector fantope_project(const Vector& v, Index d) {
    const Index n = v.size();
    if (d < 1 || d > n) {
        std::ostringstream os;
        os << "fantope dimension " << d << " outside [1, " << n << "]";
        throw invalid_parameter(os.str());
    }
    const double target = static_cast<double>(d);
    double lo = v.minCoeff() - 1.0;  // mass n >= d
    double hi = v.maxCoeff();        // mass 0 < d
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fantope_mass(v, mid) >= target)
            lo = mid;
        else
            hi = mid;
    }

    // exact solve on the bracketed linear piece, with re-classification in
    // case the bracket still straddles a breakpoint at roundoff level
    double tau = 0.5 * (lo + hi);
    for (int pass = 0; pass < 3; ++pass) {
        Index saturated = 0, free_count = 0;
        double free_sum = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double r = v[i] - tau;
            if (r >= 1.0)
                ++saturated;
            else if (r > 0.0) {
                ++free_count;
                free_sum += v[i];
            }
        }
        if (free_count == 0) break;  // flat piece: mass already equals d
        const double next =
            (free_sum + static_cast<double>(saturated) - target) / static_cast<double>(free_count);
        if (next == tau) break;
        tau = next;
    }

    Vector p(n);
    for (Index i = 0; i < n; ++i) p[i] = clamp01(v[i] - tau);
    return p;
}

BiconjWitness biconj_solve_spectrum(const Vector& u, Index d, double alpha, double beta,
                                    double gamma) {
    const Index t = u.size();
    if (!(gamma > 0.0)) throw invalid_parameter("gamma must be > 0");
    if (d < 1 || d > t) throw invalid_parameter("dimension out of range in spectral solve");

    Vector zhat(t);
    for (Index i = 0; i < t; ++i) zhat[i] = (i < d) ? gamma * u[i] - alpha : gamma * u[i] + beta;

    BiconjWitness w;
    if (d == t || zhat[d - 1] >= zhat[d]) {
        w.z = zhat;
    } else {
        // The order constraint binds: minimize the convex piecewise
        // quadratic h(lambda) obtained by tying the violated block,
        //   h'(lambda) = sum_{i<d, zhat_i<=lambda} (-2g u_i + 2[lambda+alpha]_+)
        //              + sum_{i>=d, zhat_i>=lambda} (-2g u_i + 2[lambda-beta]_+),
        // by sweeping its breakpoints in order. h' is continuous, so events
        // at equal positions commute.
        enum class Ev { top_in, bot_out, hinge_a, hinge_b };
        std::vector<std::pair<double, std::pair<Ev, Index>>> events;
        events.reserve(static_cast<size_t>(t) + 2);
        for (Index i = 0; i < d; ++i) events.push_back({zhat[i], {Ev::top_in, i}});
        for (Index i = d; i < t; ++i) events.push_back({zhat[i], {Ev::bot_out, i}});
        events.push_back({-alpha, {Ev::hinge_a, -1}});
        events.push_back({beta, {Ev::hinge_b, -1}});
        std::sort(events.begin(), events.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        Index n_top = 0;
        double sum_top = 0.0;
        Index n_bot = t - d;
        double sum_bot = u.tail(t - d).sum();
        bool hinge_a_on = false, hinge_b_on = false;

        double lambda = std::numeric_limits<double>::quiet_NaN();
        double prev = -std::numeric_limits<double>::infinity();
        const size_t ne = events.size();
        for (size_t e = 0; e <= ne && std::isnan(lambda); ++e) {
            const double right =
                (e < ne) ? events[e].first : std::numeric_limits<double>::infinity();
            if (right > prev) {
                const double c1 = 2.0 * (static_cast<double>(hinge_a_on ? n_top : 0) +
                                         static_cast<double>(hinge_b_on ? n_bot : 0));
                const double c0 = -2.0 * gamma * (sum_top + sum_bot) +
                                  (hinge_a_on ? 2.0 * static_cast<double>(n_top) * alpha : 0.0) -
                                  (hinge_b_on ? 2.0 * static_cast<double>(n_bot) * beta : 0.0);
                if (c1 > 0.0) {
                    const double root = -c0 / c1;
                    if (root <= right) lambda = std::max(root, prev);
                } else if (c0 > 0.0) {
                    // constant positive h': minimize at the left end; if that
                    // is -inf (only reachable with roundoff-negative spectra)
                    // clamp to the first breakpoint
                    lambda = std::isfinite(prev) ? prev : right;
                } else if (c0 == 0.0 && std::isfinite(prev)) {
                    lambda = prev;  // flat at the minimum
                }
            }
            if (e < ne && std::isnan(lambda)) {
                switch (events[e].second.first) {
                    case Ev::top_in:
                        ++n_top;
                        sum_top += u[events[e].second.second];
                        break;
                    case Ev::bot_out:
                        --n_bot;
                        sum_bot -= u[events[e].second.second];
                        break;
                    case Ev::hinge_a: hinge_a_on = true; break;
                    case Ev::hinge_b: hinge_b_on = true; break;
                }
                prev = events[e].first;
            }
        }
        if (std::isnan(lambda))
            throw numeric_failure("order-constrained spectral solve found no minimizer");

        w.lambda = lambda;
        w.z.resize(t);
        for (Index i = 0; i < t; ++i)
            w.z[i] = (i < d) ? std::max(zhat[i], lambda) : std::min(zhat[i], lambda);
    }

    double penalty = 0.0;
    for (Index i = 0; i < t; ++i) {
        const double h = (i < d) ? std::max(w.z[i] + alpha, 0.0) : std::max(w.z[i] - beta, 0.0);
        penalty += h * h;
    }
    w.value = u.dot(w.z) - penalty / (2.0 * gamma);
    return w;
}

BiconjWitness biconj_solve(const KernelMatrix& k, Index d, double alpha, double beta,
                           double gamma) {
    const EigenPair eig = sym_eig(k.mat());
    BiconjWitness w = biconj_solve_spectrum(eig.values, d, alpha, beta, gamma);
    w.zmat = spectral_matrix(eig, w.z);
    return w;
}

double reg_value_with_eig(const RegKind& kind, const EigenPair& eig) {
    const Vector& lam = eig.values;
    switch (kind.tag) {
        case RegTag::rank_trunc: return 0.0;
        case RegTag::trace: return kind.beta * lam.sum();
        case RegTag::neg_trace: return -kind.alpha * lam.sum();
        case RegTag::partition:
            return kind.beta * lam.sum() - (kind.alpha + kind.beta) * lam.head(kind.d).sum();
        case RegTag::partition_smoothed:
            return 0.5 * kind.gamma * lam.squaredNorm() + kind.beta * lam.sum() -
                   (kind.alpha + kind.beta) * lam.head(kind.d).sum();
        case RegTag::completed_square: {
            const double c = (kind.alpha + kind.beta) / kind.gamma;
            const Vector p = fantope_project(lam / c, kind.d);
            return kind.beta * lam.sum() + 0.5 * kind.gamma * (lam - c * p).squaredNorm();
        }
        case RegTag::biconjugate:
            return biconj_solve_spectrum(lam, kind.d, kind.alpha, kind.beta, kind.gamma).value;
    }
    throw invalid_parameter("unknown regularizer tag");
}

Matrix reg_subgradient_with_eig(const RegKind& kind, const EigenPair& eig) {
    const Vector& lam = eig.values;
    const Index t = lam.size();
    switch (kind.tag) {
        case RegTag::rank_trunc:
            throw unsupported_operation(
                "rank_trunc contributes no subgradient; rank is enforced by truncation");
        case RegTag::trace: return kind.beta * Matrix::Identity(t, t);
        case RegTag::neg_trace: return -kind.alpha * Matrix::Identity(t, t);
        case RegTag::partition:
            return kind.beta * Matrix::Identity(t, t) -
                   (kind.alpha + kind.beta) * top_projector(eig, kind.d);
        case RegTag::partition_smoothed:
            return kind.beta * Matrix::Identity(t, t) -
                   (kind.alpha + kind.beta) * top_projector(eig, kind.d) +
                   kind.gamma * spectral_matrix(eig, lam);
        case RegTag::completed_square: {
            const double c = (kind.alpha + kind.beta) / kind.gamma;
            const Vector p = fantope_project(lam / c, kind.d);
            return kind.beta * Matrix::Identity(t, t) +
                   spectral_matrix(eig, kind.gamma * (lam - c * p));
        }
        case RegTag::biconjugate: {
            BiconjWitness w =
                biconj_solve_spectrum(lam, kind.d, kind.alpha, kind.beta, kind.gamma);
            return spectral_matrix(eig, w.z);
        }
    }
    throw invalid_parameter("unknown regularizer tag");
}

double reg_value(const RegKind& kind, const KernelMatrix& k) {
    kind.check(k.size());
    if (!kind.uses_spectrum()) {
        switch (kind.tag) {
            case RegTag::rank_trunc: return 0.0;
            case RegTag::trace: return kind.beta * k.mat().trace();
            case RegTag::neg_trace: return -kind.alpha * k.mat().trace();
            default: break;
        }
    }
    return reg_value_with_eig(kind, sym_eig(k.mat()));
}

Matrix reg_subgradient(const RegKind& kind, const KernelMatrix& k) {
    kind.check(k.size());
    const Index t = k.size();
    switch (kind.tag) {
        case RegTag::rank_trunc:
            throw unsupported_operation(
                "rank_trunc contributes no subgradient; rank is enforced by truncation");
        case RegTag::trace: return kind.beta * Matrix::Identity(t, t);
        case RegTag::neg_trace: return -kind.alpha * Matrix::Identity(t, t);
        default: return reg_subgradient_with_eig(kind, sym_eig(k.mat()));
    }
}

}  // namespace unfold
