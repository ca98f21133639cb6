#include "unfold/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace unfold {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_config(const SolverConfig& cfg) {
    if (cfg.max_iters < 1) throw invalid_parameter("max_iters must be >= 1");
    if (cfg.eta0 < 0.0) throw invalid_parameter("eta0 must be >= 0 (0 = automatic)");
    if (cfg.tol_rel < 0.0) throw invalid_parameter("tol_rel must be >= 0");
    if (cfg.patience < 1) throw invalid_parameter("patience must be >= 1");
    if (cfg.loss_weight <= 0.0) throw invalid_parameter("loss_weight must be > 0");
}

}  // namespace

KernelMatrix project_feasible_with_eig(const Matrix& m, bool center, EigenPair* eig) {
    if (m.rows() != m.cols()) throw invalid_input("projection argument must be square");
    Matrix s = 0.5 * (m + m.transpose());
    if (center) s = 0.5 * (double_center(s) + double_center(s).transpose());
    EigenPair e = sym_eig(s);
    e.values = e.values.cwiseMax(0.0);
    Matrix k = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    k = 0.5 * (k + k.transpose()).eval();
    if (eig) *eig = std::move(e);
    return KernelMatrix::trusted(std::move(k), center);
}

KernelMatrix project_feasible(const Matrix& m) {
    return project_feasible_with_eig(m, true, nullptr);
}

double objective_value(const KernelMatrix& k, const LossKind& loss,
                       const DistanceMatrix& d_target, const RegKind& reg, double loss_weight) {
    return loss_weight * loss_value(loss, edm_of_kernel(k), d_target) + reg_value(reg, k);
}

SolverState solve(const DistanceMatrix& d_target, const LossKind& loss, const RegKind& reg,
                  const SolverConfig& cfg, const std::optional<KernelMatrix>& k0) {
    check_config(cfg);
    loss.check();
    if (!loss.supports_subgradient())
        throw unsupported_operation(
            "nbr_indicator cannot be optimized; use nbr_quadratic");
    const Index t = d_target.size();
    reg.check(t);

    const auto t0 = std::chrono::steady_clock::now();
    const KernelMatrix k_target = kernel_of_edm(d_target);
    const double target_scale = k_target.mat().norm();

    const bool has_reg_grad = reg.tag != RegTag::rank_trunc;
    const double w = cfg.loss_weight;

    auto objective_at = [&](const Matrix& km, const EigenPair& eig) {
        const DistanceMatrix dh = edm_of_kernel(KernelMatrix::trusted(km, cfg.center_iterates));
        return w * loss_value(loss, dh, d_target) + reg_value_with_eig(reg, eig);
    };
    auto gradient_at = [&](const Matrix& km, const EigenPair& eig) {
        const DistanceMatrix dh = edm_of_kernel(KernelMatrix::trusted(km, cfg.center_iterates));
        Matrix g = w * edm_adjoint(loss_subgradient(loss, dh, d_target));
        if (has_reg_grad) g += reg_subgradient_with_eig(reg, eig);
        return g;
    };

    SolverState st;
    EigenPair eig_k;
    {
        const Matrix& start = k0 ? k0->mat() : k_target.mat();
        st.final_k = project_feasible_with_eig(start, cfg.center_iterates, &eig_k).mat();
    }
    Matrix k = st.final_k;
    Matrix k_prev = k;
    Matrix y = k;
    EigenPair eig_y = eig_k;
    double theta = 1.0;

    double f = objective_at(k, eig_k);
    st.history.push_back(f);
    st.best_objective = f;
    st.best_k = k;
    const double guard = 1e12 * std::max(1.0, std::fabs(f));
    const Vector ones = Vector::Ones(t);

    double eta0 = cfg.eta0;
    if (eta0 == 0.0) {
        // secant estimate of the composite curvature along a PSD direction;
        // a gradient-magnitude heuristic breaks both far from and at the optimum
        const Matrix g0 = gradient_at(k, eig_k);
        const Matrix dir = target_scale > 0.0 ? Matrix(k_target.mat() / target_scale)
                                              : Matrix(Matrix::Identity(t, t));
        const double delta = 1e-3 * (1.0 + k.norm());
        const Matrix probe = k + delta * dir;
        const double lhat = (gradient_at(probe, sym_eig(probe)) - g0).norm() / delta;
        eta0 = lhat > 1e-12 ? 1.0 / lhat : (1.0 + target_scale) / (1.0 + g0.norm());
    }
    std::vector<double> best_hist{f};

    int k_iter = 0;
    for (; k_iter < cfg.max_iters; ++k_iter) {
        const Matrix g = gradient_at(y, eig_y);
        const double eta =
            cfg.step_rule == StepRule::fixed
                ? eta0
                : eta0 / std::sqrt(static_cast<double>(k_iter) + 1.0);

        EigenPair eig_next;
        Matrix k_next =
            project_feasible_with_eig(y - eta * g, cfg.center_iterates, &eig_next).mat();

        const double f_prev = f;
        f = objective_at(k_next, eig_next);
        st.history.push_back(f);

        if (cfg.center_iterates) {
            const double ctr = (k_next * ones).cwiseAbs().maxCoeff();
            if (ctr > tol::sym(k_next) * std::sqrt(static_cast<double>(t)))
                st.feasible_ok = false;
        }
        if (eig_next.values.minCoeff() < 0.0) st.feasible_ok = false;

        if (f < st.best_objective) {
            st.best_objective = f;
            st.best_k = k_next;
        }
        if (st.best_objective > best_hist.back()) st.best_monotone_ok = false;
        best_hist.push_back(st.best_objective);

        if (cfg.progress) cfg.progress(k_iter, f, seconds_since(t0));

        // magnitude guard: runaway objectives on unbounded-below problems must
        // stop while the iterate is still representable, not at overflow
        if (!std::isfinite(f) || std::fabs(f) > guard) {
            st.final_k = std::move(k_next);
            st.final_objective = f;
            st.iterations = k_iter + 1;
            st.elapsed_seconds = seconds_since(t0);
            st.stop = StopReason::diverged;
            std::ostringstream os;
            os << "objective diverged at iteration " << k_iter << " (value " << f << ")";
            throw diverged_error(os.str(), std::move(st));
        }

        if (cfg.momentum) {
            if (cfg.restart && f > f_prev) {
                theta = 1.0;
                y = k_next;
                eig_y = eig_next;
            } else {
                const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
                const Matrix y_raw = k_next + ((theta - 1.0) / theta_next) * (k_next - k_prev);
                theta = theta_next;
                y = project_feasible_with_eig(y_raw, cfg.center_iterates, &eig_y).mat();
            }
        } else {
            y = k_next;
            eig_y = std::move(eig_next);
        }
        k_prev = std::move(k);
        k = std::move(k_next);

        const int back = k_iter + 1 - cfg.patience;
        if (back >= 0) {
            const double then = best_hist[static_cast<size_t>(back)];
            if (then - st.best_objective <= cfg.tol_rel * std::max(1.0, std::fabs(then))) {
                ++k_iter;
                st.stop = StopReason::converged;
                break;
            }
        }
    }
    if (st.stop != StopReason::converged) st.stop = StopReason::max_iters;

    st.final_k = std::move(k);
    st.final_objective = f;
    st.iterations = k_iter;
    st.elapsed_seconds = seconds_since(t0);
    return st;
}

}  // namespace unfold
