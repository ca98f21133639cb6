#pragma once

#include "unfold/losses.hpp"
#include "unfold/regularizers.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

// Accelerated projected subgradient descent for
//   min_K  w * L(D(K); D_target) + R(K)   over  {K symmetric, PSD, K 1 = 0}.
//
// The composite subgradient pulls the pairwise-loss subgradient back to
// kernel space through the adjoint of the kernel->distance map. Every
// iterate is projected onto the feasible set; because accelerated schemes
// are not monotone, the best iterate seen is tracked and returned.

namespace unfold {

enum class StepRule { fixed, sqrt_decay };

struct SolverConfig {
    int max_iters = 5000;
    StepRule step_rule = StepRule::sqrt_decay;
    // 0 picks a scale-aware default: the inverse of a secant estimate of
    // the composite gradient's curvature near K_0, with
    // (1 + ||K_target||_F) / (1 + ||G_0||_F) as fallback when the probe
    // is degenerate.
    double eta0 = 0.0;
    bool momentum = true;
    bool restart = true;  // reset momentum when the objective increases
    double tol_rel = 1e-7;
    int patience = 50;
    double loss_weight = 1.0;
    // centering is part of the feasible set by default; disable to project
    // onto {symmetric, PSD} only
    bool center_iterates = true;
    std::uint64_t seed = 0;
    std::function<void(int iter, double objective, double elapsed_seconds)> progress;
};

enum class StopReason { converged, max_iters, diverged };

struct SolverState {
    Matrix best_k;
    double best_objective = 0.0;
    Matrix final_k;
    double final_objective = 0.0;
    std::vector<double> history;  // objective at iterate 0..k
    int iterations = 0;
    double elapsed_seconds = 0.0;
    StopReason stop = StopReason::max_iters;
    // inline checks accumulated over the run
    bool feasible_ok = true;
    bool best_monotone_ok = true;

    KernelMatrix best_kernel() const { return KernelMatrix::trusted(best_k, true); }
};

class diverged_error : public error {
public:
    diverged_error(const std::string& what, SolverState state)
        : error(what), state(std::move(state)) {}
    SolverState state;
};

// Euclidean projection onto the feasible set: symmetrize, center, clip
// negative eigenvalues. Clipping preserves the centered subspace (the ones
// vector stays in the null space), so the composition is exact.
KernelMatrix project_feasible(const Matrix& m);

// Shared-spectrum variant; fills *eig with the spectrum of the projected
// matrix so callers can reuse it.
KernelMatrix project_feasible_with_eig(const Matrix& m, bool center, EigenPair* eig);

double objective_value(const KernelMatrix& k, const LossKind& loss, const DistanceMatrix& d_target,
                       const RegKind& reg, double loss_weight = 1.0);

SolverState solve(const DistanceMatrix& d_target, const LossKind& loss, const RegKind& reg,
                  const SolverConfig& cfg,
                  const std::optional<KernelMatrix>& k0 = std::nullopt);

}  // namespace unfold
