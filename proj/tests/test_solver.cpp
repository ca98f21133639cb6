#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "unfold/solver.hpp"

#include <cmath>
#include <memory>
#include <vector>

using namespace unfold;
using oracles::Rng;
using oracles::close;

namespace {

DistanceMatrix random_target(Rng& rng, Index t, Index dims = 3) {
    return DistanceMatrix::validated(oracles::random_edm_entries(rng, t, dims, 1.5));
}

std::shared_ptr<const AdjacencyMatrix> complete_adjacency(Index t) {
    const Matrix n = Matrix::Constant(t, t, 1.0) - Matrix::Identity(t, t);
    return std::make_shared<AdjacencyMatrix>(
        AdjacencyMatrix::trusted(n, NeighborRule::knn(static_cast<int>(t) - 1), true));
}

bool is_feasible(const Matrix& k, double tol = 1e-8) {
    const double scale = std::max(1.0, k.norm());
    if ((k - k.transpose()).cwiseAbs().maxCoeff() > tol * scale) return false;
    if ((k.rowwise().sum()).cwiseAbs().maxCoeff() > tol * scale) return false;
    return sym_eig(k).values.minCoeff() >= -tol * scale;
}

}  // namespace

TEST_CASE("projection returns feasible points already in the set unchanged") {
    Rng rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix k = oracles::random_centered_psd(rng, 7, 3, 1.2);
        const Matrix p = project_feasible(k).mat();
        CHECK((p - k).norm() <= 1e-12 * std::max(1.0, k.norm()));
    }
}

TEST_CASE("projection sends the negative identity to zero") {
    const Matrix p = project_feasible(Matrix(-Matrix::Identity(6, 6))).mat();
    CHECK(p.norm() <= 1e-12);
}

TEST_CASE("projection agrees with alternating projections") {
    Rng rng(72);
    for (int rep = 0; rep < 30; ++rep) {
        const Matrix m = oracles::random_symmetric(rng, 8, 2.0);
        const Matrix p = project_feasible(m).mat();
        CHECK(is_feasible(p));
        const Matrix ref = oracles::dykstra_project(m, 2000);
        CHECK((p - ref).norm() <= 1e-8 * std::max(1.0, ref.norm()));
    }
}

TEST_CASE("projection variants expose their spectrum and the PSD-only mode") {
    Rng rng(73);
    const Matrix m = oracles::random_symmetric(rng, 7, 1.5);

    EigenPair eig;
    const Matrix p = project_feasible_with_eig(m, true, &eig).mat();
    CHECK((p - project_feasible(m).mat()).norm() <= 1e-14 * std::max(1.0, p.norm()));
    const Matrix recon = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK((recon - p).norm() <= 1e-10 * std::max(1.0, p.norm()));
    CHECK(eig.values.minCoeff() >= 0.0);

    const Matrix q = project_feasible_with_eig(m, false, nullptr).mat();
    CHECK((q - oracles::psd_clip_ref(m)).norm() <= 1e-10 * std::max(1.0, q.norm()));
}

TEST_CASE("objective recomposes loss and regularizer") {
    Rng rng(74);
    const DistanceMatrix target = random_target(rng, 7);
    const KernelMatrix k = project_feasible(oracles::random_centered_psd(rng, 7, 3, 1.1));
    const DistanceMatrix dh = edm_of_kernel(k);
    for (const LossKind& loss : {LossKind::simple(LossTag::sq), LossKind::simple(LossTag::sammon),
                                 LossKind::simple(LossTag::breg_sne_matrix)}) {
        for (RegTag tag : {RegTag::rank_trunc, RegTag::neg_trace, RegTag::partition_smoothed}) {
            const RegKind reg = RegKind::make(tag, 2);
            const double expect =
                10.0 * loss_value(loss, dh, target) + reg_value(reg, k);
            CHECK(close(objective_value(k, loss, target, reg, 10.0), expect, 1e-12));
        }
    }
}

TEST_CASE("composite subgradient passes a finite-difference check") {
    Rng rng(75);
    const Index t = 7;
    const DistanceMatrix target = random_target(rng, t);
    const Matrix kmat = oracles::random_centered_psd(rng, t, 5, 1.3);
    const KernelMatrix k = KernelMatrix::trusted(kmat, true);
    const double w = 10.0;

    for (const LossKind& loss : {LossKind::simple(LossTag::sq), LossKind::simple(LossTag::sammon)}) {
        for (RegTag tag : {RegTag::partition_smoothed, RegTag::biconjugate}) {
            const RegKind reg = RegKind::make(tag, 2);
            const Matrix g = w * edm_adjoint(loss_subgradient(loss, edm_of_kernel(k), target)) +
                             reg_subgradient(reg, k);
            const Matrix v = oracles::random_symmetric(rng, t);
            const double h = 1e-6 * (1.0 + kmat.norm());
            const double up =
                objective_value(KernelMatrix::trusted(kmat + h * v, false), loss, target, reg, w);
            const double dn =
                objective_value(KernelMatrix::trusted(kmat - h * v, false), loss, target, reg, w);
            const double numeric = (up - dn) / (2.0 * h);
            const double analytic = (g.array() * v.array()).sum();
            CHECK(std::fabs(analytic - numeric) <= 1e-4 * std::max(1.0, std::fabs(numeric)));
        }
    }
}

TEST_CASE("starting at the optimum stays there") {
    Rng rng(76);
    const DistanceMatrix target = random_target(rng, 10);
    SolverConfig cfg;
    cfg.max_iters = 60;
    const SolverState st = solve(target, LossKind::simple(LossTag::sq),
                                 RegKind::make(RegTag::rank_trunc), cfg);
    CHECK(st.best_objective <= 1e-12);
    CHECK(st.feasible_ok);
    CHECK(st.best_monotone_ok);
    CHECK(st.history.size() == static_cast<std::size_t>(st.iterations) + 1);
}

TEST_CASE("reconstruction from a cold start drives the objective to zero") {
    Rng rng(77);
    const Index t = 12;
    const DistanceMatrix target = random_target(rng, t);
    const KernelMatrix k0 = KernelMatrix::trusted(Matrix::Zero(t, t), true);

    SUBCASE("quadratic loss on the complete neighbor graph") {
        const LossKind loss =
            LossKind::with_adjacency(LossTag::nbr_quadratic, complete_adjacency(t));
        SolverConfig cfg;
        cfg.max_iters = 2000;
        const SolverState st = solve(target, loss, RegKind::make(RegTag::rank_trunc), cfg, k0);
        CHECK(st.best_objective <= 1e-5 * std::max(1.0, st.history.front()));
        CHECK(st.feasible_ok);
        CHECK(st.best_monotone_ok);
    }

    SUBCASE("centered quadratic loss reaches the spectral optimum") {
        SolverConfig cfg;
        cfg.max_iters = 2000;
        const SolverState st = solve(target, LossKind::simple(LossTag::sq_centered),
                                     RegKind::make(RegTag::rank_trunc), cfg, k0);
        CHECK(st.best_objective <= 1e-6 * std::max(1.0, st.history.front()));
    }
}

TEST_CASE("different starts reach the same value on a convex problem") {
    Rng rng(78);
    const Index t = 10;
    const DistanceMatrix target = random_target(rng, t);
    const LossKind loss = LossKind::simple(LossTag::sq);
    const RegKind reg = RegKind::make(RegTag::trace);
    SolverConfig cfg;
    cfg.max_iters = 3000;
    cfg.tol_rel = 1e-10;

    const SolverState warm = solve(target, loss, reg, cfg);
    const SolverState cold =
        solve(target, loss, reg, cfg, KernelMatrix::trusted(Matrix::Zero(t, t), true));
    CHECK(std::fabs(warm.best_objective - cold.best_objective) <=
          1e-3 * std::max(1.0, std::fabs(warm.best_objective)));
}

TEST_CASE("plain descent with a small fixed step is monotone") {
    Rng rng(79);
    const DistanceMatrix target = random_target(rng, 8);
    SolverConfig cfg;
    cfg.momentum = false;
    cfg.step_rule = StepRule::fixed;
    cfg.eta0 = 1e-5;
    cfg.max_iters = 200;
    const SolverState st =
        solve(target, LossKind::simple(LossTag::sq), RegKind::make(RegTag::trace), cfg,
              KernelMatrix::trusted(Matrix::Zero(8, 8), true));
    for (std::size_t i = 1; i < st.history.size(); ++i)
        CHECK(st.history[i] <= st.history[i - 1] + 1e-12 * std::max(1.0, std::fabs(st.history[i - 1])));
}

TEST_CASE("best objective never increases and the iterates stay feasible") {
    Rng rng(80);
    const DistanceMatrix target = random_target(rng, 9);
    SolverConfig cfg;
    cfg.max_iters = 400;
    const SolverState st = solve(target, LossKind::simple(LossTag::breg_sne_matrix),
                                 RegKind::make(RegTag::partition_smoothed, 2), cfg,
                                 KernelMatrix::trusted(Matrix::Zero(9, 9), true));
    CHECK(st.feasible_ok);
    CHECK(st.best_monotone_ok);
    CHECK(is_feasible(st.best_k));
    double best = st.history.front();
    for (double f : st.history) best = std::min(best, f);
    CHECK(st.best_objective == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("iteration accounting, stop reasons, and the progress callback") {
    Rng rng(81);
    const DistanceMatrix target = random_target(rng, 8);

    SolverConfig capped;
    capped.max_iters = 30;
    capped.tol_rel = 0.0;  // never declare convergence
    int calls = 0, last_iter = -1;
    capped.progress = [&](int iter, double objective, double elapsed) {
        ++calls;
        last_iter = iter;
        CHECK(std::isfinite(objective));
        CHECK(elapsed >= 0.0);
    };
    const SolverState st = solve(target, LossKind::simple(LossTag::sammon),
                                 RegKind::make(RegTag::trace), capped,
                                 KernelMatrix::trusted(Matrix::Zero(8, 8), true));
    CHECK(st.stop == StopReason::max_iters);
    CHECK(st.iterations == 30);
    CHECK(calls == 30);
    CHECK(last_iter == 29);
    CHECK(st.elapsed_seconds >= 0.0);

    SolverConfig easy;
    easy.max_iters = 5000;
    const SolverState done =
        solve(target, LossKind::simple(LossTag::sq), RegKind::make(RegTag::rank_trunc), easy);
    CHECK(done.stop == StopReason::converged);
    CHECK(done.iterations < easy.max_iters);
}

TEST_CASE("a reckless step size raises a divergence error carrying state") {
    Rng rng(82);
    const DistanceMatrix target = random_target(rng, 8);
    SolverConfig cfg;
    cfg.step_rule = StepRule::fixed;
    cfg.eta0 = 1e8;
    cfg.max_iters = 200;
    try {
        solve(target, LossKind::simple(LossTag::sq), RegKind::make(RegTag::trace), cfg,
              KernelMatrix::trusted(Matrix::Zero(8, 8), true));
        FAIL("expected diverged_error");
    } catch (const diverged_error& e) {
        CHECK(e.state.stop == StopReason::diverged);
        CHECK(!e.state.history.empty());
    }
}

TEST_CASE("configuration validation") {
    Rng rng(83);
    const DistanceMatrix target = random_target(rng, 6);
    const LossKind loss = LossKind::simple(LossTag::sq);
    const RegKind reg = RegKind::make(RegTag::trace);

    SolverConfig bad = SolverConfig{};
    bad.max_iters = 0;
    CHECK_THROWS_AS(solve(target, loss, reg, bad), invalid_parameter);
    bad = SolverConfig{};
    bad.eta0 = -1.0;
    CHECK_THROWS_AS(solve(target, loss, reg, bad), invalid_parameter);
    bad = SolverConfig{};
    bad.patience = 0;
    CHECK_THROWS_AS(solve(target, loss, reg, bad), invalid_parameter);
    bad = SolverConfig{};
    bad.loss_weight = -2.0;
    CHECK_THROWS_AS(solve(target, loss, reg, bad), invalid_parameter);

    // mismatched warm start
    CHECK_THROWS_AS(solve(target, loss, reg, SolverConfig{},
                          KernelMatrix::trusted(Matrix::Zero(5, 5), true)),
                    invalid_input);

    // the indicator loss admits no subgradient to descend along
    const LossKind indicator = LossKind::with_adjacency(
        LossTag::nbr_indicator,
        std::make_shared<AdjacencyMatrix>(build_adjacency(target, NeighborRule::knn(2), true)));
    CHECK_THROWS_AS(solve(target, indicator, reg, SolverConfig{}), unsupported_operation);
}
