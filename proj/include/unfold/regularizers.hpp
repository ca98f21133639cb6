#pragma once

#include "unfold/matgeo.hpp"

#include <optional>

// Regularizer catalog over centered PSD kernels. The partition family
// trades off spreading the top d spectral directions (weight alpha)
// against shrinking the rest (weight beta):
//
//   partition            min over the Fantope of beta*tr(K) - (alpha+beta)*tr(PK)
//   partition_smoothed   the same plus a small quadratic gamma/2 * tr(K^2)
//   completed_square     jointly convex upper bound obtained by completing
//                        the square: min_P beta*tr(K) + gamma/2 ||K - cP||_F^2,
//                        c = (alpha+beta)/gamma
//   biconjugate          the tightest convex lower bound (Fenchel
//                        bi-conjugate) of the smoothed form, evaluated by an
//                        eigendecomposition plus an exact univariate
//                        piecewise-quadratic minimization
//
// Pointwise: biconjugate <= smoothed <= completed_square, and
// smoothed >= completed_square - d*(alpha+beta)^2/(2*gamma).

namespace unfold {

enum class RegTag {
    rank_trunc,  // contributes zero; rank enforced by truncation alone
    trace,
    neg_trace,
    partition,
    partition_smoothed,
    completed_square,
    biconjugate,
};

struct RegKind {
    RegTag tag = RegTag::rank_trunc;
    double alpha = 1.0;
    double beta = 0.1;
    double gamma = 1e-3;
    Index d = 2;

    static RegKind make(RegTag tag, Index d = 2, double alpha = 1.0, double beta = 0.1,
                        double gamma = 1e-3);

    void check(Index t) const;  // parameter ranges against problem size
    bool is_convex() const;
    bool uses_spectrum() const;  // needs an eigendecomposition to evaluate
};

const char* reg_tag_name(RegTag tag);

// Euclidean projection of v onto {p : 0 <= p_i <= 1, sum p = d}, the
// eigenvalue form of the Fantope. Bisection on the shift in
// p_i = clamp(v_i - tau, 0, 1), finished by an exact solve on the active
// linear piece.
Vector fantope_project(const Vector& v, Index d);

struct BiconjWitness {
    Vector z;                     // descending
    std::optional<double> lambda; // tie value when the order constraint binds
    double value = 0.0;
    Matrix zmat;                  // subgradient witness in the query's eigenbasis
};

// Evaluate the bi-conjugate regularizer at K: eigendecompose, solve the
// separable problem with an order constraint, assemble the witness.
BiconjWitness biconj_solve(const KernelMatrix& k, Index d, double alpha, double beta,
                           double gamma);

// Spectral-only variant used by solver/tests that already own the
// eigenvalues (u descending).
BiconjWitness biconj_solve_spectrum(const Vector& u, Index d, double alpha, double beta,
                                    double gamma);

double reg_value(const RegKind& kind, const KernelMatrix& k);
Matrix reg_subgradient(const RegKind& kind, const KernelMatrix& k);

// Shared-eigendecomposition variants so a solver iteration reuses the
// projection's spectrum instead of refactoring.
double reg_value_with_eig(const RegKind& kind, const EigenPair& eig);
Matrix reg_subgradient_with_eig(const RegKind& kind, const EigenPair& eig);

}  // namespace unfold
