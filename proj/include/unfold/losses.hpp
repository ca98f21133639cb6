#pragma once

#include "unfold/matgeo.hpp"
#include "unfold/neighbors.hpp"

#include <memory>

// Loss catalog between squared-distance matrices: value and subgradient
// with respect to the first argument. All pairwise sums run over ordered
// pairs i != j; the diagonal is structurally zero and excluded. Matrix-norm
// losses (sq_centered) keep their full Frobenius form.
//
// Kinds that divide by or take logs of distances floor both operands at
// 1e-12 (off-diagonal zeros come from duplicated points and would
// otherwise poison the objective); the floor is warned once per kind.

namespace unfold {

enum class LossTag {
    sq_centered,     // ||H(D - Dhat)H||_F^2
    sq,              // ||D - Dhat||_F^2
    sqrt_sq,         // ||sqrt(D) - sqrt(Dhat)||_F^2 elementwise
    abs,             // sum |D - Dhat|
    sammon,          // sum (D - Dhat)^2 / D
    cca,             // sum (D - Dhat)^2 w(Dhat), curvilinear components
    nbr_indicator,   // 0 if Dhat matches D on neighbor pairs, else +inf
    nbr_quadratic,   // sum N (D - Dhat)^2
    breg_entropy,    // unnormalized entropy Bregman divergence
    breg_exp,        // reciprocal exponential Bregman divergence
    breg_sne_row,    // row-wise KL between softmax transfers
    breg_sne_matrix, // matrix-wise KL between softmax transfers
    margin_hinge,    // per-node large-margin hinge on neighbor distances
    tsne,            // KL to a Student-t style transfer of Dhat
};

enum class CcaWeight { reciprocal, exponential, indicator };

struct LossKind {
    LossTag tag = LossTag::sq;
    double sigma = 1.0;   // breg_exp and cca exponential weight scale
    double eps = 1.0;     // cca indicator weight threshold
    CcaWeight cca_weight = CcaWeight::reciprocal;
    // Row/matrix softmax transfers include the diagonal exp(0) term of
    // the printed formulas by default; this drops it.
    bool exclude_diagonal = false;
    std::shared_ptr<const AdjacencyMatrix> adjacency;  // nbr_*, margin_hinge

    static LossKind simple(LossTag tag);
    static LossKind with_sigma(LossTag tag, double sigma);
    static LossKind cca(CcaWeight w, double sigma_or_eps);
    static LossKind with_adjacency(LossTag tag, std::shared_ptr<const AdjacencyMatrix> adj);

    // Throws invalid_parameter / invalid_input when a parameter or the
    // adjacency requirement is violated.
    void check() const;
    bool needs_adjacency() const;
    bool is_convex() const;
    bool supports_subgradient() const { return tag != LossTag::nbr_indicator; }
};

const char* loss_tag_name(LossTag tag);

double loss_value(const LossKind& kind, const DistanceMatrix& dhat, const DistanceMatrix& d);

// Subgradient for convex kinds, gradient for the differentiable non-convex
// ones; always symmetric with zero diagonal. nbr_indicator has no usable
// subgradient and throws unsupported_operation.
Matrix loss_subgradient(const LossKind& kind, const DistanceMatrix& dhat,
                        const DistanceMatrix& d);

// Softmax transfer of one row: p_j proportional to exp(-D_ij), normalized
// over the full row (diagonal included unless exclude_diagonal).
Vector transfer_row(const DistanceMatrix& d, Index i, bool exclude_diagonal = false);

// Softmax transfer of the whole matrix, normalized over all entries
// (diagonal included unless exclude_diagonal).
Matrix transfer_matrix(const DistanceMatrix& d, bool exclude_diagonal = false);

// Student-t style transfer q_ij = (1 + Dhat_ij)^{-1} / sum_{k != l} (...),
// diagonal excluded from numerator and denominator.
Matrix transfer_q_tsne(const DistanceMatrix& dhat);

}  // namespace unfold
