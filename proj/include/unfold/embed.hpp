#pragma once

#include "unfold/matgeo.hpp"

namespace unfold {

// Rank-d factorization of a learned kernel: X = Q_{:,1:d} diag(sqrt(lambda_{1:d})).
struct Embedding {
    Matrix coords;            // t x d, columns ordered by descending eigenvalue
    Vector kept_eigenvalues;  // descending, >= 0
    double discarded_mass = 0.0;  // sum of the positive eigenvalues left out
};

// Keep the top d eigenpairs and factor. Round-off negatives among the kept
// eigenvalues are clamped to zero; anything genuinely negative is rejected.
Embedding truncate_embed(const KernelMatrix& k, Index d);
Embedding truncate_embed_with_eig(const EigenPair& eig, Index d);

}  // namespace unfold
