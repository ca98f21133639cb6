#pragma once

#include "unfold/types.hpp"

#include <string>
#include <vector>

// Geometry of Gram and squared-distance matrices.
//
// For a configuration X (t points in rows), the Gram map is K = X X' and
// the squared-distance map is D_ij = K_ii + K_jj - 2 K_ij. The inverse
// direction recenters: K = -1/2 H D H with H = I - (1/t) 11'. On centered
// PSD matrices these maps are mutual inverses; on an arbitrary kernel the
// round trip lands on the centered representative H K H of the same
// distance class.

namespace unfold {

struct EigenPair {
    Vector values;  // descending
    Matrix vectors; // columns, orthonormal
};

enum class MatrixKind { data, kernel, edm, adjacency };

struct ValidationItem {
    std::string name;
    bool pass = true;
    bool required = true;  // informational items (e.g. kernel centering) don't fail a report
    double magnitude = 0.0;
    double tolerance = 0.0;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool ok() const;
    std::string summary() const;
};

// Symmetric PSD kernel. `validated` symmetrizes within tolerance and
// certifies PSD (one eigendecomposition); `trusted` skips the checks for
// matrices produced by the library itself.
class KernelMatrix {
public:
    static KernelMatrix validated(Matrix m, bool expect_centered = false);
    static KernelMatrix trusted(Matrix m, bool centered);

    const Matrix& mat() const { return m_; }
    bool centered() const { return centered_; }
    Index size() const { return m_.rows(); }

private:
    KernelMatrix(Matrix m, bool centered) : m_(std::move(m)), centered_(centered) {}
    Matrix m_;
    bool centered_ = false;
};

// Squared Euclidean distance matrix: symmetric, zero diagonal,
// nonnegative, negative type (H D H negative semidefinite). `validated`
// clamps roundoff-negative entries and the diagonal to exact zero.
class DistanceMatrix {
public:
    static DistanceMatrix validated(Matrix m);
    static DistanceMatrix trusted(Matrix m);

    const Matrix& mat() const { return m_; }
    Index size() const { return m_.rows(); }

private:
    explicit DistanceMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// K = X X' from a t x n configuration. Throws invalid_input on non-finite
// entries.
KernelMatrix kernel_of_data(const Matrix& x);

// D_ij = K_ii + K_jj - 2 K_ij, with cancellation-level negatives clamped
// to zero.
DistanceMatrix edm_of_kernel(const KernelMatrix& k);

// K = -1/2 H D H; always centered, PSD up to roundoff for a valid D.
KernelMatrix kernel_of_edm(const DistanceMatrix& d);

// H K H
KernelMatrix center_kernel(const KernelMatrix& k);

// H M H for a general square matrix.
Matrix double_center(const Matrix& m);

// Adjoint of the kernel->distance map: for G a square matrix,
// A = Diag((G + G')1) - (G + G'), so that <G, D(K)> = <A, K> for all K.
// This is how pairwise-loss gradients pull back to kernel space.
Matrix edm_adjoint(const Matrix& g);

// Full symmetric eigendecomposition, eigenvalues descending, each vector's
// first nonzero-ish entry made positive so results are reproducible.
// Checks reconstruction and orthogonality; throws numeric_failure if the
// backend fails them.
EigenPair sym_eig(const Matrix& m);

// Invariant report for a claimed matrix kind. Throws invalid_input for a
// non-square matrix (or non-finite entries); failed invariants are
// reported, not thrown.
ValidationReport validate(const Matrix& m, MatrixKind kind);

const char* matrix_kind_name(MatrixKind kind);

}  // namespace unfold
