#pragma once

#include "unfold/matgeo.hpp"

namespace unfold {

// Neighborhood rule: k nearest neighbors or an epsilon ball. The epsilon
// threshold applies to the entries of the squared-distance matrix as-is.
struct NeighborRule {
    enum class Kind { knn, eps };
    Kind kind = Kind::knn;
    int k = 6;
    double radius = 0.0;

    static NeighborRule knn(int k) { return {Kind::knn, k, 0.0}; }
    static NeighborRule eps(double e) { return {Kind::eps, 0, e}; }
};

// Binary neighborhood indicator with zero diagonal. Stored as doubles so
// the masked loss kernels can consume rows directly.
class AdjacencyMatrix {
public:
    static AdjacencyMatrix trusted(Matrix m, NeighborRule rule, bool symmetric);

    const Matrix& mat() const { return m_; }
    Index size() const { return m_.rows(); }
    const NeighborRule& rule() const { return rule_; }
    bool symmetrized() const { return symmetric_; }

private:
    AdjacencyMatrix(Matrix m, NeighborRule rule, bool symmetric)
        : m_(std::move(m)), rule_(rule), symmetric_(symmetric) {}
    Matrix m_;
    NeighborRule rule_;
    bool symmetric_ = false;
};

// Build the neighborhood indicator of D. knn marks, per row, the k nearest
// other points with ties broken toward the smaller index; eps marks pairs
// with D_ij <= eps. symmetrize takes the elementwise max with the
// transpose (undirected relation), never removing an edge.
AdjacencyMatrix build_adjacency(const DistanceMatrix& d, NeighborRule rule,
                                bool symmetrize = true);

}  // namespace unfold
