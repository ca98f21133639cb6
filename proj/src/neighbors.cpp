#include "unfold/neighbors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

namespace unfold {

AdjacencyMatrix AdjacencyMatrix::trusted(Matrix m, NeighborRule rule, bool symmetric) {
    return AdjacencyMatrix(std::move(m), rule, symmetric);
}

AdjacencyMatrix build_adjacency(const DistanceMatrix& d, NeighborRule rule, bool symmetrize) {
    const Matrix& dm = d.mat();
    const Index t = dm.rows();
    Matrix n = Matrix::Zero(t, t);

    if (rule.kind == NeighborRule::Kind::knn) {
        if (rule.k < 1 || rule.k > t - 1) {
            std::ostringstream os;
            os << "knn neighbor count " << rule.k << " outside [1, " << t - 1 << "]";
            throw invalid_parameter(os.str());
        }
        std::vector<Index> order;
        order.reserve(static_cast<size_t>(t));
        for (Index i = 0; i < t; ++i) {
            order.clear();
            for (Index j = 0; j < t; ++j)
                if (j != i) order.push_back(j);
            // ties by smaller index: the comparator is total, so sort is fine
            std::sort(order.begin(), order.end(), [&](Index a, Index b) {
                const double da = dm(i, a), db = dm(i, b);
                return da < db || (da == db && a < b);
            });
            for (int r = 0; r < rule.k; ++r) n(i, order[static_cast<size_t>(r)]) = 1.0;
        }
    } else {
        if (!(rule.radius > 0.0)) {
            std::ostringstream os;
            os << "eps threshold must be positive, got " << rule.radius;
            throw invalid_parameter(os.str());
        }
        for (Index j = 0; j < t; ++j)
            for (Index i = 0; i < t; ++i)
                if (i != j && dm(i, j) <= rule.radius) n(i, j) = 1.0;
    }

    if (symmetrize) n = n.cwiseMax(n.transpose().eval());
    return AdjacencyMatrix::trusted(std::move(n), rule, symmetrize);
}

}  // namespace unfold
