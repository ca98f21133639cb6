#include "unfold/embed.hpp"

#include <cmath>
#include <sstream>

namespace unfold {

Embedding truncate_embed_with_eig(const EigenPair& eig, Index d) {
    const Index t = eig.values.size();
    if (d < 1 || d > t) {
        std::ostringstream os;
        os << "embedding dimension " << d << " out of range [1, " << t << "]";
        throw invalid_parameter(os.str());
    }
    const double scale = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
    const double floor = -tol::psd(scale);

    Embedding e;
    e.kept_eigenvalues = eig.values.head(d);
    for (Index i = 0; i < d; ++i) {
        double& v = e.kept_eigenvalues[i];
        if (v < floor) {
            std::ostringstream os;
            os << "eigenvalue " << v << " at position " << i << " is negative beyond round-off";
            throw invalid_input(os.str());
        }
        if (v < 0.0) v = 0.0;
    }
    e.coords = eig.vectors.leftCols(d) * e.kept_eigenvalues.cwiseSqrt().asDiagonal();
    for (Index i = d; i < t; ++i) e.discarded_mass += std::max(eig.values[i], 0.0);
    return e;
}

Embedding truncate_embed(const KernelMatrix& k, Index d) {
    return truncate_embed_with_eig(sym_eig(k.mat()), d);
}

}  // namespace unfold
