#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "unfold/embed.hpp"

#include <cmath>

using namespace unfold;
using oracles::Rng;

namespace {

KernelMatrix km(const Matrix& m) { return KernelMatrix::trusted(m, false); }

}  // namespace

TEST_CASE("truncating a diagonal kernel keeps the leading axis") {
    Matrix k = Matrix::Zero(3, 3);
    k.diagonal() << 4.0, 1.0, 0.0;
    const Embedding e = truncate_embed(km(k), 1);
    REQUIRE(e.coords.rows() == 3);
    REQUIRE(e.coords.cols() == 1);
    // sign fixed by the eigenvector convention: first sizable entry positive
    CHECK(e.coords(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(e.coords(1, 0)) <= 1e-12);
    CHECK(std::fabs(e.coords(2, 0)) <= 1e-12);
    CHECK(e.kept_eigenvalues.size() == 1);
    CHECK(e.kept_eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(e.discarded_mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("keeping every dimension reproduces the kernel") {
    Rng rng(91);
    for (int rep = 0; rep < 20; ++rep) {
        const Index t = 4 + static_cast<Index>(rep % 5);
        const Matrix k = oracles::random_psd(rng, t, 1.5);
        const Embedding e = truncate_embed(km(k), t);
        const Matrix recon = e.coords * e.coords.transpose();
        CHECK((recon - k).norm() <= 1e-10 * std::max(1.0, k.norm()));
        CHECK(std::fabs(e.discarded_mass) <= 1e-10 * std::max(1.0, k.norm()));
    }
}

TEST_CASE("rank-d factorization is the best in Frobenius norm") {
    Rng rng(92);
    for (int rep = 0; rep < 40; ++rep) {
        const Index t = 6 + static_cast<Index>(rep % 4);
        const Index d = 1 + static_cast<Index>(rep % 3);
        const Matrix k = oracles::random_psd(rng, t, 1.5);
        const EigenPair eig = sym_eig(k);
        const Embedding e = truncate_embed_with_eig(eig, d);
        const Matrix recon = e.coords * e.coords.transpose();

        // eigenvalue form of the optimal-rank-d error
        double tail = 0.0;
        for (Index i = d; i < t; ++i) tail += eig.values[i] * eig.values[i];
        const double err = (recon - k).squaredNorm();
        CHECK(std::fabs(err - tail) <= 1e-9 * std::max(1.0, tail));

        // no other rank-d PSD factorization from a random subspace does better
        const Matrix x = oracles::random_matrix(rng, t, d, 1.0);
        CHECK((x * x.transpose() - k).squaredNorm() >= err - 1e-9 * std::max(1.0, err));
    }
}

TEST_CASE("eigenvalue bookkeeping") {
    Rng rng(93);
    const Matrix k = oracles::random_psd(rng, 7, 1.5);
    const EigenPair eig = sym_eig(k);
    const Embedding e = truncate_embed(km(k), 3);
    CHECK(e.kept_eigenvalues.size() == 3);
    for (Index i = 0; i < 3; ++i)
        CHECK(e.kept_eigenvalues[i] == doctest::Approx(eig.values[i]).epsilon(1e-12));
    for (Index i = 0; i + 1 < 3; ++i) CHECK(e.kept_eigenvalues[i] >= e.kept_eigenvalues[i + 1]);
    double tail = 0.0;
    for (Index i = 3; i < 7; ++i) tail += std::max(eig.values[i], 0.0);
    CHECK(e.discarded_mass == doctest::Approx(tail).epsilon(1e-12));

    // column norms match sqrt of the kept eigenvalues
    for (Index i = 0; i < 3; ++i)
        CHECK(e.coords.col(i).norm() ==
              doctest::Approx(std::sqrt(std::max(e.kept_eigenvalues[i], 0.0))).epsilon(1e-10));
}

TEST_CASE("tiny negative eigenvalues are clamped, genuine ones rejected") {
    Matrix k = Matrix::Zero(4, 4);
    k.diagonal() << 2.0, 1.0, 0.0, -1e-14;
    const Embedding e = truncate_embed(km(k), 4);
    CHECK(e.kept_eigenvalues.minCoeff() == 0.0);
    CHECK(e.coords.allFinite());

    Matrix bad = Matrix::Zero(4, 4);
    bad.diagonal() << 2.0, 1.0, 0.0, -1.0;
    CHECK_THROWS_AS(truncate_embed(km(bad), 4), invalid_input);
    // the indefinite direction is harmless when it is not kept
    CHECK_NOTHROW(truncate_embed(km(bad), 2));
}

TEST_CASE("dimension bounds") {
    const Matrix k = Matrix::Identity(4, 4);
    CHECK_THROWS_AS(truncate_embed(km(k), 0), invalid_parameter);
    CHECK_THROWS_AS(truncate_embed(km(k), 5), invalid_parameter);
    CHECK_NOTHROW(truncate_embed(km(k), 4));
}
