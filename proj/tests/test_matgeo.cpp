#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "unfold/matgeo.hpp"

#include <cmath>

using namespace unfold;
using oracles::Rng;

namespace {

Matrix random_orthogonal(Rng& rng, Index t) {
    const Matrix a = oracles::random_matrix(rng, t, t);
    return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

}  // namespace

TEST_CASE("kernel_of_data basics") {
    CHECK(kernel_of_data(Matrix::Identity(2, 2)).mat().isApprox(Matrix::Identity(2, 2), 1e-15));
    CHECK(kernel_of_data(Matrix::Zero(3, 2)).mat().isZero(0.0));

    Rng rng(1);
    const Matrix x = oracles::random_matrix(rng, 5, 3);
    const KernelMatrix k = kernel_of_data(x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k.mat());
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK((k.mat() - k.mat().transpose()).norm() == 0.0);

    Matrix bad = x;
    bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(kernel_of_data(bad), invalid_input);
}

TEST_CASE("edm_of_kernel basics") {
    const KernelMatrix eye = KernelMatrix::validated(Matrix::Identity(2, 2));
    Matrix expect(2, 2);
    expect << 0, 2, 2, 0;
    CHECK(edm_of_kernel(eye).mat().isApprox(expect, 1e-15));

    const KernelMatrix zero = KernelMatrix::validated(Matrix::Zero(4, 4));
    CHECK(edm_of_kernel(zero).mat().isZero(0.0));

    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const KernelMatrix k = KernelMatrix::validated(oracles::random_psd(rng, 6, 2.0));
        const ValidationReport rep_edm = validate(edm_of_kernel(k).mat(), MatrixKind::edm);
        CHECK(rep_edm.ok());
    }
}

TEST_CASE("kernel_of_edm basics") {
    Matrix d(2, 2);
    d << 0, 2, 2, 0;
    Matrix expect(2, 2);
    expect << 0.5, -0.5, -0.5, 0.5;
    CHECK(kernel_of_edm(DistanceMatrix::validated(d)).mat().isApprox(expect, 1e-14));
    CHECK(kernel_of_edm(DistanceMatrix::validated(Matrix::Zero(3, 3))).mat().isZero(0.0));

    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const DistanceMatrix dm = DistanceMatrix::validated(oracles::random_edm_entries(rng, 8));
        const KernelMatrix k = kernel_of_edm(dm);
        CHECK(k.centered());
        CHECK((k.mat() * Vector::Ones(8)).cwiseAbs().maxCoeff() <=
              1e-12 * std::max(1.0, k.mat().norm()));
    }
}

TEST_CASE("center_kernel") {
    Rng rng(4);
    const Matrix k = oracles::random_psd(rng, 6, 3.0);
    const KernelMatrix once = center_kernel(KernelMatrix::validated(k));
    CHECK(once.centered());
    const KernelMatrix twice = center_kernel(once);
    CHECK((twice.mat() - once.mat()).norm() <= 1e-12 * std::max(1.0, once.mat().norm()));

    const Matrix ones = Matrix::Constant(5, 5, 1.0);
    CHECK(center_kernel(KernelMatrix::validated(ones)).mat().cwiseAbs().maxCoeff() <= 1e-14);

    const Matrix hkh = double_center(k);
    CHECK((once.mat() - hkh).norm() <= 1e-12 * std::max(1.0, hkh.norm()));
}

TEST_CASE("round trips") {
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const Index t = 4 + static_cast<Index>(rng() % 47);  // t <= 50
        const DistanceMatrix d = DistanceMatrix::validated(oracles::random_edm_entries(rng, t));
        const Matrix back = edm_of_kernel(kernel_of_edm(d)).mat();
        CHECK((back - d.mat()).norm() <= 1e-10 * std::max(1.0, d.mat().norm()));

        const KernelMatrix k = KernelMatrix::validated(oracles::random_psd(rng, t, 2.0));
        const Matrix hkh = center_kernel(k).mat();
        const Matrix back_k = kernel_of_edm(edm_of_kernel(k)).mat();
        CHECK((back_k - hkh).norm() <= 1e-10 * std::max(1.0, hkh.norm()));
    }
}

TEST_CASE("validate reports") {
    Matrix d(3, 3);
    d << 0, 1, 4, 1, 0, 1, 4, 1, 0;
    d(1, 1) = 0.1;
    const ValidationReport bad = validate(d, MatrixKind::edm);
    CHECK_FALSE(bad.ok());
    bool flagged = false;
    for (const auto& item : bad.items)
        if (item.name == "zero_diagonal" && !item.pass) flagged = true;
    CHECK(flagged);

    CHECK(validate(Matrix::Identity(4, 4), MatrixKind::kernel).ok());

    Rng rng(6);
    const KernelMatrix k = KernelMatrix::validated(oracles::random_psd(rng, 7, 2.0));
    CHECK(validate(edm_of_kernel(k).mat(), MatrixKind::edm).ok());

    Matrix adj = Matrix::Zero(3, 3);
    adj(0, 1) = 1.0;
    adj(1, 0) = 0.5;
    const ValidationReport arep = validate(adj, MatrixKind::adjacency);
    CHECK_FALSE(arep.ok());
}

TEST_CASE("matrix type constructors") {
    Rng rng(7);
    Matrix m = oracles::random_psd(rng, 5, 2.0);
    m(0, 1) += 1.0;  // break symmetry hard
    CHECK_THROWS_AS(KernelMatrix::validated(m), invalid_input);

    Matrix indef = oracles::random_symmetric(rng, 5, 2.0);
    indef -= 10.0 * Matrix::Identity(5, 5);
    CHECK_THROWS_AS(KernelMatrix::validated(indef), invalid_input);

    const Matrix psd = oracles::random_psd(rng, 5, 2.0);
    CHECK_THROWS_AS(KernelMatrix::validated(psd, true), invalid_input);  // not centered
    CHECK(KernelMatrix::validated(double_center(psd), true).centered());

    // duplicated points give a true zero distance, whose computed value may
    // land just below zero; that is clamped, a real negative is rejected
    Matrix x = oracles::random_matrix(rng, 5, 3, 1.0);
    x.row(1) = x.row(0);
    Matrix d(5, 5);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) d(i, j) = (x.row(i) - x.row(j)).squaredNorm();
    d(0, 1) = d(1, 0) = -1e-12;
    CHECK(DistanceMatrix::validated(d).mat()(0, 1) == 0.0);
    d(0, 1) = d(1, 0) = -1.0;
    CHECK_THROWS_AS(DistanceMatrix::validated(d), invalid_input);

    Matrix far = oracles::random_edm_entries(rng, 5);
    far(2, 2) = 0.5;
    CHECK_THROWS_AS(DistanceMatrix::validated(far), invalid_input);
}

TEST_CASE("edm_adjoint identity") {
    CHECK(edm_adjoint(Matrix::Zero(4, 4)).isZero(0.0));

    Rng rng(8);
    const Index t = 7;
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix g = oracles::random_matrix(rng, t, t, 2.0);
        const Matrix k = oracles::random_symmetric(rng, t, 2.0);
        const Matrix a = edm_adjoint(g);
        CHECK((a - a.transpose()).norm() <= 1e-12 * std::max(1.0, a.norm()));

        // D(K) evaluated directly from the definition
        Matrix dk(t, t);
        for (Index i = 0; i < t; ++i)
            for (Index j = 0; j < t; ++j) dk(i, j) = k(i, i) + k(j, j) - 2.0 * k(i, j);
        const double lhs = (a.array() * k.array()).sum();
        const double rhs = (g.array() * dk.array()).sum();
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
    }

    // identity direction, checked against the same defining identity
    const Matrix gi = Matrix::Identity(5, 5);
    const Matrix ai = edm_adjoint(gi);
    const Matrix ks = oracles::random_symmetric(rng, 5, 1.0);
    Matrix dks(5, 5);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) dks(i, j) = ks(i, i) + ks(j, j) - 2.0 * ks(i, j);
    CHECK(std::fabs((ai.array() * ks.array()).sum() - (gi.array() * dks.array()).sum()) <= 1e-10);
}

TEST_CASE("sym_eig") {
    Vector diag(3);
    diag << 1.0, 3.0, 2.0;
    const EigenPair ep = sym_eig(Matrix(diag.asDiagonal()));
    CHECK(ep.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(ep.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ep.values[2] == doctest::Approx(1.0).epsilon(1e-14));
    // axis vectors up to sign, and the sign convention makes them positive
    CHECK(ep.vectors.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    for (Index j = 0; j < 3; ++j) {
        Index imax;
        ep.vectors.col(j).cwiseAbs().maxCoeff(&imax);
        CHECK(ep.vectors(imax, j) > 0.0);
    }

    Rng rng(9);
    const Matrix q = random_orthogonal(rng, 3);
    Vector spec(3);
    spec << 3.0, 1.0, 0.0;
    const Matrix m = q * spec.asDiagonal() * q.transpose();
    const EigenPair ep2 = sym_eig(m);
    for (Index i = 0; i < 3; ++i) CHECK(std::fabs(ep2.values[i] - spec[i]) <= 1e-10);

    for (int rep = 0; rep < 25; ++rep) {
        const Matrix s = oracles::random_symmetric(rng, 9, 3.0);
        const EigenPair e = sym_eig(s);
        for (Index i = 0; i + 1 < e.values.size(); ++i) CHECK(e.values[i] >= e.values[i + 1]);
        const Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
        CHECK((rec - s).norm() <= 1e-10 * std::max(1.0, s.norm()));
        CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(9, 9)).norm() <= 1e-9 * 3.0);

        // determinism incl. the sign convention
        const EigenPair e2 = sym_eig(s);
        CHECK((e.vectors - e2.vectors).norm() == 0.0);
    }
}
