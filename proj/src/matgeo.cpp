#include "unfold/matgeo.hpp"

#include "unfold/simd/dispatch.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace unfold {

namespace {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite())
        throw invalid_input(std::string(what) + " contains non-finite entries");
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << " must be square, got " << m.rows() << "x" << m.cols();
        throw invalid_input(os.str());
    }
}

double max_asymmetry(const Matrix& m) {
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double centering_residual(const Matrix& m) {
    return (m * Vector::Ones(m.rows())).cwiseAbs().maxCoeff();
}

}  // namespace

bool ValidationReport::ok() const {
    for (const auto& it : items)
        if (it.required && !it.pass) return false;
    return true;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& it : items) {
        os << it.name << ": " << (it.pass ? "ok" : (it.required ? "FAIL" : "no"))
           << " (magnitude " << it.magnitude << ", tolerance " << it.tolerance << ")\n";
    }
    return os.str();
}

KernelMatrix KernelMatrix::validated(Matrix m, bool expect_centered) {
    require_square(m, "kernel matrix");
    require_finite(m, "kernel matrix");
    const double asym = max_asymmetry(m);
    const double sym_tol = tol::sym(m);
    if (asym > sym_tol) {
        std::ostringstream os;
        os << "kernel matrix asymmetry " << asym << " exceeds tolerance " << sym_tol;
        throw invalid_input(os.str());
    }
    Matrix s = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_failure("eigendecomposition failed while validating kernel");
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo < -tol::psd(hi)) {
        std::ostringstream os;
        os << "kernel matrix is not positive semidefinite: min eigenvalue " << lo;
        throw invalid_input(os.str());
    }
    const double ctr = centering_residual(s);
    const bool is_centered = ctr <= tol::sym(s);
    if (expect_centered && !is_centered) {
        std::ostringstream os;
        os << "kernel matrix is not centered: max |K 1| = " << ctr;
        throw invalid_input(os.str());
    }
    return KernelMatrix(std::move(s), is_centered);
}

KernelMatrix KernelMatrix::trusted(Matrix m, bool centered) {
    return KernelMatrix(std::move(m), centered);
}

DistanceMatrix DistanceMatrix::validated(Matrix m) {
    require_square(m, "distance matrix");
    require_finite(m, "distance matrix");
    const double asym = max_asymmetry(m);
    const double sym_tol = tol::sym(m);
    if (asym > sym_tol) {
        std::ostringstream os;
        os << "distance matrix asymmetry " << asym << " exceeds tolerance " << sym_tol;
        throw invalid_input(os.str());
    }
    Matrix s = 0.5 * (m + m.transpose());
    const double diag_mag = s.diagonal().cwiseAbs().maxCoeff();
    if (diag_mag > sym_tol) {
        std::ostringstream os;
        os << "distance matrix diagonal is not zero: max |D_ii| = " << diag_mag;
        throw invalid_input(os.str());
    }
    s.diagonal().setZero();
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double neg_tol = tol::psd_rel * scale;
    const double most_negative = s.minCoeff();
    if (most_negative < -neg_tol) {
        std::ostringstream os;
        os << "distance matrix has negative entries: min " << most_negative;
        throw invalid_input(os.str());
    }
    s = s.cwiseMax(0.0);
    // negative type: H D H must be negative semidefinite
    Eigen::SelfAdjointEigenSolver<Matrix> es(double_center(s), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_failure("eigendecomposition failed while validating distance matrix");
    const double top = es.eigenvalues().maxCoeff();
    const double spectral = es.eigenvalues().cwiseAbs().maxCoeff();
    if (top > tol::psd(spectral)) {
        std::ostringstream os;
        os << "distance matrix is not of negative type: max eigenvalue of HDH is " << top;
        throw invalid_input(os.str());
    }
    return DistanceMatrix(std::move(s));
}

DistanceMatrix DistanceMatrix::trusted(Matrix m) {
    return DistanceMatrix(std::move(m));
}

KernelMatrix kernel_of_data(const Matrix& x) {
    require_finite(x, "data matrix");
    const Index t = x.rows();
    Matrix k = Matrix::Zero(t, t);
    k.selfadjointView<Eigen::Lower>().rankUpdate(x);
    k.triangularView<Eigen::StrictlyUpper>() = k.transpose();
    return KernelMatrix::trusted(std::move(k), false);
}

DistanceMatrix edm_of_kernel(const KernelMatrix& k) {
    const Matrix& m = k.mat();
    const Index t = m.rows();
    const Vector kdiag = m.diagonal();
    Matrix d(t, t);
    const auto& kt = kern::active();
    for (Index j = 0; j < t; ++j) {
        kt.edm_col(m.col(j).data(), kdiag.data(), kdiag[j], d.col(j).data(),
                   static_cast<size_t>(t));
        d(j, j) = 0.0;
    }
    const double scale = std::max(1.0, kdiag.cwiseAbs().maxCoeff());
    const double most_negative = d.minCoeff();
    if (most_negative < -tol::psd(scale)) {
        std::ostringstream os;
        os << "kernel produced a squared distance of " << most_negative
           << "; input was not positive semidefinite";
        throw invalid_input(os.str());
    }
    if (most_negative < 0.0) d = d.cwiseMax(0.0);
    return DistanceMatrix::trusted(std::move(d));
}

Matrix double_center(const Matrix& m) {
    const Index t = m.rows();
    const Vector row_means = m.rowwise().mean();
    const Vector col_means = m.colwise().mean();
    const double grand = row_means.mean();
    Matrix out(t, m.cols());
    const auto& kt = kern::active();
    for (Index j = 0; j < m.cols(); ++j)
        kt.sub_vec_scalar(m.col(j).data(), row_means.data(), col_means[j] - grand,
                          out.col(j).data(), static_cast<size_t>(t));
    return out;
}

KernelMatrix kernel_of_edm(const DistanceMatrix& d) {
    Matrix k = -0.5 * double_center(d.mat());
    k = 0.5 * (k + k.transpose()).eval();
    return KernelMatrix::trusted(std::move(k), true);
}

KernelMatrix center_kernel(const KernelMatrix& k) {
    Matrix c = double_center(k.mat());
    c = 0.5 * (c + c.transpose()).eval();
    return KernelMatrix::trusted(std::move(c), true);
}

Matrix edm_adjoint(const Matrix& g) {
    require_square(g, "adjoint argument");
    Matrix s = g + g.transpose();
    Vector rowsum = s.rowwise().sum();
    Matrix a = -s;
    a.diagonal() += rowsum;
    return a;
}

EigenPair sym_eig(const Matrix& m) {
    require_square(m, "eigendecomposition argument");
    require_finite(m, "eigendecomposition argument");
    const double asym = max_asymmetry(m);
    if (asym > tol::sym(m)) {
        std::ostringstream os;
        os << "matrix asymmetry " << asym << " exceeds tolerance; not a symmetric problem";
        throw invalid_input(os.str());
    }
    Matrix a = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw numeric_failure("symmetric eigendecomposition failed");

    const Index t = a.rows();
    EigenPair out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    for (Index j = 0; j < t; ++j) {
        for (Index i = 0; i < t; ++i) {
            const double v = out.vectors(i, j);
            if (std::fabs(v) > 1e-12) {
                if (v < 0.0) out.vectors.col(j) = -out.vectors.col(j);
                break;
            }
        }
    }

    const double recon = (out.vectors * out.values.asDiagonal() * out.vectors.transpose() - a).norm();
    if (recon > tol::recon * std::max(1.0, a.norm())) {
        std::ostringstream os;
        os << "eigendecomposition reconstruction residual " << recon << " too large";
        throw numeric_failure(os.str());
    }
    const double orth = (out.vectors.transpose() * out.vectors - Matrix::Identity(t, t)).norm();
    if (orth > tol::orth * std::max(1.0, std::sqrt(static_cast<double>(t)))) {
        std::ostringstream os;
        os << "eigenvector orthogonality residual " << orth << " too large";
        throw numeric_failure(os.str());
    }
    return out;
}

const char* matrix_kind_name(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::data: return "data";
        case MatrixKind::kernel: return "kernel";
        case MatrixKind::edm: return "edm";
        case MatrixKind::adjacency: return "adjacency";
    }
    return "unknown";
}

ValidationReport validate(const Matrix& m, MatrixKind kind) {
    require_finite(m, "matrix");
    ValidationReport rep;
    if (kind == MatrixKind::data) {
        rep.items.push_back({"finite", true, true, 0.0, 0.0});
        return rep;
    }
    require_square(m, matrix_kind_name(kind));

    const double sym_tol = tol::sym(m);
    const double asym = max_asymmetry(m);
    const bool symmetric = asym <= sym_tol;
    rep.items.push_back({"symmetric", symmetric, kind != MatrixKind::adjacency, asym, sym_tol});

    Matrix s = 0.5 * (m + m.transpose());
    switch (kind) {
        case MatrixKind::kernel: {
            Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff();
            const double spectral = es.eigenvalues().cwiseAbs().maxCoeff();
            rep.items.push_back({"positive_semidefinite", lo >= -tol::psd(spectral), true,
                                 std::max(0.0, -lo), tol::psd(spectral)});
            const double ctr = centering_residual(s);
            rep.items.push_back({"centered", ctr <= sym_tol, false, ctr, sym_tol});
            break;
        }
        case MatrixKind::edm: {
            const double diag_mag = m.diagonal().cwiseAbs().maxCoeff();
            rep.items.push_back({"zero_diagonal", diag_mag <= sym_tol, true, diag_mag, sym_tol});
            const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
            const double most_negative = std::max(0.0, -m.minCoeff());
            rep.items.push_back({"nonnegative", most_negative <= tol::psd_rel * scale, true,
                                 most_negative, tol::psd_rel * scale});
            Eigen::SelfAdjointEigenSolver<Matrix> es(double_center(s), Eigen::EigenvaluesOnly);
            const double top = es.eigenvalues().maxCoeff();
            const double spectral = es.eigenvalues().cwiseAbs().maxCoeff();
            rep.items.push_back({"negative_type", top <= tol::psd(spectral), true,
                                 std::max(0.0, top), tol::psd(spectral)});
            break;
        }
        case MatrixKind::adjacency: {
            double bin = 0.0;
            for (Index j = 0; j < m.cols(); ++j)
                for (Index i = 0; i < m.rows(); ++i)
                    bin = std::max(bin, std::min(std::fabs(m(i, j)), std::fabs(m(i, j) - 1.0)));
            rep.items.push_back({"binary", bin <= 1e-12, true, bin, 1e-12});
            const double diag_mag = m.diagonal().cwiseAbs().maxCoeff();
            rep.items.push_back({"zero_diagonal", diag_mag <= 1e-12, true, diag_mag, 1e-12});
            break;
        }
        default: break;
    }
    return rep;
}

}  // namespace unfold
