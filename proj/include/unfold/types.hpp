#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace unfold {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error hierarchy. Everything the library throws derives from unfold::error,
// so callers can catch one type at the boundary and still branch on the
// specific failure when they care.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed data: wrong shape, non-finite entries, broken matrix invariants.
class invalid_input : public error {
public:
    using error::error;
};

// A configuration value outside its documented range (negative bandwidth,
// embedding dimension larger than the problem, ...).
class invalid_parameter : public error {
public:
    using error::error;
};

// Input is structurally fine but outside the mathematical domain of the
// requested operation (e.g. log of a zero distance where no floor applies).
class domain_error : public error {
public:
    using error::error;
};

// The requested combination exists in the catalog but deliberately has no
// implementation (e.g. subgradient of an indicator).
class unsupported_operation : public error {
public:
    using error::error;
};

// An iterative numeric routine failed to reach its contract.
class numeric_failure : public error {
public:
    using error::error;
};

namespace tol {

// Shared tolerance model: absolute for quantities of order one, scaled by
// the magnitude of the operand otherwise.
inline constexpr double sym_rel = 1e-9;      // symmetry, centering, zero diagonal
inline constexpr double psd_rel = 1e-8;      // eigenvalue nonnegativity
inline constexpr double recon = 1e-9;        // eigendecomposition reconstruction
inline constexpr double orth = 1e-9;         // eigenvector orthogonality
inline constexpr double dist_floor = 1e-12;  // floor for distances inside logs/ratios

inline double sym(const Matrix& m) { return sym_rel * std::max(1.0, m.norm()); }

inline double psd(double spectral_scale) { return psd_rel * std::max(1.0, spectral_scale); }

}  // namespace tol

}  // namespace unfold
