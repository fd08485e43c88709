#ifndef CURRENTS_LINALG_HPP
#define CURRENTS_LINALG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "currents/graph.hpp"

namespace currents {

struct linalg_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct asymmetric_input_error : linalg_error {
    using linalg_error::linalg_error;
};
struct eig_convergence_error : linalg_error {
    using linalg_error::linalg_error;
};
struct kernel_error : linalg_error {
    using linalg_error::linalg_error;
};
struct unbalanced_injection_error : linalg_error {
    using linalg_error::linalg_error;
};

// Relative threshold below which an eigenvalue of a scaled Laplacian counts
// as kernel: lambda < kKernelThreshold * lambda_max.
inline constexpr double kKernelThreshold = 1e-12;

/// Eigenpairs of S = M^{-1/2} L M^{-1/2}, ascending eigenvalues, orthonormal
/// eigenvector columns, plus the positive diagonal M they were built against.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    Eigen::VectorXd scaling;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
    /// Smallest eigenvalue above the kernel threshold.
    double lambda2() const;
    int kernel_dimension() const;
};

/// Cyclic Jacobi diagonalization of a symmetric matrix. The scaling record is
/// set to all-ones; callers diagonalizing a scaled Laplacian should prefer
/// scaled_laplacian_eig, which also validates the kernel structure.
SpectralDecomposition sym_eig(const Eigen::MatrixXd& s);

/// Diagonalizes M^{-1/2} L M^{-1/2} for a positive diagonal M and checks that
/// exactly one eigenvalue sits below the kernel threshold with eigenvector
/// parallel to M^{1/2} 1.
SpectralDecomposition scaled_laplacian_eig(const IncidenceSystem& sys, const Eigen::VectorXd& m_diag);

/// B L^+ B^T from the spectral data; independent of the M used to decompose.
Eigen::MatrixXd projected_green(const IncidenceSystem& sys, const SpectralDecomposition& dec);

/// Direct solve of L phi = injection (injection must sum to zero), normalized
/// to sum(phi) = 0. Factorization-based; kept independent of the spectral
/// path so it can serve as its oracle.
Eigen::VectorXd solve_potential(const IncidenceSystem& sys, const Eigen::VectorXd& injection);

struct SpectralNormEstimate {
    double value = 0.0;
    bool converged = false;
    std::int64_t iterations = 0;
    Eigen::VectorXd vector;
};

/// Largest eigenvalue of a symmetric entrywise-nonnegative matrix by power
/// iteration from the normalized all-ones vector. Converged when successive
/// Rayleigh quotients differ by at most 1e-11 of the current value; at the
/// iteration cap the best estimate is returned flagged non-converged.
SpectralNormEstimate nonneg_spectral_norm(const Eigen::MatrixXd& a);

/// Spectral norm of any entrywise-nonnegative matrix: symmetric inputs go
/// through nonneg_spectral_norm directly, general ones through the Gram
/// matrix A^T A.
SpectralNormEstimate nonneg_operator_norm(const Eigen::MatrixXd& a);

}  // namespace currents

#endif
