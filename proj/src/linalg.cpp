#include "currents/linalg.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace currents {

double SpectralDecomposition::lambda2() const {
    const double cut = kKernelThreshold * lambda_max();
    for (int i = 0; i < size(); ++i) {
        if (eigenvalues(i) >= cut) return eigenvalues(i);
    }
    throw kernel_error("spectrum is entirely below the kernel threshold");
}

int SpectralDecomposition::kernel_dimension() const {
    const double cut = kKernelThreshold * lambda_max();
    int k = 0;
    for (int i = 0; i < size(); ++i) {
        if (eigenvalues(i) < cut) ++k;
    }
    return k;
}

namespace {

// One cyclic Jacobi sweep over the strict upper triangle; returns the largest
// off-diagonal magnitude seen before rotation.
double jacobi_sweep(Eigen::MatrixXd& a, Eigen::MatrixXd& v) {
    const int n = static_cast<int>(a.rows());
    double max_off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            max_off = std::max(max_off, std::abs(apq));
            if (apq == 0.0) continue;
            const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
            const double t = (theta >= 0.0)
                                 ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                 : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            for (int k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akq = a(k, q);
                a(k, p) = c * akp - s * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (int k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = s * apk + c * aqk;
            }
            for (int k = 0; k < n; ++k) {
                const double vkp = v(k, p);
                const double vkq = v(k, q);
                v(k, p) = c * vkp - s * vkq;
                v(k, q) = s * vkp + c * vkq;
            }
        }
    }
    return max_off;
}

}  // namespace

SpectralDecomposition sym_eig(const Eigen::MatrixXd& s) {
    if (s.rows() != s.cols()) {
        throw asymmetric_input_error("sym_eig requires a square matrix");
    }
    const int n = static_cast<int>(s.rows());
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw asymmetric_input_error("sym_eig input asymmetry " + std::to_string(asym) +
                                     " exceeds tolerance");
    }

    Eigen::MatrixXd a = 0.5 * (s + s.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double tol = 1e-15 * scale;
    const int max_sweeps = 64;
    bool done = false;
    double last_off = 0.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        last_off = jacobi_sweep(a, v);
        if (last_off <= tol) {
            done = true;
            break;
        }
    }
    if (!done) {
        // One more look: the final sweep may have cleared what it measured.
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        }
        if (off > tol) {
            throw eig_convergence_error("jacobi iteration stalled with off-diagonal residual " +
                                        std::to_string(off));
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&a](int i, int j) { return a(i, i) < a(j, j); });

    SpectralDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        dec.eigenvalues(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        dec.eigenvectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    dec.scaling = Eigen::VectorXd::Ones(n);
    return dec;
}

SpectralDecomposition scaled_laplacian_eig(const IncidenceSystem& sys,
                                           const Eigen::VectorXd& m_diag) {
    const int n = sys.vertex_count();
    if (m_diag.size() != n) {
        throw linalg_error("scaling vector length does not match vertex count");
    }
    for (int i = 0; i < n; ++i) {
        if (!(m_diag(i) > 0.0) || !std::isfinite(m_diag(i))) {
            throw linalg_error("scaling vector must be positive and finite");
        }
    }
    const Eigen::VectorXd inv_sqrt_m = m_diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd s =
        inv_sqrt_m.asDiagonal() * sys.laplacian * inv_sqrt_m.asDiagonal();

    SpectralDecomposition dec = sym_eig(s);
    dec.scaling = m_diag;

    if (dec.kernel_dimension() != 1) {
        throw kernel_error("scaled laplacian kernel dimension is " +
                           std::to_string(dec.kernel_dimension()) + ", expected 1");
    }
    Eigen::VectorXd ground = m_diag.cwiseSqrt();
    ground.normalize();
    const double align = std::abs(ground.dot(dec.eigenvectors.col(0)));
    if (align < 1.0 - 1e-9) {
        throw kernel_error("kernel eigenvector misaligned with sqrt-scaled constants");
    }
    return dec;
}

Eigen::MatrixXd projected_green(const IncidenceSystem& sys, const SpectralDecomposition& dec) {
    const int n = sys.vertex_count();
    const int m = sys.edge_count();
    const Eigen::VectorXd inv_sqrt_m = dec.scaling.cwiseSqrt().cwiseInverse();
    const double cut = kKernelThreshold * dec.lambda_max();

    Eigen::MatrixXd u(m, n);
    int cols = 0;
    for (int i = 0; i < n; ++i) {
        if (dec.eigenvalues(i) < cut) continue;
        u.col(cols) = (sys.incidence * inv_sqrt_m.cwiseProduct(dec.eigenvectors.col(i))) /
                      std::sqrt(dec.eigenvalues(i));
        ++cols;
    }
    return u.leftCols(cols) * u.leftCols(cols).transpose();
}

Eigen::VectorXd solve_potential(const IncidenceSystem& sys, const Eigen::VectorXd& injection) {
    const int n = sys.vertex_count();
    if (injection.size() != n) {
        throw linalg_error("injection length does not match vertex count");
    }
    const double imbalance = std::abs(injection.sum());
    if (imbalance > 1e-12 * std::max(1.0, injection.lpNorm<1>())) {
        throw unbalanced_injection_error("injection does not sum to zero (residual " +
                                         std::to_string(imbalance) + ")");
    }
    // L + (1/n) 11^T is positive definite and agrees with L on the zero-sum
    // subspace, so the pseudoinverse solve reduces to one Cholesky solve.
    Eigen::MatrixXd shifted = sys.laplacian;
    shifted.array() += 1.0 / static_cast<double>(n);
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) {
        throw linalg_error("cholesky factorization of the shifted laplacian failed");
    }
    Eigen::VectorXd phi = llt.solve(injection);
    phi.array() -= phi.mean();
    return phi;
}

SpectralNormEstimate nonneg_spectral_norm(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) {
        throw asymmetric_input_error("nonneg_spectral_norm requires a square matrix");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw asymmetric_input_error("nonneg_spectral_norm requires a symmetric matrix");
    }
    if (a.minCoeff() < 0.0) {
        throw linalg_error("nonneg_spectral_norm requires entrywise-nonnegative input");
    }

    const int n = static_cast<int>(a.rows());
    SpectralNormEstimate est;
    est.vector = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));

    // For a nonnegative symmetric matrix the Perron value equals the spectral
    // norm, and the all-ones start has positive overlap with the Perron
    // vector, so plain power iteration suffices.
    double rayleigh = 0.0;
    const std::int64_t max_iterations = 1000000;
    for (est.iterations = 0; est.iterations < max_iterations; ++est.iterations) {
        Eigen::VectorXd next = a * est.vector;
        const double norm = next.norm();
        if (norm == 0.0) {
            est.value = 0.0;
            est.converged = true;
            return est;
        }
        next /= norm;
        const double next_rayleigh = next.dot(a * next);
        const double drift = std::abs(next_rayleigh - rayleigh);
        est.vector = next;
        rayleigh = next_rayleigh;
        if (est.iterations > 0 && drift <= 1e-11 * std::max(std::abs(rayleigh), 1e-300)) {
            est.value = rayleigh;
            est.converged = true;
            ++est.iterations;
            return est;
        }
    }
    est.value = rayleigh;
    est.converged = false;
    return est;
}

SpectralNormEstimate nonneg_operator_norm(const Eigen::MatrixXd& a) {
    if (a.minCoeff() < 0.0) {
        throw linalg_error("nonneg_operator_norm requires entrywise-nonnegative input");
    }
    if (a.rows() == a.cols()) {
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        if ((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
            return nonneg_spectral_norm(a);
        }
    }
    SpectralNormEstimate est = nonneg_spectral_norm(a.transpose() * a);
    est.value = std::sqrt(std::max(est.value, 0.0));
    return est;
}

}  // namespace currents
