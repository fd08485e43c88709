#ifndef CURRENTS_HEAT_KERNEL_HPP
#define CURRENTS_HEAT_KERNEL_HPP

#include <Eigen/Dense>

#include "currents/graph.hpp"
#include "currents/linalg.hpp"

namespace currents {

struct heat_error : linalg_error {
    using linalg_error::linalg_error;
};

/// Continuous-time heat semigroup of the walk that jumps from x to y at rate
/// c_xy / mu(x). Everything is evaluated from one decomposition of
/// M^{-1/2} L M^{-1/2} with M = diag(mu).
class HeatKernelEvaluator {
  public:
    HeatKernelEvaluator(const WeightedMultigraph& g, Eigen::VectorXd mu);

    const IncidenceSystem& system() const { return sys_; }
    const SpectralDecomposition& decomposition() const { return dec_; }
    const Eigen::VectorXd& mu() const { return mu_; }

    /// Transition matrix P_t = exp(-t M^{-1} L); rows sum to 1.
    Eigen::MatrixXd heat_P(double t) const;

    /// Symmetric companion H_t = P_t M^{-1}; satisfies H_{t+s} = H_t M H_s.
    Eigen::MatrixXd heat_H(double t) const;

    /// H_t applied to a vector, without forming the matrix.
    Eigen::VectorXd apply_H(double t, const Eigen::VectorXd& rho) const;

  private:
    void require_time(double t) const;

    IncidenceSystem sys_;
    SpectralDecomposition dec_;
    Eigen::VectorXd mu_;
    Eigen::VectorXd sqrt_mu_;
    Eigen::VectorXd inv_sqrt_mu_;
};

/// Quadrature evaluation of the time integral of B H_t B^T, which converges
/// to the projected green matrix B L^+ B^T. The horizon T is chosen so the
/// certified tail bound beyond T is below tol, and [0, T] is integrated by
/// composite Simpson on a geometric grid refined until the rule's own error
/// estimate is below tol as well.
Eigen::MatrixXd green_time_quadrature(const HeatKernelEvaluator& ev, double tol);

}  // namespace currents

#endif
