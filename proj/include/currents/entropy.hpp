#ifndef CURRENTS_ENTROPY_HPP
#define CURRENTS_ENTROPY_HPP

#include <Eigen/Dense>
#include <stdexcept>

#include "currents/graph.hpp"

namespace currents {

struct entropy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shannon entropy -sum mu log mu in nats, with 0 log 0 = 0. Entries must be
/// nonnegative and sum to 1 within 1e-9.
double entropy(const Eigen::VectorXd& mu);

/// Logarithmic mean (a - b) / (log a - log b) for positive a, b, continued by
/// a at a = b. Sits between the geometric and arithmetic means.
double log_mean(double a, double b);

/// Dirichlet-type entropy dissipation rate
/// I(h) = sum_{xy in E} c_xy (h(x) - h(y)) (log h(x) - log h(y)), h > 0.
double fisher(const WeightedMultigraph& g, const Eigen::VectorXd& h);

/// sum_x mu(x) (h(x) log h(x) - h(x) + 1), which equals the semigroup entropy
/// functional sum_x mu(x) h(x) log h(x) whenever mu.h = 1, written with
/// nonnegative summands so near-constant h does not cancel catastrophically.
double phi_functional(const Eigen::VectorXd& mu, const Eigen::VectorXd& h);

/// Both sides of the log-mean Cauchy-Schwarz inequality
/// (w^T C^{1/2} |Bh|)^2 <= (I(h)/2) sum_x h(x) sum_{e: x in e} w_e^2.
struct LogMeanCsBound {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

LogMeanCsBound log_mean_cs_check(const WeightedMultigraph& g, const Eigen::VectorXd& h,
                                 const Eigen::VectorXd& w);

/// Quadrature record for the entropy-dissipation identity
/// integral_0^inf I(h_s) ds = sum_x rho(x) log(rho(x)/mu(x)), h_s = H_s rho.
/// The time integral telescopes: its restriction to [s_min, S] equals
/// phi(h_{s_min}) - phi(h_S) exactly, and that telescoped value is the
/// sharpest oracle for the Simpson piece.
struct DissipationTrace {
    Eigen::VectorXd grid;
    Eigen::VectorXd fisher_samples;
    double simpson_integral = 0.0;
    double telescoped_integral = 0.0;
    double head_correction = 0.0;
    double tail_correction = 0.0;
    double numeric_integral = 0.0;
    double closed_form = 0.0;
    double discrepancy = 0.0;
};

DissipationTrace dissipation_trace(const WeightedMultigraph& g, const Eigen::VectorXd& mu,
                                   const Eigen::VectorXd& rho, double tol);

/// Time integral of w^T |C^{1/2} B H_t B^T C^{1/2}| w against its entropy
/// bound 2 ||w||^2 H(mu_w). The absolute value sits inside the integral, so
/// the left side has no spectral closed form and is integrated numerically.
struct HeatVariationBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

HeatVariationBound heat_variation_check(const WeightedMultigraph& g, const Eigen::VectorXd& w,
                                        double tol);

}  // namespace currents

#endif
