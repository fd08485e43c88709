#include "currents/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "currents/heat_kernel.hpp"
#include "currents/quadrature.hpp"

namespace currents {

namespace {

void require_probability(const Eigen::VectorXd& v, const char* name, bool strictly_positive) {
    for (int i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i)) || v(i) < 0.0 || (strictly_positive && v(i) == 0.0)) {
            throw entropy_error(std::string(name) + " has an invalid entry at index " +
                                std::to_string(i));
        }
    }
    const double total = v.sum();
    if (std::abs(total - 1.0) > 1e-9) {
        throw entropy_error(std::string(name) + " sums to " + std::to_string(total) +
                            ", expected 1");
    }
}

double fisher_sum(const std::vector<Edge>& edges, const Eigen::VectorXd& h,
                  const Eigen::VectorXd& log_h) {
    double total = 0.0;
    for (const Edge& e : edges) {
        total += e.conductance * (h(e.tail) - h(e.head)) * (log_h(e.tail) - log_h(e.head));
    }
    return total;
}

// Spectral evaluation of h_s can round true tiny-positive entries to zero or
// slightly negative; flooring at a relative threshold keeps the logarithms
// finite without moving any resolvable entry.
Eigen::VectorXd floored(const Eigen::VectorXd& h) {
    const double floor_value = 1e-15 * h.maxCoeff();
    return h.cwiseMax(floor_value);
}

}  // namespace

double entropy(const Eigen::VectorXd& mu) {
    require_probability(mu, "probability vector", false);
    double h = 0.0;
    for (int i = 0; i < mu.size(); ++i) {
        if (mu(i) > 0.0) h -= mu(i) * std::log(mu(i));
    }
    return h;
}

double log_mean(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw entropy_error("log_mean requires positive finite arguments");
    }
    if (a < b) std::swap(a, b);
    const double diff = a - b;
    const double total = a + b;
    if (diff <= 1e-8 * total) {
        // Near-equal arguments: (a-b)/log(a/b) = (s/2)(1 - z^2/3 - O(z^4))
        // with z = (a-b)/(a+b); at this branch point z^4 is below resolution.
        const double z = diff / total;
        return 0.5 * total * (1.0 - z * z / 3.0);
    }
    return diff / std::log1p(diff / b);
}

double fisher(const WeightedMultigraph& g, const Eigen::VectorXd& h) {
    if (h.size() != g.vertex_count()) {
        throw entropy_error("vertex vector length does not match vertex count");
    }
    for (int i = 0; i < h.size(); ++i) {
        if (!(h(i) > 0.0) || !std::isfinite(h(i))) {
            throw entropy_error("fisher requires a strictly positive vector");
        }
    }
    return fisher_sum(g.edges(), h, h.array().log());
}

double phi_functional(const Eigen::VectorXd& mu, const Eigen::VectorXd& h) {
    if (mu.size() != h.size()) {
        throw entropy_error("phi_functional length mismatch");
    }
    double total = 0.0;
    for (int i = 0; i < h.size(); ++i) {
        if (h(i) < 0.0) {
            throw entropy_error("phi_functional requires nonnegative entries");
        }
        const double term = h(i) > 0.0 ? h(i) * std::log(h(i)) - h(i) + 1.0 : 1.0;
        total += mu(i) * term;
    }
    return total;
}

LogMeanCsBound log_mean_cs_check(const WeightedMultigraph& g, const Eigen::VectorXd& h,
                                 const Eigen::VectorXd& w) {
    if (h.size() != g.vertex_count() || w.size() != g.edge_count()) {
        throw entropy_error("log_mean_cs_check dimension mismatch");
    }
    for (int i = 0; i < w.size(); ++i) {
        if (!(w(i) >= 0.0) || !std::isfinite(w(i))) {
            throw entropy_error("edge weights must be nonnegative");
        }
    }
    const double dissipation = fisher(g, h);

    double weighted_gradient = 0.0;
    Eigen::VectorXd incident_w2 = Eigen::VectorXd::Zero(g.vertex_count());
    const auto& edges = g.edges();
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = edges[static_cast<std::size_t>(e)];
        weighted_gradient +=
            w(e) * std::sqrt(edge.conductance) * std::abs(h(edge.head) - h(edge.tail));
        incident_w2(edge.tail) += w(e) * w(e);
        incident_w2(edge.head) += w(e) * w(e);
    }

    LogMeanCsBound out;
    out.lhs = weighted_gradient * weighted_gradient;
    out.rhs = 0.5 * dissipation * h.dot(incident_w2);
    out.margin = out.rhs - out.lhs;
    return out;
}

DissipationTrace dissipation_trace(const WeightedMultigraph& g, const Eigen::VectorXd& mu,
                                   const Eigen::VectorXd& rho, double tol) {
    if (mu.size() != g.vertex_count() || rho.size() != g.vertex_count()) {
        throw entropy_error("dissipation_trace dimension mismatch");
    }
    require_probability(mu, "measure", true);
    require_probability(rho, "initial distribution", false);
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw entropy_error("tolerance must be positive");
    }

    const HeatKernelEvaluator ev(g, mu);
    const double lambda2 = ev.decomposition().lambda2();
    const double lambda_max = ev.decomposition().lambda_max();
    const double s_min = 1e-4 / lambda_max;
    const double s_max = 40.0 / lambda2;

    int ppd = 192;
    while (std::pow(std::log(10.0) / ppd, 4) / 120.0 > 0.25 * tol && ppd < 4096) {
        ppd *= 2;
    }
    const std::vector<double> nodes = geometric_nodes(s_min, s_max, ppd);

    const auto& edges = g.edges();
    const auto fisher_at = [&](double s) {
        const Eigen::VectorXd h = floored(ev.apply_H(s, rho));
        return fisher_sum(edges, h, h.array().log());
    };
    const auto phi_at = [&](double s) { return phi_functional(mu, floored(ev.apply_H(s, rho))); };

    DissipationTrace trace;
    trace.grid = Eigen::Map<const Eigen::VectorXd>(nodes.data(), static_cast<long>(nodes.size()));
    trace.fisher_samples.resize(trace.grid.size());
    for (long j = 0; j < trace.grid.size(); ++j) {
        trace.fisher_samples(j) = fisher_at(trace.grid(j));
    }
    double simpson = 0.0;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const double a = nodes[j];
        const double b = nodes[j + 1];
        simpson += (b - a) / 6.0 *
                   (trace.fisher_samples(static_cast<long>(j)) + 4.0 * fisher_at(0.5 * (a + b)) +
                    trace.fisher_samples(static_cast<long>(j) + 1));
    }
    trace.simpson_integral = simpson;

    // h_0 = M^{-1} rho; its phi value is the closed form itself, and the
    // quadrature window telescopes between the two boundary phi values.
    const double phi_start = phi_at(s_min);
    const double phi_end = phi_at(s_max);
    trace.telescoped_integral = phi_start - phi_end;
    trace.head_correction = phi_functional(mu, rho.cwiseQuotient(mu)) - phi_start;
    trace.tail_correction = phi_end;
    trace.numeric_integral = trace.head_correction + simpson + trace.tail_correction;

    double closed = 0.0;
    for (int i = 0; i < rho.size(); ++i) {
        if (rho(i) > 0.0) closed += rho(i) * std::log(rho(i) / mu(i));
    }
    trace.closed_form = closed;
    trace.discrepancy = std::abs(trace.numeric_integral - closed);
    return trace;
}

HeatVariationBound heat_variation_check(const WeightedMultigraph& g, const Eigen::VectorXd& w,
                                        double tol) {
    if (w.size() != g.edge_count()) {
        throw entropy_error("edge weight length does not match edge count");
    }
    for (int i = 0; i < w.size(); ++i) {
        if (!(w(i) > 0.0) || !std::isfinite(w(i))) {
            throw entropy_error("heat_variation_check requires strictly positive weights");
        }
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw entropy_error("tolerance must be positive");
    }

    const EdgeWeighting weighting = measure_from_weights(g, w);
    const HeatKernelEvaluator ev(g, weighting.mu);
    const SpectralDecomposition& dec = ev.decomposition();
    const IncidenceSystem& sys = ev.system();
    const double lambda2 = dec.lambda2();
    const double lambda_max = dec.lambda_max();
    const double cut = kKernelThreshold * lambda_max;

    const int n = sys.vertex_count();
    const int m = sys.edge_count();
    const Eigen::VectorXd inv_sqrt_mu = weighting.mu.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled =
        sys.conductance.cwiseSqrt().asDiagonal() * sys.incidence * inv_sqrt_mu.asDiagonal();

    Eigen::MatrixXd u(m, n);
    Eigen::VectorXd rates(n);
    int cols = 0;
    for (int i = 0; i < n; ++i) {
        if (dec.eigenvalues(i) < cut) continue;
        u.col(cols) = scaled * dec.eigenvectors.col(i);
        rates(cols) = dec.eigenvalues(i);
        ++cols;
    }
    const auto modes = u.leftCols(cols);
    const auto mode_rates = rates.head(cols);

    const auto integrand = [&](double t) {
        const Eigen::VectorXd half_decay = (-0.5 * t * mode_rates.array()).exp();
        const Eigen::MatrixXd ut = modes * half_decay.asDiagonal();
        return w.dot((ut * ut.transpose()).cwiseAbs() * w);
    };

    // The integrand is bounded by ||w||^2 sum_i ||u_i||^2 e^{-lambda2 t}, so
    // truncating at T leaves at most that constant over lambda2 times
    // e^{-lambda2 T}, pushed below tol by the choice of T.
    const double w2 = w.squaredNorm();
    const double q_const = w2 * modes.squaredNorm() / lambda2;
    double horizon = std::log(std::max(q_const / tol, 1.0)) / lambda2;
    horizon = std::max(horizon, 1e-2 / lambda_max);
    const double head_end = std::min(1e-4 / lambda_max, horizon / 4.0);

    HeatVariationBound out;
    out.lhs = composite_simpson(linear_nodes(0.0, head_end, 16), integrand) +
              composite_simpson(geometric_nodes(head_end, horizon, 64), integrand);
    out.rhs = 2.0 * w2 * entropy(weighting.mu);
    return out;
}

}  // namespace currents
