#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "currents/entropy.hpp"
#include "currents/graph.hpp"
#include "currents/heat_kernel.hpp"

using namespace currents;

namespace {

WeightedMultigraph single_edge() { return build_graph({{0, 1, 1.0}}, 2); }

WeightedMultigraph triangle() {
    return build_graph({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, 3);
}

Eigen::VectorXd uniform_measure(int n) {
    return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
}

}  // namespace

TEST_CASE("entropy of standard distributions") {
    CHECK(entropy(uniform_measure(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(entropy(uniform_measure(7)) == doctest::Approx(std::log(7.0)).epsilon(1e-14));

    Eigen::VectorXd delta(3);
    delta << 0.0, 1.0, 0.0;
    CHECK(entropy(delta) == 0.0);

    Eigen::VectorXd skew(2);
    skew << 0.25, 0.75;
    CHECK(entropy(skew) ==
          doctest::Approx(-0.25 * std::log(0.25) - 0.75 * std::log(0.75)).epsilon(1e-15));
}

TEST_CASE("entropy validates its input") {
    Eigen::VectorXd negative(2);
    negative << 1.5, -0.5;
    CHECK_THROWS_AS(entropy(negative), entropy_error);
    Eigen::VectorXd off(2);
    off << 0.5, 0.4;
    CHECK_THROWS_AS(entropy(off), entropy_error);
}

TEST_CASE("log_mean closed forms and symmetry") {
    CHECK(log_mean(3.0, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(log_mean(2.0, 8.0) == doctest::Approx(3.0 / std::log(2.0)).epsilon(1e-14));
    CHECK(log_mean(1.0, std::exp(1.0)) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK(log_mean(5.0, 0.125) == doctest::Approx(log_mean(0.125, 5.0)).epsilon(1e-15));
}

TEST_CASE("log_mean sits between the geometric and arithmetic means") {
    const double pairs[][2] = {{1e-8, 1e8}, {2.0, 2.0000001}, {0.3, 7.0}, {1e-6, 5e-6}};
    for (const auto& p : pairs) {
        const double lm = log_mean(p[0], p[1]);
        CHECK(lm >= std::sqrt(p[0] * p[1]) * (1.0 - 1e-12));
        CHECK(lm <= 0.5 * (p[0] + p[1]) * (1.0 + 1e-12));
    }
}

TEST_CASE("log_mean branch seam is continuous") {
    // The series branch engages when |a - b| <= 1e-8 (a + b); values just
    // inside and just outside must agree far below the series truncation.
    const double a = 3.0;
    const double b_inside = a * (1.0 + 1.999e-8);
    const double b_outside = a * (1.0 + 2.001e-8);
    CHECK(std::abs(log_mean(a, b_inside) - log_mean(a, b_outside)) < 1e-10 * a);
}

TEST_CASE("log_mean rejects nonpositive arguments") {
    CHECK_THROWS_AS(log_mean(0.0, 1.0), entropy_error);
    CHECK_THROWS_AS(log_mean(1.0, -2.0), entropy_error);
    CHECK_THROWS_AS(log_mean(std::nan(""), 1.0), entropy_error);
}

TEST_CASE("fisher dissipation on the triangle") {
    Eigen::VectorXd h(3);
    h << 1.0, 2.0, 4.0;
    // (1-2)(log 1 - log 2) + (2-4)(log 2 - log 4) + (1-4)(log 1 - log 4)
    // collapses to 9 log 2.
    CHECK(fisher(triangle(), h) == doctest::Approx(9.0 * std::log(2.0)).epsilon(1e-14));

    const WeightedMultigraph weighted =
        build_graph({{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 1.0}}, 3);
    CHECK(fisher(weighted, h) == doctest::Approx(10.0 * std::log(2.0)).epsilon(1e-14));

    CHECK(fisher(triangle(), Eigen::VectorXd::Constant(3, 0.7)) == 0.0);
}

TEST_CASE("fisher is nonnegative and validates positivity") {
    Eigen::VectorXd h(3);
    h << 0.3, 5.0, 0.9;
    CHECK(fisher(triangle(), h) > 0.0);
    h(1) = 0.0;
    CHECK_THROWS_AS(fisher(triangle(), h), entropy_error);
    h(1) = -2.0;
    CHECK_THROWS_AS(fisher(triangle(), h), entropy_error);
    CHECK_THROWS_AS(fisher(triangle(), Eigen::VectorXd::Ones(2)), entropy_error);
}

TEST_CASE("phi_functional closed forms") {
    const Eigen::VectorXd mu = uniform_measure(3);
    CHECK(phi_functional(mu, Eigen::VectorXd::Ones(3)) == 0.0);

    // h = rho / mu for a point mass: phi equals the relative entropy log 3,
    // and the h = 0 entries exercise the 0 log 0 branch.
    Eigen::VectorXd h(3);
    h << 3.0, 0.0, 0.0;
    CHECK(phi_functional(mu, h) == doctest::Approx(std::log(3.0)).epsilon(1e-14));

    // Summands are pointwise nonnegative, so phi is monotone under growing
    // any single deviation from 1.
    Eigen::VectorXd near(3);
    near << 1.001, 0.999, 1.0;
    CHECK(phi_functional(mu, near) > 0.0);
    CHECK(phi_functional(mu, near) < 1e-5);
}

TEST_CASE("phi_functional validates its input") {
    const Eigen::VectorXd mu = uniform_measure(3);
    Eigen::VectorXd h(3);
    h << 1.0, -0.1, 1.0;
    CHECK_THROWS_AS(phi_functional(mu, h), entropy_error);
    CHECK_THROWS_AS(phi_functional(mu, Eigen::VectorXd::Ones(2)), entropy_error);
}

TEST_CASE("log-mean Cauchy-Schwarz bound on a single edge") {
    Eigen::VectorXd h(2);
    h << 4.0, 1.0;
    const LogMeanCsBound cs = log_mean_cs_check(single_edge(), h, Eigen::VectorXd::Ones(1));
    CHECK(cs.lhs == doctest::Approx(9.0).epsilon(1e-14));
    // I(h) = 3 log 4, and each endpoint carries weight 1: rhs = 3 log 4 * 5 / 2.
    CHECK(cs.rhs == doctest::Approx(7.5 * std::log(4.0)).epsilon(1e-14));
    CHECK(cs.margin == doctest::Approx(cs.rhs - cs.lhs));
    CHECK(cs.margin > 0.0);
}

TEST_CASE("log-mean Cauchy-Schwarz equality at constant h") {
    Eigen::VectorXd h = Eigen::VectorXd::Constant(3, 2.5);
    Eigen::VectorXd w(3);
    w << 0.2, 1.0, 3.0;
    const LogMeanCsBound cs = log_mean_cs_check(triangle(), h, w);
    CHECK(cs.lhs == 0.0);
    CHECK(cs.rhs == 0.0);
}

TEST_CASE("log-mean Cauchy-Schwarz holds on a weighted graph") {
    const WeightedMultigraph g =
        build_graph({{0, 1, 4.0}, {1, 2, 0.25}, {2, 3, 1.0}, {3, 0, 2.0}}, 4);
    Eigen::VectorXd h(4);
    h << 0.1, 2.0, 7.0, 0.5;
    Eigen::VectorXd w(4);
    w << 1.0, 0.0, 2.5, 0.3;
    const LogMeanCsBound cs = log_mean_cs_check(g, h, w);
    CHECK(cs.lhs <= cs.rhs * (1.0 + 1e-12));
    CHECK_THROWS_AS(log_mean_cs_check(g, h, Eigen::VectorXd::Constant(4, -1.0)), entropy_error);
}

TEST_CASE("dissipation integral on a single edge equals log 2") {
    Eigen::VectorXd rho(2);
    rho << 1.0, 0.0;
    const DissipationTrace trace =
        dissipation_trace(single_edge(), uniform_measure(2), rho, 1e-8);
    CHECK(trace.closed_form == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(trace.discrepancy < 1e-8);
    CHECK(std::abs(trace.simpson_integral - trace.telescoped_integral) < 1e-9);

    // The corrections plus the Simpson piece are exactly how the numeric
    // integral is assembled, so the discrepancy is the telescope error plus
    // the floating-point difference of the two phi evaluations at h_0.
    CHECK(trace.numeric_integral ==
          doctest::Approx(trace.head_correction + trace.simpson_integral +
                          trace.tail_correction));
}

TEST_CASE("dissipation integral on the triangle with a skewed measure") {
    Eigen::VectorXd mu(3);
    mu << 0.5, 0.3, 0.2;
    Eigen::VectorXd rho = Eigen::VectorXd::Zero(3);
    rho(2) = 1.0;
    const DissipationTrace trace = dissipation_trace(triangle(), mu, rho, 1e-8);
    CHECK(trace.closed_form == doctest::Approx(-std::log(0.2)).epsilon(1e-15));
    CHECK(trace.discrepancy < 1e-7);
    CHECK(std::abs(trace.simpson_integral - trace.telescoped_integral) < 1e-8);
    CHECK(trace.fisher_samples.minCoeff() >= 0.0);
    CHECK(trace.grid.size() >= 2);
}

TEST_CASE("dissipation accepts spread initial distributions") {
    Eigen::VectorXd rho(3);
    rho << 0.6, 0.25, 0.15;
    const DissipationTrace trace = dissipation_trace(triangle(), uniform_measure(3), rho, 1e-8);
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) expected += rho(i) * std::log(rho(i) * 3.0);
    CHECK(trace.closed_form == doctest::Approx(expected).epsilon(1e-14));
    CHECK(trace.discrepancy < 1e-7 * (1.0 + expected));
}

TEST_CASE("dissipation_trace validates inputs") {
    Eigen::VectorXd rho(3);
    rho << 1.0, 0.0, 0.0;
    Eigen::VectorXd bad_mu(3);
    bad_mu << 0.5, 0.5, 0.0;
    CHECK_THROWS_AS(dissipation_trace(triangle(), bad_mu, rho, 1e-8), entropy_error);
    CHECK_THROWS_AS(dissipation_trace(triangle(), uniform_measure(3), rho, 0.0), entropy_error);
    Eigen::VectorXd not_prob(3);
    not_prob << 0.5, 0.2, 0.2;
    CHECK_THROWS_AS(dissipation_trace(triangle(), uniform_measure(3), not_prob, 1e-8),
                    entropy_error);
}

TEST_CASE("phi decays along the heat flow at rate fisher") {
    Eigen::VectorXd mu(3);
    mu << 0.5, 0.3, 0.2;
    Eigen::VectorXd rho = Eigen::VectorXd::Zero(3);
    rho(0) = 1.0;
    const HeatKernelEvaluator ev(triangle(), mu);

    // Symmetric difference quotient of phi(h_s) against -I(h_s) at an
    // interior time where the flow is well away from equilibrium.
    const double s = 0.05;
    const double ds = 3e-4 * s;
    const Eigen::VectorXd h_mid = ev.apply_H(s, rho);
    const double fisher_mid = fisher(triangle(), h_mid);
    REQUIRE(fisher_mid > 1e-3);
    const double phi_plus = phi_functional(mu, ev.apply_H(s + ds, rho));
    const double phi_minus = phi_functional(mu, ev.apply_H(s - ds, rho));
    const double slope = (phi_plus - phi_minus) / (2.0 * ds);
    CHECK(slope == doctest::Approx(-fisher_mid).epsilon(1e-4));
}

TEST_CASE("heat variation bound on a single edge") {
    const HeatVariationBound hv = heat_variation_check(single_edge(), Eigen::VectorXd::Ones(1), 1e-6);
    // The only mode decays at rate 4 with weight 4, so the integral is 1.
    CHECK(hv.lhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(hv.rhs == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(hv.lhs <= hv.rhs);
}

TEST_CASE("heat variation bound on weighted graphs") {
    const WeightedMultigraph g =
        build_graph({{0, 1, 3.0}, {1, 2, 0.5}, {2, 0, 1.0}, {0, 2, 2.0}}, 3);
    Eigen::VectorXd w(4);
    w << 1.0, 0.4, 2.0, 0.7;
    const HeatVariationBound hv = heat_variation_check(g, w, 1e-6);
    CHECK(hv.lhs > 0.0);
    CHECK(hv.lhs <= hv.rhs * (1.0 + 1e-6));

    Eigen::VectorXd with_zero(4);
    with_zero << 1.0, 0.0, 2.0, 0.7;
    CHECK_THROWS_AS(heat_variation_check(g, with_zero, 1e-6), entropy_error);
}
