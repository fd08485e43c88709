#ifndef CURRENTS_LOCALIZATION_HPP
#define CURRENTS_LOCALIZATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "currents/graph.hpp"

namespace currents {

struct localization_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr double kDefaultAbsTol = 1e-8;

/// One executed check. For direction "upper" the check passes when
/// value <= bound (1 + rel_tol) + abs_tol; for "lower" when
/// value >= bound (1 - rel_tol) - abs_tol. margin is bound - value for upper
/// rows and value - bound for lower rows, so positive margin always means
/// slack.
struct VerificationReport {
    std::string check;
    std::string family;
    int n = 0;
    int m = 0;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string direction = "upper";
    std::string note;
    double runtime_seconds = 0.0;
};

/// A check that was requested but does not apply to an instance, with the
/// reason it was not run.
struct SkippedCheck {
    std::string check;
    std::string family;
    int n = 0;
    int m = 0;
    std::uint64_t seed = 0;
    std::string reason;
};

/// |w' Pibar w| against its entropy bound 2 H(mu_w) ||w||^2.
VerificationReport check_quadratic_form_bound(const WeightedMultigraph& g,
                                              const Eigen::VectorXd& w,
                                              double rel_tol = kDefaultRelTol,
                                              double abs_tol = kDefaultAbsTol);

/// ||Pibar|| against 2 ln n on an arbitrarily weighted graph.
VerificationReport check_spectral_bound_weighted(const WeightedMultigraph& g,
                                                 double rel_tol = kDefaultRelTol,
                                                 double abs_tol = kDefaultAbsTol);

/// Unit-conductance chain: average l1 flow, ||Kbar||, both against 2 ln n,
/// plus the ordering row average <= ||Kbar||.
std::vector<VerificationReport> check_unweighted_bounds(const WeightedMultigraph& g,
                                                        double rel_tol = kDefaultRelTol,
                                                        double abs_tol = kDefaultAbsTol);

/// Two-vertex gadget with edge_count-1 unit edges and one of conductance big:
/// ||Kbar|| must clear 0.9 sqrt(edge_count) (a desk-scale proxy for the
/// sqrt(m) limit) while ||Pibar|| stays within 2 ln 2.
std::vector<VerificationReport> check_parallel_gadget(int edge_count, double big,
                                                      double rel_tol = kDefaultRelTol,
                                                      double abs_tol = kDefaultAbsTol);

struct SuiteConfig {
    std::vector<std::string> families;
    int n_min = 4;
    int n_max = 64;
    double gnp_p = 0.3;
    std::vector<std::string> checks;
    std::uint64_t seed = 7;
    double rel_tol = kDefaultRelTol;
    double abs_tol = kDefaultAbsTol;
    int jobs = 1;
};

struct SuiteResult {
    std::vector<VerificationReport> reports;
    std::vector<SkippedCheck> skipped;
};

const std::vector<std::string>& known_check_names();

/// Runs every selected check over the family grid plus the gadget instances.
/// Deterministic for a fixed config, independent of the jobs count; per-check
/// failures become failing rows, and instance-level errors surface as thrown
/// localization_error.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace currents

#endif
