#include "currents/localization.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>
#include <utility>

#include "currents/entropy.hpp"
#include "currents/graph_gen.hpp"
#include "currents/heat_kernel.hpp"
#include "currents/linalg.hpp"
#include "currents/transfer_current.hpp"

namespace currents {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

VerificationReport upper_report(std::string check, double value, double bound, double rel_tol,
                                double abs_tol) {
    VerificationReport r;
    r.check = std::move(check);
    r.value = value;
    r.bound = bound;
    r.margin = bound - value;
    r.rel_tol = rel_tol;
    r.abs_tol = abs_tol;
    r.pass = value <= bound * (1.0 + rel_tol) + abs_tol;
    r.direction = "upper";
    return r;
}

VerificationReport lower_report(std::string check, double value, double bound, double rel_tol,
                                double abs_tol) {
    VerificationReport r;
    r.check = std::move(check);
    r.value = value;
    r.bound = bound;
    r.margin = value - bound;
    r.rel_tol = rel_tol;
    r.abs_tol = abs_tol;
    r.pass = value >= bound * (1.0 - rel_tol) - abs_tol;
    r.direction = "lower";
    return r;
}

Eigen::VectorXd log_uniform_vector(std::uint64_t stream_seed, int size, double lo_exp,
                                   double hi_exp) {
    SplitMix64 rng(stream_seed);
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) {
        v(i) = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * rng.next_double());
    }
    return v;
}

VerificationReport quad_form_report(const ElectricalSystem& es, const Eigen::VectorXd& w,
                                    const std::string& name, double rel_tol, double abs_tol) {
    const double value = std::abs(w.dot(es.currents.pibar * w));
    const EdgeWeighting weighting = measure_from_weights(es.graph, w);
    const double bound = 2.0 * entropy(weighting.mu) * w.squaredNorm();
    return upper_report(name, value, bound, rel_tol, abs_tol);
}

VerificationReport pibar_norm_report(const ElectricalSystem& es, const std::string& name,
                                     double rel_tol, double abs_tol) {
    const SpectralNormEstimate est = nonneg_spectral_norm(es.currents.pibar);
    VerificationReport r = upper_report(
        name, est.value, 2.0 * std::log(static_cast<double>(es.graph.vertex_count())), rel_tol,
        abs_tol);
    if (!est.converged) {
        r.note = "power iteration reached its cap; value is the final Rayleigh estimate";
    }
    return r;
}

std::vector<VerificationReport> unit_chain_reports(const ElectricalSystem& es, double rel_tol,
                                                   double abs_tol) {
    const double log_bound = 2.0 * std::log(static_cast<double>(es.graph.vertex_count()));
    const double avg = average_l1_flow(es.currents.kbar);
    const SpectralNormEstimate est = nonneg_operator_norm(es.currents.kbar);

    std::vector<VerificationReport> rows;
    rows.push_back(upper_report("avg_l1", avg, log_bound, rel_tol, abs_tol));
    VerificationReport norm_row = upper_report("kbar_norm", est.value, log_bound, rel_tol, abs_tol);
    if (!est.converged) {
        norm_row.note = "power iteration reached its cap; value is the final Rayleigh estimate";
    }
    rows.push_back(std::move(norm_row));
    rows.push_back(upper_report("avg_l1_vs_kbar", avg, est.value, rel_tol, 0.0));
    return rows;
}

struct InstanceSpec {
    std::string family;
    int n = 0;
    ConductanceMode mode = ConductanceMode::unit;
};

struct InstanceOutput {
    std::vector<VerificationReport> rows;
    std::vector<SkippedCheck> skipped;
};

const std::vector<std::string> kDefaultFamilies = {"path",   "cycle",     "star", "complete",
                                                   "grid2d", "hypercube", "gnp"};

std::vector<int> family_sizes(const std::string& family, int n_min, int n_max) {
    std::vector<int> sizes;
    for (int n = n_min; n <= n_max; ++n) {
        if (family == "cycle" && n < 3) continue;
        if (family == "grid2d") {
            const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
            if (k * k != n || k < 2) continue;
        }
        if (family == "hypercube" && (n < 4 || (n & (n - 1)) != 0)) continue;
        if (n < 2) continue;
        sizes.push_back(n);
    }
    return sizes;
}

void run_instance(const SuiteConfig& cfg, const InstanceSpec& inst, InstanceOutput& out) {
    using Clock = std::chrono::steady_clock;

    FamilySpec spec;
    spec.family = inst.family;
    spec.n = inst.n;
    spec.p = cfg.gnp_p;
    spec.mode = inst.mode;
    spec.seed = cfg.seed;
    const WeightedMultigraph g = generate(spec);

    const int n = g.vertex_count();
    const int m = g.edge_count();
    const bool unit = inst.mode == ConductanceMode::unit;
    const std::string mode_tag = unit ? "unit" : "seeded";
    const std::string family_tag = unit ? inst.family : inst.family + ":seeded";
    const std::string label = "family=" + inst.family + ";n=" + std::to_string(n) +
                              ";mode=" + mode_tag;

    std::optional<ElectricalSystem> es_cache;
    const auto es = [&]() -> const ElectricalSystem& {
        if (!es_cache) es_cache = analyze(g);
        return *es_cache;
    };

    const auto wanted = [&](const std::string& check) {
        return cfg.checks.empty() || contains(cfg.checks, check);
    };
    const auto skip_if_requested = [&](const std::string& check, const std::string& reason) {
        if (!cfg.checks.empty() && contains(cfg.checks, check)) {
            out.skipped.push_back({check, family_tag, n, m, cfg.seed, reason});
        }
    };
    const auto push = [&](VerificationReport r, double runtime) {
        r.family = family_tag;
        r.n = n;
        r.m = m;
        r.seed = cfg.seed;
        r.runtime_seconds = runtime;
        out.rows.push_back(std::move(r));
    };

    if (wanted("pi_projection") || wanted("pi_symmetry") || wanted("pi_trace")) {
        const auto t0 = Clock::now();
        const ProjectionResiduals res = projection_residuals(es().currents.pi);
        const double dt = seconds_since(t0);
        if (wanted("pi_projection")) {
            push(upper_report("pi_projection", res.idempotency, 1e-9, 0.0, 0.0), dt);
        }
        if (wanted("pi_symmetry")) {
            push(upper_report("pi_symmetry", res.symmetry, 1e-10, 0.0, 0.0), dt);
        }
        if (wanted("pi_trace")) {
            push(upper_report("pi_trace", std::abs(res.trace - (n - 1)), 1e-8, 0.0, 0.0), dt);
        }
    }

    if (wanted("pibar_norm")) {
        const auto t0 = Clock::now();
        VerificationReport r = pibar_norm_report(es(), "pibar_norm", cfg.rel_tol, cfg.abs_tol);
        push(std::move(r), seconds_since(t0));
    }

    const bool unit_chain_wanted = wanted("kbar_reciprocity") || wanted("kbar_norm") ||
                                   wanted("avg_l1") || wanted("avg_l1_vs_kbar");
    if (unit_chain_wanted) {
        if (!unit) {
            for (const char* check :
                 {"kbar_reciprocity", "kbar_norm", "avg_l1", "avg_l1_vs_kbar"}) {
                skip_if_requested(check, "requires unit conductances");
            }
        } else {
            if (wanted("kbar_reciprocity")) {
                const auto t0 = Clock::now();
                const double asym =
                    (es().currents.k - es().currents.k.transpose()).cwiseAbs().maxCoeff();
                push(upper_report("kbar_reciprocity", asym, 1e-10, 0.0, 0.0), seconds_since(t0));
            }
            const auto t0 = Clock::now();
            std::vector<VerificationReport> chain =
                unit_chain_reports(es(), cfg.rel_tol, cfg.abs_tol);
            const double dt = seconds_since(t0);
            for (VerificationReport& r : chain) {
                if (wanted(r.check)) push(std::move(r), dt);
            }
        }
    }

    Eigen::VectorXd w_random;
    const auto random_w = [&]() -> const Eigen::VectorXd& {
        if (w_random.size() == 0) {
            w_random = log_uniform_vector(derive_seed(cfg.seed, label + ";w"), m, -1.0, 1.0);
        }
        return w_random;
    };

    if (wanted("quad_form_ones")) {
        const auto t0 = Clock::now();
        VerificationReport r = quad_form_report(es(), Eigen::VectorXd::Ones(m), "quad_form_ones",
                                                cfg.rel_tol, cfg.abs_tol);
        push(std::move(r), seconds_since(t0));
    }
    if (wanted("quad_form_random")) {
        const auto t0 = Clock::now();
        VerificationReport r =
            quad_form_report(es(), random_w(), "quad_form_random", cfg.rel_tol, cfg.abs_tol);
        push(std::move(r), seconds_since(t0));
    }

    if (n <= 32) {
        if (wanted("current_oracle")) {
            const auto t0 = Clock::now();
            const IncidenceSystem& sys = es().sys;
            double worst = 0.0;
            for (int e = 0; e < m; ++e) {
                const Eigen::VectorXd injection = sys.incidence.row(e).transpose();
                const Eigen::VectorXd direct =
                    sys.conductance.cwiseProduct(sys.incidence * solve_potential(sys, injection));
                worst = std::max(worst,
                                 (es().currents.k.col(e) - direct).cwiseAbs().maxCoeff());
            }
            push(upper_report("current_oracle", worst, 1e-8, 0.0, 0.0), seconds_since(t0));
        }
        if (wanted("green_quadrature")) {
            const auto t0 = Clock::now();
            const EdgeWeighting weighting =
                measure_from_weights(g, es().sys.conductance.cwiseSqrt());
            const HeatKernelEvaluator ev(g, weighting.mu);
            const Eigen::MatrixXd quad = green_time_quadrature(ev, 1e-6);
            const double diff = (quad - es().green).cwiseAbs().maxCoeff();
            const double bound = 1e-5 * (1.0 + es().green.cwiseAbs().maxCoeff());
            push(upper_report("green_quadrature", diff, bound, 0.0, 0.0), seconds_since(t0));
        }
        if (wanted("dissipation") || wanted("dissipation_telescope")) {
            const auto t0 = Clock::now();
            const Eigen::VectorXd w_mu = unit ? Eigen::VectorXd::Ones(m) : random_w();
            const EdgeWeighting weighting = measure_from_weights(g, w_mu);
            const int v = static_cast<int>(derive_seed(cfg.seed, label + ";v") %
                                           static_cast<std::uint64_t>(n));
            Eigen::VectorXd rho = Eigen::VectorXd::Zero(n);
            rho(v) = 1.0;
            const DissipationTrace trace = dissipation_trace(g, weighting.mu, rho, 1e-8);
            const double dt = seconds_since(t0);
            if (wanted("dissipation")) {
                push(upper_report("dissipation", trace.discrepancy, 1e-5 * trace.closed_form, 0.0,
                                  0.0),
                     dt);
            }
            if (wanted("dissipation_telescope")) {
                push(upper_report("dissipation_telescope",
                                  std::abs(trace.simpson_integral - trace.telescoped_integral),
                                  1e-8, 0.0, 0.0),
                     dt);
            }
        }
    } else {
        for (const char* check :
             {"current_oracle", "green_quadrature", "dissipation", "dissipation_telescope"}) {
            skip_if_requested(check, "outside the n <= 32 domain for this check");
        }
    }

    if (n <= 12) {
        if (wanted("heat_variation")) {
            const auto t0 = Clock::now();
            const Eigen::VectorXd w_hv = unit ? Eigen::VectorXd::Ones(m) : random_w();
            const HeatVariationBound hv = heat_variation_check(g, w_hv, 1e-6);
            push(upper_report("heat_variation", hv.lhs, hv.rhs, 1e-6, 1e-6), seconds_since(t0));
        }
    } else {
        skip_if_requested("heat_variation", "outside the n <= 12 domain for this check");
    }

    if (n <= 20) {
        if (wanted("log_mean_cs")) {
            const auto t0 = Clock::now();
            const Eigen::VectorXd h =
                log_uniform_vector(derive_seed(cfg.seed, label + ";h"), n, -1.0, 1.0);
            const LogMeanCsBound cs = log_mean_cs_check(g, h, random_w());
            push(upper_report("log_mean_cs", cs.lhs, cs.rhs, 1e-9, 0.0), seconds_since(t0));
        }
    } else {
        skip_if_requested("log_mean_cs", "outside the n <= 20 domain for this check");
    }
}

}  // namespace

const std::vector<std::string>& known_check_names() {
    static const std::vector<std::string> names = {
        "pi_projection",  "pi_symmetry",
        "pi_trace",       "pibar_norm",
        "kbar_reciprocity", "kbar_norm",
        "avg_l1",         "avg_l1_vs_kbar",
        "quad_form_ones", "quad_form_random",
        "current_oracle", "green_quadrature",
        "dissipation",    "dissipation_telescope",
        "heat_variation", "log_mean_cs",
        "parallel_gadget_kbar", "parallel_gadget_pibar"};
    return names;
}

VerificationReport check_quadratic_form_bound(const WeightedMultigraph& g,
                                              const Eigen::VectorXd& w, double rel_tol,
                                              double abs_tol) {
    if (w.size() != g.edge_count()) {
        throw localization_error("weight vector length does not match edge count");
    }
    if (w.cwiseAbs().maxCoeff() == 0.0) {
        throw localization_error("weight vector must be nonzero");
    }
    const ElectricalSystem es = analyze(g);
    VerificationReport r = quad_form_report(es, w, "quad_form", rel_tol, abs_tol);
    r.n = g.vertex_count();
    r.m = g.edge_count();
    return r;
}

VerificationReport check_spectral_bound_weighted(const WeightedMultigraph& g, double rel_tol,
                                                 double abs_tol) {
    const ElectricalSystem es = analyze(g);
    VerificationReport r = pibar_norm_report(es, "pibar_norm", rel_tol, abs_tol);
    r.n = g.vertex_count();
    r.m = g.edge_count();
    return r;
}

std::vector<VerificationReport> check_unweighted_bounds(const WeightedMultigraph& g,
                                                        double rel_tol, double abs_tol) {
    if (!g.unit_conductance()) {
        throw localization_error("check_unweighted_bounds requires unit conductances");
    }
    const ElectricalSystem es = analyze(g);
    std::vector<VerificationReport> rows = unit_chain_reports(es, rel_tol, abs_tol);
    for (VerificationReport& r : rows) {
        r.n = g.vertex_count();
        r.m = g.edge_count();
    }
    return rows;
}

std::vector<VerificationReport> check_parallel_gadget(int edge_count, double big, double rel_tol,
                                                      double abs_tol) {
    if (edge_count < 2) {
        throw localization_error("parallel gadget needs at least two edges");
    }
    if (!(big > 1.0)) {
        throw localization_error("parallel gadget needs big > 1");
    }
    FamilySpec spec;
    spec.family = "parallel_gadget";
    spec.m = edge_count;
    spec.big = big;
    const WeightedMultigraph g = generate(spec);
    const ElectricalSystem es = analyze(g);

    const SpectralNormEstimate kbar_est = nonneg_operator_norm(es.currents.kbar);
    VerificationReport grow =
        lower_report("parallel_gadget_kbar", kbar_est.value,
                     0.9 * std::sqrt(static_cast<double>(edge_count)), rel_tol, abs_tol);
    grow.note = "0.9 sqrt(m) is a desk-scale proxy for the sqrt(m) limit as big grows";

    const SpectralNormEstimate pibar_est = nonneg_spectral_norm(es.currents.pibar);
    VerificationReport stay = upper_report("parallel_gadget_pibar", pibar_est.value,
                                           2.0 * std::log(2.0), 0.0, 1e-9);

    std::vector<VerificationReport> rows = {std::move(grow), std::move(stay)};
    for (VerificationReport& r : rows) {
        r.family = "parallel_gadget";
        r.n = 2;
        r.m = edge_count;
    }
    return rows;
}

SuiteResult run_suite(const SuiteConfig& config) {
    for (const std::string& check : config.checks) {
        if (!contains(known_check_names(), check)) {
            throw localization_error("unknown check name '" + check + "'");
        }
    }
    const std::vector<std::string>& families =
        config.families.empty() ? kDefaultFamilies : config.families;
    for (const std::string& family : families) {
        if (!contains(kDefaultFamilies, family)) {
            throw localization_error("unknown family '" + family + "'");
        }
    }
    if (config.n_min > config.n_max || config.n_min < 2) {
        throw localization_error("invalid size range");
    }
    if (config.jobs < 1) {
        throw localization_error("jobs must be at least 1");
    }

    std::vector<InstanceSpec> instances;
    for (const std::string& family : families) {
        for (const int n : family_sizes(family, config.n_min, config.n_max)) {
            instances.push_back({family, n, ConductanceMode::unit});
            instances.push_back({family, n, ConductanceMode::seeded});
        }
    }

    std::vector<InstanceOutput> outputs(instances.size());
    std::vector<std::exception_ptr> failures(instances.size());
    const int workers =
        std::max(1, std::min<int>(config.jobs, static_cast<int>(instances.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < instances.size(); ++i) {
            run_instance(config, instances[i], outputs[i]);
        }
    } else {
        std::atomic<std::size_t> cursor{0};
        const auto work = [&]() {
            for (std::size_t i = cursor.fetch_add(1); i < instances.size();
                 i = cursor.fetch_add(1)) {
                try {
                    run_instance(config, instances[i], outputs[i]);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
    }

    SuiteResult result;
    for (InstanceOutput& out : outputs) {
        std::move(out.rows.begin(), out.rows.end(), std::back_inserter(result.reports));
        std::move(out.skipped.begin(), out.skipped.end(), std::back_inserter(result.skipped));
    }

    const bool gadget_wanted = config.checks.empty() ||
                               contains(config.checks, "parallel_gadget_kbar") ||
                               contains(config.checks, "parallel_gadget_pibar");
    if (gadget_wanted) {
        for (const int m : {4, 9, 16}) {
            std::vector<VerificationReport> rows =
                check_parallel_gadget(m, 100.0 * m, config.rel_tol, config.abs_tol);
            for (VerificationReport& r : rows) {
                if (!config.checks.empty() && !contains(config.checks, r.check)) continue;
                r.seed = config.seed;
                result.reports.push_back(std::move(r));
            }
        }
    }
    return result;
}

}  // namespace currents
