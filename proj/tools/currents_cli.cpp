#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "currents/entropy.hpp"
#include "currents/graph.hpp"
#include "currents/graph_gen.hpp"
#include "currents/linalg.hpp"
#include "currents/localization.hpp"
#include "currents/report_io.hpp"
#include "currents/transfer_current.hpp"

namespace {

using namespace currents;

struct cli_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar and matrix quantities `compute` can emit, in output order.
const std::vector<std::string> kQuantityNames = {"K",      "Pi",      "Kbar_norm", "Pibar_norm",
                                                 "avg_l1", "eff_res", "entropy_mu"};

bool contains(const std::vector<std::string>& names, const std::string& name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

/// "family" or "family:mode" with mode one of unit | seeded.
std::pair<std::string, ConductanceMode> parse_family_token(const std::string& token) {
    const std::size_t colon = token.find(':');
    if (colon == std::string::npos) {
        return {token, ConductanceMode::unit};
    }
    const std::string family = token.substr(0, colon);
    const std::string mode = token.substr(colon + 1);
    if (mode == "unit") return {family, ConductanceMode::unit};
    if (mode == "seeded") return {family, ConductanceMode::seeded};
    throw cli_error("unknown conductance mode '" + mode + "' (expected unit or seeded)");
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    write_text_atomically(out_path, content);
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw cli_error("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string render_vector_json(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out + "]";
}

std::string render_matrix_json(const Eigen::MatrixXd& a) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        out += i == 0 ? "\n      [" : ",\n      [";
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j) out += ", ";
            out += format_double(a(i, j));
        }
        out += "]";
    }
    return out + "\n    ]";
}

struct GenConfig {
    std::string family;
    int n = 0;
    int m = 0;
    double p = 0.3;
    double big = 0.0;
    bool big_set = false;
    std::uint64_t seed = 7;
    std::string out;
};

int run_gen(const GenConfig& cfg) {
    FamilySpec spec;
    const auto [family, mode] = parse_family_token(cfg.family);
    spec.family = family;
    spec.mode = mode;
    spec.n = cfg.n;
    spec.m = cfg.m;
    spec.p = cfg.p;
    spec.seed = cfg.seed;
    spec.big = cfg.big;
    if (!cfg.big_set && family == "parallel_gadget") {
        spec.big = 100.0 * cfg.m;
    }
    const WeightedMultigraph g = generate(spec);
    std::ostringstream text;
    write_graph_text(text, g);
    write_output(cfg.out, text.str());
    return 0;
}

struct ComputeConfig {
    std::string input;
    std::vector<std::string> quantities;
    bool emit_matrices = false;
    std::string format = "json";
    std::string out;
};

/// Validates the request and returns the selection in canonical order.
/// Rejections happen before the graph is even opened.
std::vector<std::string> resolve_quantities(const ComputeConfig& cfg) {
    for (const std::string& q : cfg.quantities) {
        if (!contains(kQuantityNames, q)) {
            throw cli_error("unknown quantity '" + q + "'");
        }
    }
    std::vector<std::string> selected;
    for (const std::string& q : kQuantityNames) {
        const bool is_matrix = q == "K" || q == "Pi";
        if (cfg.quantities.empty()) {
            if (!is_matrix || cfg.emit_matrices) selected.push_back(q);
        } else if (contains(cfg.quantities, q)) {
            if (is_matrix && !cfg.emit_matrices) {
                throw cli_error("quantity '" + q + "' requires --emit-matrices");
            }
            selected.push_back(q);
        }
    }
    const bool has_matrix = contains(selected, "K") || contains(selected, "Pi");
    if (has_matrix && cfg.format != "json") {
        throw cli_error("matrices are only rendered in json format");
    }
    return selected;
}

double converged_norm(const Eigen::MatrixXd& a, const std::string& name) {
    const SpectralNormEstimate est = nonneg_operator_norm(a);
    if (!est.converged) {
        std::cerr << "warning: power iteration for " << name << " stopped at " << est.iterations
                  << " iterations before reaching its drift target\n";
    }
    return est.value;
}

int run_compute(const ComputeConfig& cfg) {
    const std::vector<std::string> selected = resolve_quantities(cfg);
    const WeightedMultigraph g = load_graph_file(cfg.input);
    const ElectricalSystem es = analyze(g);

    // Key -> JSON fragment, plus a flat (label, number) list for csv/table.
    std::vector<std::pair<std::string, std::string>> fragments;
    std::vector<std::pair<std::string, double>> flat;
    for (const std::string& q : selected) {
        if (q == "K") {
            fragments.emplace_back(q, render_matrix_json(es.currents.k));
        } else if (q == "Pi") {
            fragments.emplace_back(q, render_matrix_json(es.currents.pi));
        } else if (q == "Kbar_norm") {
            const double v = converged_norm(es.currents.kbar, q);
            fragments.emplace_back(q, format_double(v));
            flat.emplace_back(q, v);
        } else if (q == "Pibar_norm") {
            const double v = converged_norm(es.currents.pibar, q);
            fragments.emplace_back(q, format_double(v));
            flat.emplace_back(q, v);
        } else if (q == "avg_l1") {
            const double v = average_l1_flow(es.currents.kbar);
            fragments.emplace_back(q, format_double(v));
            flat.emplace_back(q, v);
        } else if (q == "eff_res") {
            Eigen::VectorXd r(g.edge_count());
            for (int e = 0; e < g.edge_count(); ++e) {
                r[e] = effective_resistance(es.green, e);
            }
            fragments.emplace_back(q, render_vector_json(r));
            for (int e = 0; e < g.edge_count(); ++e) {
                flat.emplace_back(q + "[" + std::to_string(e) + "]", r[e]);
            }
        } else {
            const EdgeWeighting ew =
                measure_from_weights(g, es.sys.conductance.cwiseSqrt());
            const double v = entropy(ew.mu);
            fragments.emplace_back(q, format_double(v));
            flat.emplace_back(q, v);
        }
    }

    std::string content;
    if (cfg.format == "json") {
        content = "{\n";
        content += "  \"command\": \"compute\",\n";
        content += "  \"input\": \"" + json_escape(cfg.input) + "\",\n";
        content += "  \"n\": " + std::to_string(g.vertex_count()) + ",\n";
        content += "  \"m\": " + std::to_string(g.edge_count()) + ",\n";
        content += "  \"quantities\": {";
        for (std::size_t i = 0; i < fragments.size(); ++i) {
            content += i == 0 ? "\n" : ",\n";
            content += "    \"" + fragments[i].first + "\": " + fragments[i].second;
        }
        content += fragments.empty() ? "}\n" : "\n  }\n";
        content += "}\n";
    } else if (cfg.format == "csv") {
        content = "quantity,value\n";
        for (const auto& [label, v] : flat) {
            content += label + "," + format_double(v) + "\n";
        }
    } else {
        std::ostringstream table;
        for (const auto& [label, v] : flat) {
            char line[80];
            std::snprintf(line, sizeof(line), "%-16s %s\n", label.c_str(),
                          format_double(v).c_str());
            table << line;
        }
        content = table.str();
    }
    write_output(cfg.out, content);
    return 0;
}

struct VerifyConfig {
    std::vector<std::string> families;
    int n = 0;
    bool n_set = false;
    int m = 0;
    bool m_set = false;
    double p = 0.3;
    double big = 0.0;
    bool big_set = false;
    std::uint64_t seed = 7;
    std::vector<std::string> checks;
    double rel_tol = kDefaultRelTol;
    double abs_tol = kDefaultAbsTol;
    int jobs = 1;
    std::string format = "json";
    std::string out;
};

/// Expands the `parallel_gadget` alias and rejects unknown names before any
/// instance runs.
std::vector<std::string> resolve_checks(const std::vector<std::string>& requested) {
    std::vector<std::string> resolved;
    for (const std::string& check : requested) {
        if (check == "parallel_gadget") {
            resolved.push_back("parallel_gadget_kbar");
            resolved.push_back("parallel_gadget_pibar");
            continue;
        }
        if (!contains(known_check_names(), check)) {
            throw cli_error("unknown check name '" + check + "'");
        }
        resolved.push_back(check);
    }
    return resolved;
}

int run_verify(const VerifyConfig& cfg) {
    std::vector<std::string> checks = resolve_checks(cfg.checks);
    std::vector<std::string> families = cfg.families;

    // `--family parallel_gadget` is shorthand for selecting the gadget checks;
    // the gadget is not part of the sized family grid.
    const auto gadget_family = std::find(families.begin(), families.end(), "parallel_gadget");
    if (gadget_family != families.end()) {
        families.erase(gadget_family);
        if (checks.empty()) {
            checks = {"parallel_gadget_kbar", "parallel_gadget_pibar"};
        }
    }

    SuiteResult result;
    if (cfg.m_set) {
        // A single gadget instance replaces the default {4, 9, 16} sweep.
        for (const std::string& check : checks) {
            if (check != "parallel_gadget_kbar" && check != "parallel_gadget_pibar") {
                throw cli_error("check '" + check + "' does not apply to a --m gadget run");
            }
        }
        const double big = cfg.big_set ? cfg.big : 100.0 * cfg.m;
        std::vector<VerificationReport> rows =
            check_parallel_gadget(cfg.m, big, cfg.rel_tol, cfg.abs_tol);
        for (VerificationReport& r : rows) {
            if (!checks.empty() && !contains(checks, r.check)) continue;
            r.seed = cfg.seed;
            result.reports.push_back(std::move(r));
        }
    } else {
        SuiteConfig config;
        config.families = families;
        if (cfg.n_set) {
            config.n_min = cfg.n;
            config.n_max = cfg.n;
        }
        config.gnp_p = cfg.p;
        config.checks = checks;
        config.seed = cfg.seed;
        config.rel_tol = cfg.rel_tol;
        config.abs_tol = cfg.abs_tol;
        config.jobs = cfg.jobs;
        result = run_suite(config);
    }

    std::string content;
    if (cfg.format == "json") {
        content = render_report_json(result, cfg.seed, cfg.rel_tol, cfg.abs_tol);
    } else if (cfg.format == "csv") {
        content = render_report_csv(result);
    } else {
        content = render_report_table(result);
    }
    write_output(cfg.out, content);

    const bool all_pass = std::all_of(result.reports.begin(), result.reports.end(),
                                      [](const VerificationReport& r) { return r.pass; });
    return all_pass ? 0 : 1;
}

struct ReportConfig {
    std::string input;
    std::string format = "table";
    std::string out;
};

int run_report(const ReportConfig& cfg) {
    const ParsedReport parsed = parse_report_json(slurp_file(cfg.input));
    std::string content;
    if (cfg.format == "json") {
        content = render_report_json(parsed.result, parsed.seed, parsed.rel_tol, parsed.abs_tol);
    } else if (cfg.format == "csv") {
        content = render_report_csv(parsed.result);
    } else {
        content = render_report_table(parsed.result);
    }
    write_output(cfg.out, content);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"electrical-flow toolkit: graph generators, transfer-current quantities, and "
                 "a bound-verification suite"};
    app.require_subcommand(1);

    GenConfig gen_cfg;
    CLI::App* gen = app.add_subcommand("gen", "generate a graph in the text edge-list format");
    gen->add_option("--family", gen_cfg.family,
                    "family name, optionally with :unit or :seeded conductances")
        ->required();
    gen->add_option("--n", gen_cfg.n, "vertex count");
    gen->add_option("--m", gen_cfg.m, "edge count (parallel_gadget)");
    gen->add_option("--p", gen_cfg.p, "edge probability (gnp, random_weighted)");
    CLI::Option* gen_big =
        gen->add_option("--big", gen_cfg.big, "large conductance (parallel_gadget; default 100*m)");
    gen->add_option("--seed", gen_cfg.seed, "seed for all randomized choices");
    gen->add_option("--out", gen_cfg.out, "output path (stdout when omitted)");

    ComputeConfig compute_cfg;
    CLI::App* compute =
        app.add_subcommand("compute", "compute flow quantities for one graph file");
    compute->add_option("graph", compute_cfg.input, "graph file in the text edge-list format")
        ->required();
    compute->add_option("--checks", compute_cfg.quantities,
                        "quantities to emit: K, Pi, Kbar_norm, Pibar_norm, avg_l1, eff_res, "
                        "entropy_mu (default: all scalars)")
        ->delimiter(',');
    compute->add_flag("--emit-matrices", compute_cfg.emit_matrices,
                      "allow the m x m matrices K and Pi in the output");
    compute->add_option("--format", compute_cfg.format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    compute->add_option("--out", compute_cfg.out, "output path (stdout when omitted)");

    VerifyConfig verify_cfg;
    CLI::App* verify =
        app.add_subcommand("verify", "run bound checks over graph families and report margins");
    verify->add_option("--family", verify_cfg.families,
                       "restrict to these families (default: the full grid)")
        ->delimiter(',');
    CLI::Option* verify_n =
        verify->add_option("--n", verify_cfg.n, "run a single size instead of the 4..64 sweep");
    CLI::Option* verify_m =
        verify->add_option("--m", verify_cfg.m, "run one parallel gadget with this edge count");
    verify->add_option("--p", verify_cfg.p, "gnp edge probability");
    CLI::Option* verify_big =
        verify->add_option("--big", verify_cfg.big, "gadget large conductance (default 100*m)");
    verify->add_option("--seed", verify_cfg.seed, "seed for all randomized choices");
    verify->add_option("--checks", verify_cfg.checks,
                       "run only these checks (default: every known check)")
        ->delimiter(',');
    verify->add_option("--tol-rel", verify_cfg.rel_tol, "relative tolerance for bound checks")
        ->check(CLI::PositiveNumber);
    verify->add_option("--tol-abs", verify_cfg.abs_tol, "absolute tolerance for bound checks")
        ->check(CLI::PositiveNumber);
    verify->add_option("--jobs", verify_cfg.jobs, "worker threads for suite instances")
        ->check(CLI::PositiveNumber);
    verify->add_option("--format", verify_cfg.format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    verify->add_option("--out", verify_cfg.out, "report path (stdout when omitted)");

    ReportConfig report_cfg;
    CLI::App* report =
        app.add_subcommand("report", "re-render a json report as json, csv, or a table");
    report->add_option("report", report_cfg.input, "report file produced by verify")->required();
    report->add_option("--format", report_cfg.format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    report->add_option("--out", report_cfg.out, "output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    gen_cfg.big_set = gen_big->count() > 0;
    verify_cfg.n_set = verify_n->count() > 0;
    verify_cfg.m_set = verify_m->count() > 0;
    verify_cfg.big_set = verify_big->count() > 0;

    try {
        if (gen->parsed()) return run_gen(gen_cfg);
        if (compute->parsed()) return run_compute(compute_cfg);
        if (verify->parsed()) return run_verify(verify_cfg);
        return run_report(report_cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
