#ifndef CURRENTS_REPORT_IO_HPP
#define CURRENTS_REPORT_IO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "currents/localization.hpp"

namespace currents {

struct report_io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shared numeric formatter (17 significant digits) so every output format
/// and every run of the same binary prints identical bytes.
std::string format_double(double v);

/// Minimal JSON string escaping for the plain-ASCII strings reports carry.
std::string json_escape(const std::string& s);

struct ParsedReport {
    SuiteResult result;
    std::uint64_t seed = 0;
    double rel_tol = kDefaultRelTol;
    double abs_tol = kDefaultAbsTol;
};

/// Deterministic JSON document: fixed key order, fixed row order, no runtime
/// fields, numbers through format_double.
std::string render_report_json(const SuiteResult& result, std::uint64_t seed, double rel_tol,
                               double abs_tol);

/// One line per executed check, same numeric formatting as the JSON.
std::string render_report_csv(const SuiteResult& result);

/// Human-readable summary table, including skips and per-check runtimes.
std::string render_report_table(const SuiteResult& result);

ParsedReport parse_report_json(const std::string& text);

/// Writes through a sibling temp file and renames, so readers never observe
/// a half-written report.
void write_text_atomically(const std::string& path, const std::string& content);

}  // namespace currents

#endif
