#include "currents/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace currents {

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                    out += buffer;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

namespace {

void append_report_row(std::string& out, const VerificationReport& r) {
    out += "    {\"check\": \"" + json_escape(r.check) + "\"";
    out += ", \"family\": \"" + json_escape(r.family) + "\"";
    out += ", \"n\": " + std::to_string(r.n);
    out += ", \"m\": " + std::to_string(r.m);
    out += ", \"value\": " + format_double(r.value);
    out += ", \"bound\": " + format_double(r.bound);
    out += ", \"margin\": " + format_double(r.margin);
    out += ", \"pass\": " + std::string(r.pass ? "true" : "false");
    out += ", \"seed\": " + std::to_string(r.seed);
    out += ", \"direction\": \"" + json_escape(r.direction) + "\"";
    out += ", \"rel_tol\": " + format_double(r.rel_tol);
    out += ", \"abs_tol\": " + format_double(r.abs_tol);
    if (!r.note.empty()) {
        out += ", \"note\": \"" + json_escape(r.note) + "\"";
    }
    out += "}";
}

void append_skip_row(std::string& out, const SkippedCheck& s) {
    out += "    {\"check\": \"" + json_escape(s.check) + "\"";
    out += ", \"family\": \"" + json_escape(s.family) + "\"";
    out += ", \"n\": " + std::to_string(s.n);
    out += ", \"m\": " + std::to_string(s.m);
    out += ", \"seed\": " + std::to_string(s.seed);
    out += ", \"reason\": \"" + json_escape(s.reason) + "\"";
    out += "}";
}

}  // namespace

std::string render_report_json(const SuiteResult& result, std::uint64_t seed, double rel_tol,
                               double abs_tol) {
    std::size_t passed = 0;
    for (const VerificationReport& r : result.reports) {
        if (r.pass) ++passed;
    }

    std::string out = "{\n";
    out += "  \"command\": \"verify\",\n";
    out += "  \"seed\": " + std::to_string(seed) + ",\n";
    out += "  \"rel_tol\": " + format_double(rel_tol) + ",\n";
    out += "  \"abs_tol\": " + format_double(abs_tol) + ",\n";
    out += "  \"summary\": {\"total\": " + std::to_string(result.reports.size()) +
           ", \"passed\": " + std::to_string(passed) +
           ", \"failed\": " + std::to_string(result.reports.size() - passed) +
           ", \"skipped\": " + std::to_string(result.skipped.size()) + "},\n";
    out += "  \"checks\": [";
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        append_report_row(out, result.reports[i]);
    }
    out += result.reports.empty() ? "],\n" : "\n  ],\n";
    out += "  \"skipped\": [";
    for (std::size_t i = 0; i < result.skipped.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        append_skip_row(out, result.skipped[i]);
    }
    out += result.skipped.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

std::string render_report_csv(const SuiteResult& result) {
    std::string out = "check,family,n,m,value,bound,margin,pass,seed\n";
    for (const VerificationReport& r : result.reports) {
        out += r.check + "," + r.family + "," + std::to_string(r.n) + "," + std::to_string(r.m) +
               "," + format_double(r.value) + "," + format_double(r.bound) + "," +
               format_double(r.margin) + "," + (r.pass ? "true" : "false") + "," +
               std::to_string(r.seed) + "\n";
    }
    return out;
}

std::string render_report_table(const SuiteResult& result) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-24s %-18s %5s %5s %14s %14s %12s %6s %10s\n", "check",
                  "family", "n", "m", "value", "bound", "margin", "pass", "runtime");
    out << line;
    for (const VerificationReport& r : result.reports) {
        std::snprintf(line, sizeof(line), "%-24s %-18s %5d %5d %14.6g %14.6g %12.3g %6s %9.3fs\n",
                      r.check.c_str(), r.family.c_str(), r.n, r.m, r.value, r.bound, r.margin,
                      r.pass ? "pass" : "FAIL", r.runtime_seconds);
        out << line;
    }
    for (const SkippedCheck& s : result.skipped) {
        std::snprintf(line, sizeof(line), "%-24s %-18s %5d %5d skipped: %s\n", s.check.c_str(),
                      s.family.c_str(), s.n, s.m, s.reason.c_str());
        out << line;
    }
    std::size_t passed = 0;
    for (const VerificationReport& r : result.reports) {
        if (r.pass) ++passed;
    }
    out << result.reports.size() << " checks, " << passed << " passed, "
        << (result.reports.size() - passed) << " failed, " << result.skipped.size()
        << " skipped\n";
    return out.str();
}

ParsedReport parse_report_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw report_io_error(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        ParsedReport parsed;
        parsed.seed = doc.at("seed").get<std::uint64_t>();
        parsed.rel_tol = doc.at("rel_tol").get<double>();
        parsed.abs_tol = doc.at("abs_tol").get<double>();
        for (const auto& row : doc.at("checks")) {
            VerificationReport r;
            r.check = row.at("check").get<std::string>();
            r.family = row.at("family").get<std::string>();
            r.n = row.at("n").get<int>();
            r.m = row.at("m").get<int>();
            r.value = row.at("value").get<double>();
            r.bound = row.at("bound").get<double>();
            r.margin = row.at("margin").get<double>();
            r.pass = row.at("pass").get<bool>();
            r.seed = row.at("seed").get<std::uint64_t>();
            r.direction = row.value("direction", "upper");
            r.rel_tol = row.value("rel_tol", 0.0);
            r.abs_tol = row.value("abs_tol", 0.0);
            r.note = row.value("note", "");
            parsed.result.reports.push_back(std::move(r));
        }
        for (const auto& row : doc.at("skipped")) {
            SkippedCheck s;
            s.check = row.at("check").get<std::string>();
            s.family = row.at("family").get<std::string>();
            s.n = row.at("n").get<int>();
            s.m = row.at("m").get<int>();
            s.seed = row.at("seed").get<std::uint64_t>();
            s.reason = row.at("reason").get<std::string>();
            parsed.result.skipped.push_back(std::move(s));
        }
        return parsed;
    } catch (const nlohmann::json::exception& e) {
        throw report_io_error(std::string("report JSON is missing required fields: ") + e.what());
    }
}

void write_text_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw report_io_error("cannot open '" + tmp + "' for writing");
        }
        out << content;
        if (!out.flush()) {
            throw report_io_error("write to '" + tmp + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw report_io_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

}  // namespace currents
