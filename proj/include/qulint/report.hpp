#pragma once

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qulint/problems.hpp"
#include "qulint/version.hpp"

namespace qulint {

enum class LintMode { Static, Llm, Hybrid };

inline std::string lint_mode_name(LintMode mode) {
    switch (mode) {
        case LintMode::Static: return "static";
        case LintMode::Llm: return "llm";
        case LintMode::Hybrid: return "hybrid";
    }
    return "";
}

inline LintMode lint_mode_from_name(const std::string& name) {
    if (name == "static") return LintMode::Static;
    if (name == "llm") return LintMode::Llm;
    if (name == "hybrid") return LintMode::Hybrid;
    throw std::invalid_argument("unknown mode '" + name +
                                "' (expected static, llm, or hybrid)");
}

struct LintStats {
    std::size_t files_total = 0;
    std::size_t files_skipped = 0;
    std::chrono::milliseconds duration{0};
};

struct LintReport {
    std::string tool_version = kToolVersion;
    LintMode mode = LintMode::Static;
    std::vector<Warning> warnings;
    std::vector<SkipDiagnostic> skipped;
    LintStats stats;
};

inline void sort_warnings_for_report(std::vector<Warning>& warnings) {
    std::sort(warnings.begin(), warnings.end(), [](const Warning& a, const Warning& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        if (a.file != b.file) return a.file < b.file;
        if (a.line != b.line) return a.line < b.line;
        if (a.problem != b.problem) return problem_name(a.problem) < problem_name(b.problem);
        if (a.snippet != b.snippet) return a.snippet < b.snippet;
        return a.explanation < b.explanation;
    });
}

inline std::size_t count_skipped_files(const std::vector<SkipDiagnostic>& skipped) {
    std::set<std::string> files;
    for (const SkipDiagnostic& skip : skipped) files.insert(skip.file);
    return files.size();
}

/// Reason string shown to users; per-problem skips carry the problem name.
inline std::string skip_reason_text(const SkipDiagnostic& skip) {
    if (skip.kind) return std::string(problem_name(*skip.kind)) + ": " + skip.reason;
    return skip.reason;
}

inline LintReport make_report(LintMode mode, std::vector<Warning> warnings,
                              std::vector<SkipDiagnostic> skipped, std::size_t files_total,
                              std::chrono::milliseconds duration) {
    LintReport report;
    report.mode = mode;
    report.warnings = std::move(warnings);
    report.skipped = std::move(skipped);
    sort_warnings_for_report(report.warnings);
    std::sort(report.skipped.begin(), report.skipped.end(),
              [](const SkipDiagnostic& a, const SkipDiagnostic& b) {
                  if (a.file != b.file) return a.file < b.file;
                  return skip_reason_text(a) < skip_reason_text(b);
              });
    report.stats.files_total = files_total;
    report.stats.files_skipped = count_skipped_files(report.skipped);
    report.stats.duration = duration;
    return report;
}

/// Canonical machine-readable form. Duration is deliberately omitted so that
/// repeated runs over identical inputs serialize byte-identically.
inline nlohmann::json report_to_json(const LintReport& report) {
    nlohmann::json warnings = nlohmann::json::array();
    for (const Warning& w : report.warnings) {
        warnings.push_back({{"file", w.file},
                            {"problem", problem_name(w.problem)},
                            {"line", w.line},
                            {"snippet", w.snippet},
                            {"explanation", w.explanation},
                            {"source", warning_source_name(w.source)},
                            {"rank", w.rank}});
    }
    nlohmann::json skipped = nlohmann::json::array();
    for (const SkipDiagnostic& skip : report.skipped) {
        skipped.push_back({{"file", skip.file}, {"reason", skip_reason_text(skip)}});
    }
    return {{"version", report.tool_version},
            {"mode", lint_mode_name(report.mode)},
            {"warnings", std::move(warnings)},
            {"skipped", std::move(skipped)},
            {"stats",
             {{"files_total", report.stats.files_total},
              {"files_skipped", report.stats.files_skipped}}}};
}

inline LintReport report_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("warnings") || !j["warnings"].is_array()) {
        throw std::invalid_argument("not a lint report: missing warnings array");
    }
    LintReport report;
    report.tool_version = j.value("version", std::string{kToolVersion});
    report.mode = lint_mode_from_name(j.value("mode", "static"));
    for (const nlohmann::json& w : j["warnings"]) {
        Warning warning;
        warning.file = w.at("file").get<std::string>();
        warning.problem = require_problem(w.at("problem").get<std::string>());
        warning.line = w.at("line").get<int>();
        warning.snippet = w.value("snippet", "");
        warning.explanation = w.value("explanation", "");
        warning.source =
            w.value("source", "static") == "llm" ? WarningSource::Llm : WarningSource::Static;
        warning.rank = w.value("rank", 0);
        report.warnings.push_back(std::move(warning));
    }
    if (j.contains("skipped")) {
        for (const nlohmann::json& s : j["skipped"]) {
            report.skipped.push_back(
                {s.at("file").get<std::string>(), std::nullopt, s.value("reason", "")});
        }
    }
    if (j.contains("stats")) {
        report.stats.files_total = j["stats"].value("files_total", std::size_t{0});
        report.stats.files_skipped = j["stats"].value("files_skipped", std::size_t{0});
    }
    return report;
}

inline std::string report_to_text(const LintReport& report) {
    std::string out;
    for (const Warning& w : report.warnings) {
        out += w.file + ":" + std::to_string(w.line) + ": [" +
               std::string(problem_name(w.problem)) + "] " + w.snippet + "\n";
        if (!w.explanation.empty()) out += "    " + w.explanation + "\n";
        if (w.rank > 0) {
            out += "    rank " + std::to_string(w.rank) + ", source " +
                   std::string(warning_source_name(w.source)) + "\n";
        }
    }
    for (const SkipDiagnostic& skip : report.skipped) {
        out += "skipped: " + skip.file + ": " + skip_reason_text(skip) + "\n";
    }
    out += std::to_string(report.warnings.size()) + " warning(s), " +
           std::to_string(report.stats.files_total) + " file(s) scanned, " +
           std::to_string(report.stats.files_skipped) + " file(s) skipped";
    out += " (" + std::to_string(report.stats.duration.count()) + " ms)\n";
    return out;
}

/// SARIF 2.1.0 log with one run; rules carry the catalog summaries so CI
/// viewers can show per-problem documentation.
inline nlohmann::json report_to_sarif(const LintReport& report) {
    nlohmann::json rules = nlohmann::json::array();
    for (ProblemKind kind : kAllProblems) {
        rules.push_back({{"id", problem_name(kind)},
                         {"shortDescription", {{"text", problem_summary(kind)}}}});
    }
    nlohmann::json results = nlohmann::json::array();
    for (const Warning& w : report.warnings) {
        results.push_back(
            {{"ruleId", problem_name(w.problem)},
             {"level", "warning"},
             {"message", {{"text", w.explanation.empty() ? w.snippet : w.explanation}}},
             {"locations",
              nlohmann::json::array(
                  {{{"physicalLocation",
                     {{"artifactLocation", {{"uri", w.file}}},
                      {"region",
                       {{"startLine", w.line}, {"snippet", {{"text", w.snippet}}}}}}}}})},
             {"properties",
              {{"rank", w.rank}, {"source", warning_source_name(w.source)}}}});
    }
    return {{"$schema",
             "https://raw.githubusercontent.com/oasis-tcs/sarif-spec/master/Schemata/"
             "sarif-schema-2.1.0.json"},
            {"version", "2.1.0"},
            {"runs",
             nlohmann::json::array(
                 {{{"tool",
                    {{"driver",
                      {{"name", kToolName},
                       {"version", report.tool_version},
                       {"rules", std::move(rules)}}}}},
                   {"results", std::move(results)}}})}};
}

}  // namespace qulint
