#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qulint/matching.hpp"
#include "qulint/problems.hpp"

namespace qulint {

/// Exact tp/denominator ratio; kept unreduced so numerator and denominator
/// stay readable as counts.
struct Rational {
    long long num = 0;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// Nearest integer percent, half away from zero, in exact integer math.
    int percent() const { return static_cast<int>((200 * num + den) / (2 * den)); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num * b.den == b.num * a.den;
    }
};

struct Metrics {
    std::optional<Rational> precision;
    std::optional<Rational> recall;
};

inline std::optional<Rational> precision(const MatchCounts& counts) {
    const long long den = counts.tp + counts.fp + counts.nw;
    if (den == 0) return std::nullopt;
    return Rational{counts.tp, den};
}

inline std::optional<Rational> recall(const MatchCounts& counts) {
    const long long den = counts.tp + counts.fn;
    if (den == 0) return std::nullopt;
    return Rational{counts.tp, den};
}

inline Metrics compute_metrics(const MatchCounts& counts) {
    return Metrics{precision(counts), recall(counts)};
}

struct ProblemRow {
    MatchCounts counts;
    Metrics metrics;
};

struct EvalReport {
    MatchPolicy policy;
    std::map<ProblemKind, ProblemRow> per_problem;
    ProblemRow overall;
};

/// Matches once over the full sets, then groups the outcome per problem kind.
/// The overall row is the micro-average: metrics over summed counts, never
/// averaged ratios.
inline EvalReport per_problem_report(const std::vector<Warning>& detected,
                                     const std::vector<AnnotatedWarning>& annotations,
                                     const MatchPolicy& policy) {
    EvalReport report;
    report.policy = policy;
    for (ProblemKind kind : kAllProblems) report.per_problem[kind] = {};

    MatchResult result = match_warnings(detected, annotations, policy);
    for (const MatchPair& pair : result.pairs) {
        const AnnotatedWarning& a = annotations[pair.annotation_index];
        MatchCounts& counts = report.per_problem[a.problem].counts;
        switch (a.label) {
            case AnnotationLabel::TP: ++counts.tp; break;
            case AnnotationLabel::FP: ++counts.fp; break;
            case AnnotationLabel::NW: ++counts.nw; break;
        }
    }
    for (std::size_t index : result.unmatched_annotations) {
        const AnnotatedWarning& a = annotations[index];
        if (a.label == AnnotationLabel::TP) ++report.per_problem[a.problem].counts.fn;
    }
    for (auto& [kind, row] : report.per_problem) {
        row.metrics = compute_metrics(row.counts);
        report.overall.counts += row.counts;
    }
    report.overall.metrics = compute_metrics(report.overall.counts);
    return report;
}

namespace detail {

inline nlohmann::json rational_to_json(const std::optional<Rational>& r) {
    if (!r) return nullptr;
    return nlohmann::json{{"num", r->num}, {"den", r->den}, {"percent", r->percent()}};
}

inline nlohmann::json row_to_json(const ProblemRow& row) {
    return nlohmann::json{
        {"tp", row.counts.tp},
        {"fp", row.counts.fp},
        {"nw", row.counts.nw},
        {"fn", row.counts.fn},
        {"precision", rational_to_json(row.metrics.precision)},
        {"recall", rational_to_json(row.metrics.recall)},
    };
}

inline std::string percent_cell(const std::optional<Rational>& r) {
    return r ? std::to_string(r->percent()) + "%" : "-";
}

}  // namespace detail

inline nlohmann::json eval_report_to_json(const EvalReport& report) {
    nlohmann::json per_problem = nlohmann::json::object();
    for (const auto& [kind, row] : report.per_problem) {
        per_problem[std::string(problem_name(kind))] = detail::row_to_json(row);
    }
    return nlohmann::json{
        {"policy", report.policy.name()},
        {"per_problem", per_problem},
        {"overall", detail::row_to_json(report.overall)},
    };
}

inline std::string eval_report_to_text(const EvalReport& report) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"problem", "tp", "fp", "nw", "fn", "precision", "recall"});
    auto add_row = [&rows](const std::string& name, const ProblemRow& row) {
        rows.push_back({name, std::to_string(row.counts.tp), std::to_string(row.counts.fp),
                        std::to_string(row.counts.nw), std::to_string(row.counts.fn),
                        detail::percent_cell(row.metrics.precision),
                        detail::percent_cell(row.metrics.recall)});
    };
    for (const auto& [kind, row] : report.per_problem) {
        add_row(std::string(problem_name(kind)), row);
    }
    add_row("overall", report.overall);

    std::vector<std::size_t> widths(rows[0].size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out = "match policy: " + report.policy.name() + "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            out += row[c];
            out.append(widths[c] - row[c].size(), ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

}  // namespace qulint
