#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qulint/problems.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

enum class AnnotationLabel { TP, FP, NW };

inline constexpr std::string_view annotation_label_name(AnnotationLabel label) {
    switch (label) {
        case AnnotationLabel::TP: return "TP";
        case AnnotationLabel::FP: return "FP";
        case AnnotationLabel::NW: return "NW";
    }
    return "";
}

struct AnnotatedWarning {
    std::string file;
    ProblemKind problem = ProblemKind::DoubleMeas;
    int line = 0;
    AnnotationLabel label = AnnotationLabel::TP;

    friend bool operator==(const AnnotatedWarning& a, const AnnotatedWarning& b) {
        return a.file == b.file && a.problem == b.problem && a.line == b.line &&
               a.label == b.label;
    }
};

class FormatError : public std::runtime_error {
public:
    FormatError(int row, const std::string& reason)
        : std::runtime_error("row " + std::to_string(row) + ": " + reason),
          row_(row),
          reason_(reason) {}

    int row() const { return row_; }
    const std::string& reason() const { return reason_; }

private:
    int row_;
    std::string reason_;
};

class DuplicateAnnotation : public FormatError {
public:
    DuplicateAnnotation(int row, const std::string& key)
        : FormatError(row, "duplicate annotation for " + key) {}
};

namespace detail {

inline std::vector<std::string> split_csv_row(std::string_view row) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        std::size_t comma = row.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.emplace_back(trim(row.substr(begin)));
            return fields;
        }
        fields.emplace_back(trim(row.substr(begin, comma - begin)));
        begin = comma + 1;
    }
}

inline AnnotationLabel parse_label(const std::string& text, int row) {
    if (text == "TP") return AnnotationLabel::TP;
    if (text == "FP") return AnnotationLabel::FP;
    if (text == "NW") return AnnotationLabel::NW;
    throw FormatError(row, "unknown label '" + text + "' (expected TP, FP, or NW)");
}

}  // namespace detail

/// Parses the `file,problem,line,label` annotation CSV. Rows are 1-based
/// including the header; structural problems are hard errors.
inline std::vector<AnnotatedWarning> parse_annotations(const std::string& text) {
    std::vector<AnnotatedWarning> annotations;
    std::set<std::tuple<std::string, ProblemKind, int>> seen;
    int row = 0;
    bool header_seen = false;
    for (std::string_view raw_line : split_lines(text)) {
        ++row;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.remove_suffix(1);
        if (trim(raw_line).empty()) continue;
        std::vector<std::string> fields = detail::split_csv_row(raw_line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"file", "problem", "line", "label"}) {
                throw FormatError(row, "expected header 'file,problem,line,label'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw FormatError(row, "expected 4 fields, got " + std::to_string(fields.size()));
        }
        AnnotatedWarning a;
        a.file = fields[0];
        if (a.file.empty()) throw FormatError(row, "empty file field");
        if (auto kind = problem_from_name(fields[1])) {
            a.problem = *kind;
        } else {
            throw FormatError(row, "unknown problem '" + fields[1] + "'");
        }
        try {
            std::size_t used = 0;
            a.line = std::stoi(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw FormatError(row, "invalid line number '" + fields[2] + "'");
        }
        if (a.line < 1) throw FormatError(row, "line number must be positive");
        a.label = detail::parse_label(fields[3], row);

        auto key = std::make_tuple(a.file, a.problem, a.line);
        if (!seen.insert(key).second) {
            throw DuplicateAnnotation(row, a.file + ":" + std::to_string(a.line) + ":" +
                                               std::string(problem_name(a.problem)));
        }
        annotations.push_back(std::move(a));
    }
    if (!header_seen) throw FormatError(1, "missing header 'file,problem,line,label'");
    return annotations;
}

inline std::vector<AnnotatedWarning> load_annotations(const std::string& path) {
    return parse_annotations(read_file(path));
}

}  // namespace qulint
