#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "qulint/evalset.hpp"
#include "qulint/problems.hpp"

namespace qulint {

/// Location test for pairing a detected warning with an annotation. File and
/// problem must always agree; the policy decides how lines may differ.
struct MatchPolicy {
    enum class Kind { ExactLine, Window, FileAndProblem };
    Kind kind = Kind::ExactLine;
    int window_lines = 0;

    static MatchPolicy exact_line() { return {Kind::ExactLine, 0}; }
    static MatchPolicy window(int n) { return {Kind::Window, n}; }
    static MatchPolicy file_and_problem() { return {Kind::FileAndProblem, 0}; }

    bool lines_match(int detected, int annotated) const {
        switch (kind) {
            case Kind::ExactLine: return detected == annotated;
            case Kind::Window: return std::abs(detected - annotated) <= window_lines;
            case Kind::FileAndProblem: return true;
        }
        return false;
    }

    std::string name() const {
        switch (kind) {
            case Kind::ExactLine: return "ExactLine";
            case Kind::Window: return "Window(" + std::to_string(window_lines) + ")";
            case Kind::FileAndProblem: return "FileAndProblem";
        }
        return "";
    }
};

inline MatchPolicy parse_match_policy(const std::string& text) {
    if (text == "exact") return MatchPolicy::exact_line();
    if (text == "file") return MatchPolicy::file_and_problem();
    if (text.rfind("window:", 0) == 0) {
        const std::string digits = text.substr(7);
        if (!digits.empty() &&
            std::all_of(digits.begin(), digits.end(), [](unsigned char c) {
                return std::isdigit(c) != 0;
            })) {
            return MatchPolicy::window(std::stoi(digits));
        }
    }
    throw std::invalid_argument("unknown match policy '" + text +
                                "' (expected exact, file, or window:N)");
}

/// True when the two paths are equal or one ends with "/" + the other, so a
/// report path may carry a directory prefix absent from the annotation file.
inline bool paths_match(const std::string& a, const std::string& b) {
    if (a == b) return true;
    const std::string& longer = a.size() > b.size() ? a : b;
    const std::string& shorter = a.size() > b.size() ? b : a;
    return longer.size() > shorter.size() + 1 &&
           longer.compare(longer.size() - shorter.size(), shorter.size(), shorter) == 0 &&
           longer[longer.size() - shorter.size() - 1] == '/';
}

struct MatchCounts {
    int tp = 0;
    int fp = 0;
    int nw = 0;
    int fn = 0;

    MatchCounts& operator+=(const MatchCounts& o) {
        tp += o.tp;
        fp += o.fp;
        nw += o.nw;
        fn += o.fn;
        return *this;
    }
};

struct MatchPair {
    std::size_t detected_index = 0;
    std::size_t annotation_index = 0;
    int distance = 0;
};

struct MatchResult {
    MatchCounts counts;
    std::vector<MatchPair> pairs;                    // one-to-one matches
    std::vector<std::size_t> unmatched_detected;     // indexes into detected
    std::vector<std::size_t> unmatched_annotations;  // indexes into annotations
};

/// Greedy one-to-one matching over all policy-admissible pairs, smallest line
/// distance first, ties broken toward the earlier annotation (then earlier
/// detected warning). Exact-line pairs therefore always win before any
/// widened pair, which makes recall monotone in the policy ordering
/// ExactLine -> Window(n) -> FileAndProblem.
inline MatchResult match_warnings(const std::vector<Warning>& detected,
                                  const std::vector<AnnotatedWarning>& annotations,
                                  const MatchPolicy& policy) {
    std::vector<MatchPair> candidates;
    for (std::size_t d = 0; d < detected.size(); ++d) {
        for (std::size_t a = 0; a < annotations.size(); ++a) {
            if (!paths_match(detected[d].file, annotations[a].file)) continue;
            if (detected[d].problem != annotations[a].problem) continue;
            if (!policy.lines_match(detected[d].line, annotations[a].line)) continue;
            candidates.push_back({d, a, std::abs(detected[d].line - annotations[a].line)});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&annotations](const MatchPair& x, const MatchPair& y) {
                  if (x.distance != y.distance) return x.distance < y.distance;
                  if (annotations[x.annotation_index].line !=
                      annotations[y.annotation_index].line) {
                      return annotations[x.annotation_index].line <
                             annotations[y.annotation_index].line;
                  }
                  if (x.annotation_index != y.annotation_index) {
                      return x.annotation_index < y.annotation_index;
                  }
                  return x.detected_index < y.detected_index;
              });

    MatchResult result;
    std::vector<bool> detected_used(detected.size(), false);
    std::vector<bool> annotation_used(annotations.size(), false);
    for (const MatchPair& pair : candidates) {
        if (detected_used[pair.detected_index] || annotation_used[pair.annotation_index]) {
            continue;
        }
        detected_used[pair.detected_index] = true;
        annotation_used[pair.annotation_index] = true;
        result.pairs.push_back(pair);
        switch (annotations[pair.annotation_index].label) {
            case AnnotationLabel::TP: ++result.counts.tp; break;
            case AnnotationLabel::FP: ++result.counts.fp; break;
            case AnnotationLabel::NW: ++result.counts.nw; break;
        }
    }
    for (std::size_t d = 0; d < detected.size(); ++d) {
        if (!detected_used[d]) result.unmatched_detected.push_back(d);
    }
    for (std::size_t a = 0; a < annotations.size(); ++a) {
        if (!annotation_used[a]) {
            result.unmatched_annotations.push_back(a);
            if (annotations[a].label == AnnotationLabel::TP) ++result.counts.fn;
        }
    }
    return result;
}

}  // namespace qulint
