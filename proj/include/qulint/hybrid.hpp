#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "qulint/problems.hpp"
#include "qulint/report.hpp"

namespace qulint {

inline constexpr int kHybridLineWindow = 2;

/// Cross-references the two engines' findings. Warnings agreeing on
/// (file, problem) with lines within kHybridLineWindow fuse into a single
/// rank-1 warning: the static line and snippet are authoritative, the LLM
/// explanation is attached. Unfused static warnings keep rank 2, unfused LLM
/// warnings rank 3. Every input warning is represented exactly once.
inline std::vector<Warning> hybrid_merge(const std::vector<Warning>& static_warnings,
                                         const std::vector<Warning>& llm_warnings) {
    struct Candidate {
        std::size_t s = 0;
        std::size_t l = 0;
        int distance = 0;
    };
    std::vector<Candidate> candidates;
    for (std::size_t s = 0; s < static_warnings.size(); ++s) {
        for (std::size_t l = 0; l < llm_warnings.size(); ++l) {
            if (static_warnings[s].file != llm_warnings[l].file) continue;
            if (static_warnings[s].problem != llm_warnings[l].problem) continue;
            const int distance = std::abs(static_warnings[s].line - llm_warnings[l].line);
            if (distance > kHybridLineWindow) continue;
            candidates.push_back({s, l, distance});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&static_warnings](const Candidate& x, const Candidate& y) {
                  if (x.distance != y.distance) return x.distance < y.distance;
                  if (static_warnings[x.s].file != static_warnings[y.s].file) {
                      return static_warnings[x.s].file < static_warnings[y.s].file;
                  }
                  if (static_warnings[x.s].line != static_warnings[y.s].line) {
                      return static_warnings[x.s].line < static_warnings[y.s].line;
                  }
                  if (x.s != y.s) return x.s < y.s;
                  return x.l < y.l;
              });

    std::vector<bool> static_used(static_warnings.size(), false);
    std::vector<bool> llm_used(llm_warnings.size(), false);
    std::vector<Warning> merged;
    for (const Candidate& c : candidates) {
        if (static_used[c.s] || llm_used[c.l]) continue;
        static_used[c.s] = true;
        llm_used[c.l] = true;
        Warning fused = static_warnings[c.s];
        fused.rank = 1;
        if (!llm_warnings[c.l].explanation.empty() &&
            llm_warnings[c.l].explanation != fused.explanation) {
            fused.explanation += " (LLM: " + llm_warnings[c.l].explanation + ")";
        }
        merged.push_back(std::move(fused));
    }
    for (std::size_t s = 0; s < static_warnings.size(); ++s) {
        if (static_used[s]) continue;
        Warning w = static_warnings[s];
        w.rank = 2;
        merged.push_back(std::move(w));
    }
    for (std::size_t l = 0; l < llm_warnings.size(); ++l) {
        if (llm_used[l]) continue;
        Warning w = llm_warnings[l];
        w.rank = 3;
        merged.push_back(std::move(w));
    }
    sort_warnings_for_report(merged);
    return merged;
}

}  // namespace qulint
