#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qulint/backend.hpp"
#include "qulint/llm_response.hpp"
#include "qulint/problems.hpp"
#include "qulint/promptgen.hpp"
#include "qulint/prompts.hpp"
#include "qulint/srcmodel.hpp"

namespace qulint {

struct LlmOptions {
    std::string model_id = "gpt-3.5-turbo";
    double temperature = 0.0;
    int token_limit = kDefaultTokenLimit;
};

struct LlmLintResult {
    std::vector<Warning> warnings;
    std::vector<SkipDiagnostic> skipped;
};

/// Queries the backend once per enabled kind, never batching kinds. Each
/// kind's token-limit, transport, or parse failure becomes a SkipDiagnostic
/// and the remaining kinds still run.
inline LlmLintResult lint_file_llm(const SourceModule& module,
                                   const std::set<ProblemKind>& kinds,
                                   CompletionBackend& client,
                                   const PromptCatalog& catalog,
                                   const LlmOptions& options = {}) {
    LlmLintResult result;
    for (ProblemKind kind : kAllProblems) {
        if (kinds.find(kind) == kinds.end()) continue;
        std::string prompt;
        try {
            PromptInstance instance = build_prompt(kind, module, catalog, options.token_limit);
            prompt = std::move(instance.text);
        } catch (const TokenLimitExceeded& e) {
            result.skipped.push_back(
                {module.path, kind,
                 "TokenLimit: estimated " + std::to_string(e.estimated()) +
                     " tokens exceeds limit " + std::to_string(e.limit())});
            continue;
        }

        CompletionRequest request;
        request.model_id = options.model_id;
        request.temperature = options.temperature;
        request.messages = {{"user", std::move(prompt)}};

        std::string text;
        try {
            text = client.complete(request).text;
        } catch (const TokenLimitError& e) {
            result.skipped.push_back({module.path, kind, std::string("TokenLimit: ") + e.what()});
            continue;
        } catch (const CassetteMiss& e) {
            result.skipped.push_back({module.path, kind, std::string("replay miss: ") + e.what()});
            continue;
        } catch (const TransportError& e) {
            result.skipped.push_back(
                {module.path, kind, std::string("transport failure: ") + e.what()});
            continue;
        }

        try {
            ParsedResponse parsed = parse_llm_response(text, kind, module);
            for (auto& w : parsed.warnings) result.warnings.push_back(std::move(w));
            for (auto& note : parsed.notes) {
                result.skipped.push_back({module.path, kind, std::move(note)});
            }
        } catch (const MalformedResponse& e) {
            result.skipped.push_back(
                {module.path, kind, std::string("malformed response: ") + e.what()});
        }
    }
    std::stable_sort(result.warnings.begin(), result.warnings.end(),
                     [](const Warning& a, const Warning& b) {
                         if (a.line != b.line) return a.line < b.line;
                         return problem_name(a.problem) < problem_name(b.problem);
                     });
    return result;
}

}  // namespace qulint
