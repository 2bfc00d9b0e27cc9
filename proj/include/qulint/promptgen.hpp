#pragma once

#include <stdexcept>
#include <string>

#include "qulint/problems.hpp"
#include "qulint/prompts.hpp"
#include "qulint/srcmodel.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

/// Context-window budget the pipeline assumes per request.
inline constexpr int kDefaultTokenLimit = 16385;

class TokenLimitExceeded : public std::runtime_error {
public:
    TokenLimitExceeded(int estimated, int limit)
        : std::runtime_error("estimated " + std::to_string(estimated) +
                             " tokens exceeds the limit of " + std::to_string(limit)),
          estimated_(estimated),
          limit_(limit) {}

    int estimated() const { return estimated_; }
    int limit() const { return limit_; }

private:
    int estimated_;
    int limit_;
};

struct PromptInstance {
    ProblemKind kind = ProblemKind::DoubleMeas;
    std::string text;
    int estimated_tokens = 0;
};

namespace detail {

// The template supplies the newline after each placeholder; values ending in
// one would otherwise leave stray blank lines.
inline std::string drop_final_newline(std::string text) {
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

}  // namespace detail

/// Instantiates the template for one problem kind. The description is
/// substituted before the ?problem? and ?code? parameters so that analyzed
/// source containing placeholder-like text is inserted untouched.
inline PromptInstance build_prompt(ProblemKind kind, const SourceModule& module,
                                   const PromptCatalog& catalog,
                                   int token_limit = kDefaultTokenLimit) {
    std::string text = catalog.template_text();
    text = replace_all(std::move(text), "?problem_description?",
                       detail::drop_final_newline(catalog.description(kind).full_text));
    text = replace_all(std::move(text), "?problem?", problem_name(kind));
    text = replace_all(std::move(text), "?code?",
                       detail::drop_final_newline(annotate_lines(module.text)));

    PromptInstance instance;
    instance.kind = kind;
    instance.estimated_tokens = estimate_tokens(text);
    instance.text = std::move(text);
    if (instance.estimated_tokens > token_limit) {
        throw TokenLimitExceeded(instance.estimated_tokens, token_limit);
    }
    return instance;
}

}  // namespace qulint
