#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qulint/problems.hpp"
#include "qulint/srcmodel.hpp"

namespace qulint {

class MalformedResponse : public std::runtime_error {
public:
    explicit MalformedResponse(const std::string& reason)
        : std::runtime_error("malformed response: " + reason), reason_(reason) {}

    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

namespace detail {

/// First balanced, parsable {...} object in raw, or nullopt. Braces inside
/// JSON strings are recognized; unparsable candidates are skipped so prose
/// containing a stray '{' does not shadow the real object.
inline std::optional<nlohmann::json> first_json_object(const std::string& raw) {
    std::size_t start = 0;
    while ((start = raw.find('{', start)) != std::string::npos) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < raw.size(); ++i) {
            const char c = raw[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    nlohmann::json parsed = nlohmann::json::parse(
                        raw.substr(start, i - start + 1), nullptr, false);
                    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                    break;
                }
            }
        }
        ++start;
    }
    return std::nullopt;
}

inline long long line_number_of(const nlohmann::json& v) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
            try {
                return std::stoll(s);
            } catch (const std::exception&) {
            }
        }
    }
    throw MalformedResponse("line entry is not an integer");
}

}  // namespace detail

struct ParsedResponse {
    std::vector<Warning> warnings;
    std::vector<std::string> notes;  // dropped entries, e.g. out-of-range lines
};

/// Validates a raw completion against the Fig. 2 output schema and zips the
/// parallel arrays into Llm warnings. Lines outside the file are dropped with
/// a note; structural violations raise MalformedResponse.
inline ParsedResponse parse_llm_response(const std::string& raw, ProblemKind kind,
                                         const SourceModule& module) {
    auto object = detail::first_json_object(raw);
    if (!object) throw MalformedResponse("no JSON object found");
    const nlohmann::json& o = *object;

    if (o.contains("problem")) {
        if (!o["problem"].is_string() ||
            o["problem"].get<std::string>() != problem_name(kind)) {
            throw MalformedResponse("problem field does not match the queried kind");
        }
    }

    auto array_field = [&o](const char* name) -> nlohmann::json {
        if (!o.contains(name) || o[name].is_null()) return nlohmann::json::array();
        if (!o[name].is_array()) {
            throw MalformedResponse(std::string(name) + " is not an array");
        }
        return o[name];
    };
    const nlohmann::json snippets = array_field("snippets");
    const nlohmann::json lines = array_field("lines");
    const nlohmann::json explanations = array_field("explanations");

    if (snippets.size() != lines.size() || explanations.size() != lines.size()) {
        throw MalformedResponse("snippets, lines, and explanations differ in length");
    }

    ParsedResponse result;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const long long line = detail::line_number_of(lines[i]);
        if (line < 1 || line > module.line_count) {
            result.notes.push_back("dropped " + std::string(problem_name(kind)) +
                                   " finding at out-of-range line " + std::to_string(line));
            continue;
        }
        Warning w;
        w.file = module.path;
        w.problem = kind;
        w.line = static_cast<int>(line);
        w.snippet = snippets[i].is_string() ? snippets[i].get<std::string>()
                                            : snippets[i].dump();
        w.explanation = explanations[i].is_string() ? explanations[i].get<std::string>()
                                                    : explanations[i].dump();
        w.source = WarningSource::Llm;
        result.warnings.push_back(std::move(w));
    }
    return result;
}

}  // namespace qulint
