#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qulint/cassette.hpp"
#include "qulint/checks.hpp"
#include "qulint/extract.hpp"
#include "qulint/http_backend.hpp"
#include "qulint/hybrid.hpp"
#include "qulint/llm_linter.hpp"
#include "qulint/parser.hpp"
#include "qulint/report.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

enum class ReportFormat { Text, Json, Sarif };

inline ReportFormat report_format_from_name(const std::string& name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "json") return ReportFormat::Json;
    if (name == "sarif") return ReportFormat::Sarif;
    throw std::invalid_argument("unknown format '" + name +
                                "' (expected text, json, or sarif)");
}

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    LintMode mode = LintMode::Static;
    std::set<ProblemKind> checks{kAllProblems.begin(), kAllProblems.end()};
    ReportFormat format = ReportFormat::Text;
    std::string llm_endpoint;
    std::string llm_model = "gpt-3.5-turbo";
    int token_limit = kDefaultTokenLimit;
    std::string cassette;
    bool record = false;
    int jobs = 1;
    std::string out;
};

inline std::set<ProblemKind> parse_check_list(const std::string& csv) {
    std::set<ProblemKind> checks;
    std::size_t begin = 0;
    while (begin <= csv.size()) {
        std::size_t end = csv.find(',', begin);
        if (end == std::string::npos) end = csv.size();
        const std::string name{trim(csv.substr(begin, end - begin))};
        if (!name.empty()) checks.insert(require_problem(name));
        begin = end + 1;
    }
    if (checks.empty()) throw std::invalid_argument("empty check list");
    return checks;
}

namespace detail {

inline int parse_positive_int(const std::string& text, const std::string& what) {
    std::size_t consumed = 0;
    int value = 0;
    try {
        value = std::stoi(text, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + " must be a positive integer, got '" + text + "'");
    }
    if (consumed != text.size() || value < 1) {
        throw std::invalid_argument(what + " must be a positive integer, got '" + text + "'");
    }
    return value;
}

inline bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw std::invalid_argument(what + " must be true or false, got '" + text + "'");
}

}  // namespace detail

/// Applies one key/value setting; keys mirror the lint command's flags.
inline void apply_config_entry(RunConfig& config, const std::string& key,
                               const std::string& value) {
    if (key == "mode") {
        config.mode = lint_mode_from_name(value);
    } else if (key == "checks") {
        config.checks = parse_check_list(value);
    } else if (key == "format") {
        config.format = report_format_from_name(value);
    } else if (key == "llm-endpoint") {
        config.llm_endpoint = value;
    } else if (key == "llm-model") {
        config.llm_model = value;
    } else if (key == "token-limit") {
        config.token_limit = detail::parse_positive_int(value, "token-limit");
    } else if (key == "cassette") {
        config.cassette = value;
    } else if (key == "record") {
        config.record = detail::parse_bool(value, "record");
    } else if (key == "jobs") {
        config.jobs = detail::parse_positive_int(value, "jobs");
    } else if (key == "out") {
        config.out = value;
    } else {
        throw std::invalid_argument("unknown key '" + key + "'");
    }
}

inline RunConfig parse_config_text(const std::string& text, RunConfig base = {}) {
    int line_number = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_number;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("qulint.conf line " + std::to_string(line_number) +
                              ": expected key = value");
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        try {
            apply_config_entry(base, key, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("qulint.conf line " + std::to_string(line_number) + ": " +
                              e.what());
        }
    }
    return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
    return parse_config_text(read_file(path), std::move(base));
}

/// Expands files and directories into the ordered list of Python sources to
/// lint. Missing paths become skip entries rather than aborting the run.
inline std::vector<std::string> expand_paths(const std::vector<std::string>& paths,
                                             std::vector<SkipDiagnostic>& skipped) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    std::set<std::string> seen;
    auto push = [&files, &seen](std::string path) {
        if (seen.insert(path).second) files.push_back(std::move(path));
    };
    for (const std::string& path : paths) {
        std::error_code ec;
        const fs::file_status status = fs::status(path, ec);
        if (ec || status.type() == fs::file_type::not_found) {
            skipped.push_back({path, std::nullopt, "path does not exist"});
            continue;
        }
        if (fs::is_directory(status)) {
            std::vector<std::string> batch;
            for (const fs::directory_entry& entry :
                 fs::recursive_directory_iterator(path, ec)) {
                if (entry.is_regular_file() && entry.path().extension() == ".py") {
                    batch.push_back(entry.path().string());
                }
            }
            std::sort(batch.begin(), batch.end());
            for (std::string& file : batch) push(std::move(file));
        } else {
            push(path);
        }
    }
    return files;
}

struct FileOutcome {
    std::vector<Warning> static_warnings;
    std::vector<Warning> llm_warnings;
    std::vector<SkipDiagnostic> skipped;
    bool failed = false;
};

inline FileOutcome process_file(const std::string& path, const RunConfig& config,
                                const PromptCatalog& catalog, CompletionBackend* backend) {
    FileOutcome outcome;
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        outcome.skipped.push_back({path, std::nullopt, std::string("read failure: ") + e.what()});
        outcome.failed = true;
        return outcome;
    }
    SourceModule module;
    try {
        module = parse_source(path, text);
    } catch (const ParseError& e) {
        outcome.skipped.push_back({path, std::nullopt, std::string("parse error: ") + e.what()});
        outcome.failed = true;
        return outcome;
    }
    if (config.mode != LintMode::Llm) {
        outcome.static_warnings = run_all_checks(extract_circuits(module), config.checks);
    }
    if (config.mode != LintMode::Static && backend != nullptr) {
        LlmOptions options;
        options.model_id = config.llm_model;
        options.token_limit = config.token_limit;
        LlmLintResult result = lint_file_llm(module, config.checks, *backend, catalog, options);
        outcome.llm_warnings = std::move(result.warnings);
        outcome.skipped.insert(outcome.skipped.end(),
                               std::make_move_iterator(result.skipped.begin()),
                               std::make_move_iterator(result.skipped.end()));
    }
    return outcome;
}

struct RunOutcome {
    LintReport report;
    int exit_code = 0;
};

/// Lints the expanded file set, fanning files out over config.jobs worker
/// threads and reducing per-file results in deterministic input order.
inline RunOutcome run_lint(const std::vector<std::string>& paths, const RunConfig& config,
                           CompletionBackend* backend = nullptr) {
    const auto start = std::chrono::steady_clock::now();
    if (config.mode != LintMode::Static && backend == nullptr) {
        throw ConfigError("llm and hybrid modes require a completion backend");
    }

    std::vector<SkipDiagnostic> skipped;
    const std::vector<std::string> files = expand_paths(paths, skipped);
    const PromptCatalog catalog = PromptCatalog::builtin();

    std::vector<FileOutcome> outcomes(files.size());
    const int jobs =
        std::max(1, std::min<int>(config.jobs, static_cast<int>(files.size())));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < files.size(); ++i) {
            outcomes[i] = process_file(files[i], config, catalog, backend);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int j = 0; j < jobs; ++j) {
            workers.emplace_back([&files, &outcomes, &next, &config, &catalog, backend] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= files.size()) break;
                    outcomes[i] = process_file(files[i], config, catalog, backend);
                }
            });
        }
        for (std::thread& worker : workers) worker.join();
    }

    std::vector<Warning> static_warnings;
    std::vector<Warning> llm_warnings;
    std::size_t failed_files = 0;
    for (FileOutcome& outcome : outcomes) {
        static_warnings.insert(static_warnings.end(),
                               std::make_move_iterator(outcome.static_warnings.begin()),
                               std::make_move_iterator(outcome.static_warnings.end()));
        llm_warnings.insert(llm_warnings.end(),
                            std::make_move_iterator(outcome.llm_warnings.begin()),
                            std::make_move_iterator(outcome.llm_warnings.end()));
        skipped.insert(skipped.end(), std::make_move_iterator(outcome.skipped.begin()),
                       std::make_move_iterator(outcome.skipped.end()));
        if (outcome.failed) ++failed_files;
    }

    std::vector<Warning> warnings;
    switch (config.mode) {
        case LintMode::Static: warnings = std::move(static_warnings); break;
        case LintMode::Llm: warnings = std::move(llm_warnings); break;
        case LintMode::Hybrid: warnings = hybrid_merge(static_warnings, llm_warnings); break;
    }

    const auto duration = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    RunOutcome outcome;
    outcome.report =
        make_report(config.mode, std::move(warnings), std::move(skipped), files.size(), duration);
    const bool all_inputs_failed =
        files.empty() ? !outcome.report.skipped.empty() : failed_files == files.size();
    if (all_inputs_failed && !outcome.report.skipped.empty()) {
        outcome.exit_code = 2;
    } else if (!outcome.report.warnings.empty()) {
        outcome.exit_code = 1;
    }
    return outcome;
}

/// Splits an endpoint URL into (scheme://host[:port], request path); a URL
/// without a path keeps the OpenAI-compatible default.
inline std::pair<std::string, std::string> split_endpoint_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    const std::size_t host_begin = scheme == std::string::npos ? 0 : scheme + 3;
    const std::size_t slash = url.find('/', host_begin);
    if (slash == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, slash), url.substr(slash)};
}

struct BackendBundle {
    std::shared_ptr<CompletionBackend> backend;
    std::shared_ptr<RecordingBackend> recorder;
};

/// Builds the backend the configured mode needs: a cassette replay, a live
/// client recording into a cassette, or a plain live client.
inline BackendBundle make_backend(const RunConfig& config) {
    BackendBundle bundle;
    if (config.mode == LintMode::Static) return bundle;
    if (!config.cassette.empty() && !config.record) {
        bundle.backend =
            std::make_shared<ReplayBackend>(ReplayBackend::from_file(config.cassette));
        return bundle;
    }
    if (config.record && config.cassette.empty()) {
        throw ConfigError("--record requires --cassette PATH");
    }
    LiveBackendConfig live;
    if (!config.llm_endpoint.empty()) {
        const auto [endpoint, path] = split_endpoint_url(config.llm_endpoint);
        live.endpoint = endpoint;
        live.path = path;
    }
    std::shared_ptr<CompletionBackend> http = std::make_shared<HttpBackend>(live);
    if (config.record) {
        bundle.recorder = std::make_shared<RecordingBackend>(std::move(http), config.cassette);
        bundle.backend = bundle.recorder;
    } else {
        bundle.backend = std::move(http);
    }
    return bundle;
}

}  // namespace qulint
