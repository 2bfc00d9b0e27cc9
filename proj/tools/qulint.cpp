#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qulint/evalset.hpp"
#include "qulint/matching.hpp"
#include "qulint/metrics.hpp"
#include "qulint/prompts.hpp"
#include "qulint/report.hpp"
#include "qulint/runner.hpp"
#include "qulint/textutil.hpp"
#include "qulint/version.hpp"

namespace {

constexpr int kExitRunError = 2;

struct LintFlags {
    std::vector<std::string> paths;
    std::string mode;
    std::string checks;
    std::string format;
    std::string llm_endpoint;
    std::string llm_model;
    int token_limit = 0;
    std::string cassette;
    bool record = false;
    int jobs = 0;
    std::string out;
};

qulint::RunConfig resolve_config(const LintFlags& flags, const CLI::App& cmd) {
    qulint::RunConfig config;
    if (std::filesystem::exists("qulint.conf")) {
        config = qulint::load_config_file("qulint.conf", std::move(config));
    }
    auto apply = [&config, &cmd](const std::string& flag, const std::string& key,
                                 const std::string& value) {
        if (cmd.count(flag) > 0) qulint::apply_config_entry(config, key, value);
    };
    apply("--mode", "mode", flags.mode);
    apply("--checks", "checks", flags.checks);
    apply("--format", "format", flags.format);
    apply("--llm-endpoint", "llm-endpoint", flags.llm_endpoint);
    apply("--llm-model", "llm-model", flags.llm_model);
    apply("--token-limit", "token-limit", std::to_string(flags.token_limit));
    apply("--cassette", "cassette", flags.cassette);
    if (cmd.count("--record") > 0) config.record = flags.record;
    apply("--jobs", "jobs", std::to_string(flags.jobs));
    apply("--out", "out", flags.out);
    return config;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        qulint::write_file(out_path, text);
    }
}

std::string render_report(const qulint::LintReport& report, qulint::ReportFormat format) {
    switch (format) {
        case qulint::ReportFormat::Text: return qulint::report_to_text(report);
        case qulint::ReportFormat::Json: return qulint::report_to_json(report).dump(2) + "\n";
        case qulint::ReportFormat::Sarif:
            return qulint::report_to_sarif(report).dump(2) + "\n";
    }
    return "";
}

int cmd_lint(const LintFlags& flags, const CLI::App& cmd) {
    const qulint::RunConfig config = resolve_config(flags, cmd);
    qulint::BackendBundle bundle = qulint::make_backend(config);
    qulint::RunOutcome outcome = qulint::run_lint(flags.paths, config, bundle.backend.get());
    if (bundle.recorder) bundle.recorder->save();
    emit(render_report(outcome.report, config.format), config.out);
    return outcome.exit_code;
}

int cmd_eval(const std::string& annotations_path, const std::string& report_path,
             const std::string& match, const std::string& format,
             const std::string& out_path) {
    const std::vector<qulint::AnnotatedWarning> annotations =
        qulint::load_annotations(annotations_path);
    const qulint::LintReport lint_report =
        qulint::report_from_json(nlohmann::json::parse(qulint::read_file(report_path)));
    const qulint::MatchPolicy policy = qulint::parse_match_policy(match);
    const qulint::EvalReport report =
        qulint::per_problem_report(lint_report.warnings, annotations, policy);

    if (!out_path.empty()) {
        qulint::write_file(out_path, qulint::eval_report_to_json(report).dump(2) + "\n");
        std::fputs(qulint::eval_report_to_text(report).c_str(), stdout);
    } else if (format == "json") {
        std::fputs((qulint::eval_report_to_json(report).dump(2) + "\n").c_str(), stdout);
    } else {
        std::fputs(qulint::eval_report_to_text(report).c_str(), stdout);
    }
    return 0;
}

int cmd_prompts_dump(const std::string& problem, const std::string& out_dir) {
    const qulint::PromptCatalog catalog = qulint::PromptCatalog::builtin();
    std::optional<qulint::ProblemKind> only;
    if (!problem.empty()) only = qulint::require_problem(problem);

    if (out_dir.empty()) {
        if (only) {
            std::fputs(catalog.description(*only).full_text.c_str(), stdout);
        } else {
            std::fputs(catalog.dump().c_str(), stdout);
        }
        return 0;
    }
    std::filesystem::create_directories(out_dir);
    if (!only) {
        qulint::write_file(out_dir + "/template.txt", catalog.template_text());
    }
    for (qulint::ProblemKind kind : qulint::kAllProblems) {
        if (only && kind != *only) continue;
        qulint::write_file(out_dir + "/" + std::string(qulint::problem_name(kind)) + ".txt",
                           catalog.description(kind).full_text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid linter for Qiskit quantum programs"};
    app.set_version_flag("--version", std::string(qulint::kToolName) + " " +
                                          qulint::kToolVersion);
    app.require_subcommand(1);

    LintFlags lint_flags;
    CLI::App* lint = app.add_subcommand("lint", "Lint Qiskit source files");
    lint->add_option("paths", lint_flags.paths, "Files or directories to lint")
        ->required();
    lint->add_option("--mode", lint_flags.mode, "static, llm, or hybrid");
    lint->add_option("--checks", lint_flags.checks, "Comma-separated problem kinds");
    lint->add_option("--format", lint_flags.format, "text, json, or sarif");
    lint->add_option("--llm-endpoint", lint_flags.llm_endpoint, "Chat completions URL");
    lint->add_option("--llm-model", lint_flags.llm_model, "Model identifier");
    lint->add_option("--token-limit", lint_flags.token_limit, "Prompt token budget");
    lint->add_option("--cassette", lint_flags.cassette, "Recorded-response cassette path");
    lint->add_flag("--record", lint_flags.record, "Record live responses into the cassette");
    lint->add_option("--jobs", lint_flags.jobs, "Parallel file workers");
    lint->add_option("--out", lint_flags.out, "Write the report to a file");

    std::string eval_annotations;
    std::string eval_report;
    std::string eval_match = "exact";
    std::string eval_format = "text";
    std::string eval_out;
    CLI::App* eval = app.add_subcommand("eval", "Score a lint report against annotations");
    eval->add_option("--annotations", eval_annotations, "Ground-truth CSV")->required();
    eval->add_option("--report", eval_report, "Lint JSON report to score")->required();
    eval->add_option("--match", eval_match, "exact, file, or window:N");
    eval->add_option("--format", eval_format, "text or json");
    eval->add_option("--out", eval_out, "Write the JSON metrics to a file");

    std::string prompts_problem;
    std::string prompts_out;
    CLI::App* prompts = app.add_subcommand("prompts", "Prompt template utilities");
    prompts->require_subcommand(1);
    CLI::App* dump = prompts->add_subcommand("dump", "Dump templates and descriptions");
    dump->add_option("--problem", prompts_problem, "Dump a single problem description");
    dump->add_option("--out", prompts_out, "Write files to a directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lint->parsed()) return cmd_lint(lint_flags, *lint);
        if (eval->parsed()) {
            return cmd_eval(eval_annotations, eval_report, eval_match, eval_format, eval_out);
        }
        if (prompts->parsed() && dump->parsed()) {
            return cmd_prompts_dump(prompts_problem, prompts_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qulint: error: %s\n", e.what());
        return kExitRunError;
    }
    return kExitRunError;
}
