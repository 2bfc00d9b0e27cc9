#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qulint/cassette.hpp"
#include "qulint/llm_linter.hpp"
#include "qulint/parser.hpp"
#include "qulint/prompts.hpp"
#include "qulint/textutil.hpp"

namespace qulint {
namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    CommandResult result;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (pipe == nullptr) return result;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string cli() { return QULINT_CLI_PATH; }

std::string fig3() { return std::string(QULINT_TEST_DIR) + "/fixtures/fig3.py"; }

std::string temp_dir(const std::string& tag) {
    const fs::path dir = fs::path(testing::TempDir()) / ("qulint_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

TEST(Cli, VersionFlag) {
    CommandResult result = run_command(cli() + " --version");
    EXPECT_EQ(result.exit_code, 0);
    EXPECT_EQ(result.output, "qulint 0.1.0\n");
}

TEST(Cli, LintTextModeFindsDoubleMeas) {
    CommandResult result = run_command(cli() + " lint " + fig3());
    EXPECT_EQ(result.exit_code, 1);
    EXPECT_NE(result.output.find(":5: [DoubleMeas] circuit.measure(0, 1)"),
              std::string::npos);
    EXPECT_NE(result.output.find("1 warning(s), 1 file(s) scanned"), std::string::npos);
}

TEST(Cli, LintJsonMode) {
    CommandResult result = run_command(cli() + " lint " + fig3() + " --format json");
    EXPECT_EQ(result.exit_code, 1);
    nlohmann::json j = nlohmann::json::parse(result.output);
    EXPECT_EQ(j["mode"], "static");
    ASSERT_EQ(j["warnings"].size(), 1u);
    EXPECT_EQ(j["warnings"][0]["problem"], "DoubleMeas");
    EXPECT_EQ(j["warnings"][0]["line"], 5);
    EXPECT_FALSE(j["stats"].contains("duration"));
}

TEST(Cli, LintSarifMode) {
    CommandResult result = run_command(cli() + " lint " + fig3() + " --format sarif");
    EXPECT_EQ(result.exit_code, 1);
    nlohmann::json j = nlohmann::json::parse(result.output);
    EXPECT_EQ(j["version"], "2.1.0");
    EXPECT_EQ(j["runs"][0]["tool"]["driver"]["name"], "qulint");
    EXPECT_EQ(j["runs"][0]["results"][0]["ruleId"], "DoubleMeas");
}

TEST(Cli, ChecksFlagRestrictsKinds) {
    CommandResult result =
        run_command(cli() + " lint " + fig3() + " --checks OldIdenGate --format json");
    EXPECT_EQ(result.exit_code, 0);
    nlohmann::json j = nlohmann::json::parse(result.output);
    EXPECT_TRUE(j["warnings"].empty());
}

TEST(Cli, MissingPathExitsTwo) {
    CommandResult result = run_command(cli() + " lint /nonexistent/ghost.py");
    EXPECT_EQ(result.exit_code, 2);
}

TEST(Cli, InvalidModeValueExitsTwo) {
    CommandResult result = run_command(cli() + " lint " + fig3() + " --mode turbo");
    EXPECT_EQ(result.exit_code, 2);
    EXPECT_NE(result.output.find("unknown mode"), std::string::npos);
}

TEST(Cli, OutFlagWritesReportFile) {
    const std::string dir = temp_dir("out");
    const std::string out = dir + "/report.json";
    CommandResult result =
        run_command(cli() + " lint " + fig3() + " --format json --out " + out);
    EXPECT_EQ(result.exit_code, 1);
    EXPECT_TRUE(result.output.empty());
    nlohmann::json j = nlohmann::json::parse(read_file(out));
    EXPECT_EQ(j["warnings"].size(), 1u);
}

TEST(Cli, ParallelJobsInAFreshProcessAreStable) {
    const std::string dir = temp_dir("jobs");
    for (int i = 0; i < 6; ++i) {
        std::ofstream file(dir + "/prog_" + std::to_string(i) + ".py");
        file << "qc = QuantumCircuit(1, 1)\nqc.iden(0)\nqc.measure(0, 0)\n";
    }
    for (int run = 0; run < 3; ++run) {
        CommandResult result =
            run_command(cli() + " lint " + dir + " --jobs 8 --format json");
        ASSERT_EQ(result.exit_code, 1) << result.output;
        nlohmann::json j = nlohmann::json::parse(result.output);
        EXPECT_EQ(j["warnings"].size(), 6u);
    }
}

TEST(Cli, ConfigFileIsHonoredAndFlagsOverrideIt) {
    const std::string dir = temp_dir("conf");
    {
        std::ofstream conf(dir + "/qulint.conf");
        conf << "checks = OldIdenGate\nformat = json\n";
    }
    CommandResult from_conf =
        run_command("cd " + dir + " && " + cli() + " lint " + fig3());
    EXPECT_EQ(from_conf.exit_code, 0);
    EXPECT_TRUE(nlohmann::json::parse(from_conf.output)["warnings"].empty());

    CommandResult overridden = run_command("cd " + dir + " && " + cli() + " lint " +
                                           fig3() + " --checks DoubleMeas");
    EXPECT_EQ(overridden.exit_code, 1);
    EXPECT_EQ(nlohmann::json::parse(overridden.output)["warnings"].size(), 1u);
}

TEST(Cli, EvalScoresAReport) {
    const std::string dir = temp_dir("eval");
    const std::string report = dir + "/report.json";
    ASSERT_EQ(run_command(cli() + " lint " + fig3() + " --format json --out " + report)
                  .exit_code,
              1);
    const std::string annotations = dir + "/annotations.csv";
    write_file(annotations, "file,problem,line,label\n" + fig3() + ",DoubleMeas,5,TP\n");

    CommandResult text = run_command(cli() + " eval --annotations " + annotations +
                                     " --report " + report + " --match exact");
    EXPECT_EQ(text.exit_code, 0);
    EXPECT_NE(text.output.find("match policy: ExactLine"), std::string::npos);
    EXPECT_NE(text.output.find("100%"), std::string::npos);

    CommandResult json_out =
        run_command(cli() + " eval --annotations " + annotations + " --report " + report +
                    " --match window:2 --format json");
    EXPECT_EQ(json_out.exit_code, 0);
    nlohmann::json j = nlohmann::json::parse(json_out.output);
    EXPECT_EQ(j["policy"], "Window(2)");
    EXPECT_EQ(j["overall"]["tp"], 1);

    const std::string metrics = dir + "/metrics.json";
    CommandResult both = run_command(cli() + " eval --annotations " + annotations +
                                     " --report " + report + " --match file --out " +
                                     metrics);
    EXPECT_EQ(both.exit_code, 0);
    EXPECT_NE(both.output.find("match policy: FileAndProblem"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(read_file(metrics))["policy"], "FileAndProblem");
}

TEST(Cli, EvalRejectsMalformedAnnotations) {
    const std::string dir = temp_dir("evalbad");
    const std::string report = dir + "/report.json";
    ASSERT_EQ(run_command(cli() + " lint " + fig3() + " --format json --out " + report)
                  .exit_code,
              1);
    const std::string annotations = dir + "/annotations.csv";
    write_file(annotations, "file,problem,line,label\nx.py,DoubleMeas,8,MAYBE\n");
    CommandResult result = run_command(cli() + " eval --annotations " + annotations +
                                       " --report " + report + " --match exact");
    EXPECT_EQ(result.exit_code, 2);
    EXPECT_NE(result.output.find("error"), std::string::npos);
}

TEST(Cli, PromptsDumpToStdout) {
    CommandResult result = run_command(cli() + " prompts dump");
    EXPECT_EQ(result.exit_code, 0);
    EXPECT_NE(result.output.find("# template (v1)"), std::string::npos);
    EXPECT_NE(result.output.find("## Situation"), std::string::npos);
    EXPECT_NE(result.output.find("circuit.measure(0, 1) # Problem: Qubit 0 already measured"),
              std::string::npos);
}

TEST(Cli, PromptsDumpSingleProblem) {
    CommandResult result = run_command(cli() + " prompts dump --problem DoubleMeas");
    EXPECT_EQ(result.exit_code, 0);
    PromptCatalog catalog = PromptCatalog::builtin();
    EXPECT_EQ(result.output, catalog.description(ProblemKind::DoubleMeas).full_text);
}

TEST(Cli, PromptsDumpWritesRuntimeBytes) {
    const std::string dir = temp_dir("prompts");
    CommandResult result = run_command(cli() + " prompts dump --out " + dir);
    EXPECT_EQ(result.exit_code, 0);
    PromptCatalog catalog = PromptCatalog::builtin();
    EXPECT_EQ(read_file(dir + "/template.txt"), catalog.template_text());
    std::size_t description_files = 0;
    for (ProblemKind kind : kAllProblems) {
        const std::string path = dir + "/" + std::string(problem_name(kind)) + ".txt";
        EXPECT_EQ(read_file(path), catalog.description(kind).full_text);
        ++description_files;
    }
    EXPECT_EQ(description_files, 10u);
}

TEST(Cli, LlmModeReplaysFromCassette) {
    const std::string dir = temp_dir("replay");
    const std::string tape = dir + "/tape.json";
    {
        auto mock = std::make_shared<MockBackend>([](const CompletionRequest& request) {
            const std::string& prompt = request.messages.at(0).second;
            nlohmann::json body = {{"snippets", nlohmann::json::array()},
                                   {"lines", nlohmann::json::array()},
                                   {"explanations", nlohmann::json::array()}};
            if (prompt.find("detect DoubleMeas occurrences") != std::string::npos) {
                body["snippets"] = {"circuit.measure(0, 1)"};
                body["lines"] = {5};
                body["explanations"] = {"qubit 0 is measured twice"};
            }
            return body.dump();
        });
        RecordingBackend recorder(mock, tape);
        const std::string text = read_file(fig3());
        SourceModule module = parse_source(fig3(), text);
        PromptCatalog catalog = PromptCatalog::builtin();
        lint_file_llm(module, {kAllProblems.begin(), kAllProblems.end()}, recorder, catalog);
        recorder.save();
    }
    CommandResult result = run_command(cli() + " lint " + fig3() +
                                       " --mode llm --cassette " + tape + " --format json");
    EXPECT_EQ(result.exit_code, 1);
    nlohmann::json j = nlohmann::json::parse(result.output);
    EXPECT_EQ(j["mode"], "llm");
    ASSERT_EQ(j["warnings"].size(), 1u);
    EXPECT_EQ(j["warnings"][0]["problem"], "DoubleMeas");
    EXPECT_EQ(j["warnings"][0]["source"], "llm");
    EXPECT_EQ(j["warnings"][0]["explanation"], "qubit 0 is measured twice");
}

TEST(Cli, HybridModeWithCassette) {
    const std::string dir = temp_dir("hybrid");
    const std::string tape = dir + "/tape.json";
    {
        auto mock = std::make_shared<MockBackend>([](const CompletionRequest& request) {
            const std::string& prompt = request.messages.at(0).second;
            nlohmann::json body = {{"snippets", nlohmann::json::array()},
                                   {"lines", nlohmann::json::array()},
                                   {"explanations", nlohmann::json::array()}};
            if (prompt.find("detect DoubleMeas occurrences") != std::string::npos) {
                body["snippets"] = {"circuit.measure(0, 1)"};
                body["lines"] = {5};
                body["explanations"] = {"confirmed by model"};
            }
            return body.dump();
        });
        RecordingBackend recorder(mock, tape);
        const std::string text = read_file(fig3());
        SourceModule module = parse_source(fig3(), text);
        PromptCatalog catalog = PromptCatalog::builtin();
        lint_file_llm(module, {kAllProblems.begin(), kAllProblems.end()}, recorder, catalog);
        recorder.save();
    }
    CommandResult result = run_command(cli() + " lint " + fig3() +
                                       " --mode hybrid --cassette " + tape + " --format json");
    EXPECT_EQ(result.exit_code, 1);
    nlohmann::json j = nlohmann::json::parse(result.output);
    ASSERT_EQ(j["warnings"].size(), 1u);
    EXPECT_EQ(j["warnings"][0]["rank"], 1);
    EXPECT_NE(std::string(j["warnings"][0]["explanation"]).find("(LLM: confirmed by model)"),
              std::string::npos);
}

TEST(Cli, RecordWithoutCassetteIsAnError) {
    CommandResult result = run_command(cli() + " lint " + fig3() + " --mode llm --record");
    EXPECT_EQ(result.exit_code, 2);
    EXPECT_NE(result.output.find("--record requires --cassette"), std::string::npos);
}

TEST(Cli, NoSubcommandFails) {
    CommandResult result = run_command(cli());
    EXPECT_NE(result.exit_code, 0);
}

}  // namespace
}  // namespace qulint
