#include "qulint/metrics.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qulint/evalset.hpp"
#include "qulint/matching.hpp"
#include "qulint/textutil.hpp"

namespace qulint {
namespace {

Warning detected_at(const std::string& file, ProblemKind kind, int line) {
    Warning w;
    w.file = file;
    w.problem = kind;
    w.line = line;
    w.snippet = "snippet";
    w.explanation = "explanation";
    w.source = WarningSource::Static;
    return w;
}

AnnotatedWarning annotated(const std::string& file, ProblemKind kind, int line,
                           AnnotationLabel label) {
    return AnnotatedWarning{file, kind, line, label};
}

TEST(Annotations, ParsesWellFormedCsv) {
    const std::string csv =
        "file,problem,line,label\n"
        "a.py,DoubleMeas,8,TP\n"
        "a.py,OversizedCircuit,1,NW\n"
        "b.py,OldIdenGate,3,FP\n";
    std::vector<AnnotatedWarning> rows = parse_annotations(csv);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], annotated("a.py", ProblemKind::DoubleMeas, 8, AnnotationLabel::TP));
    EXPECT_EQ(rows[1],
              annotated("a.py", ProblemKind::OversizedCircuit, 1, AnnotationLabel::NW));
    EXPECT_EQ(rows[2], annotated("b.py", ProblemKind::OldIdenGate, 3, AnnotationLabel::FP));
}

TEST(Annotations, ToleratesCrlfBlankLinesAndSpaces) {
    const std::string csv =
        "file,problem,line,label\r\n"
        "\r\n"
        "a.py, DoubleMeas , 8 , TP\r\n";
    std::vector<AnnotatedWarning> rows = parse_annotations(csv);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].problem, ProblemKind::DoubleMeas);
    EXPECT_EQ(rows[0].line, 8);
}

TEST(Annotations, FormatErrorsCarryRowNumbers) {
    try {
        parse_annotations("file,problem,line,label\na.py,DoubleMeas,8,MAYBE\n");
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.row(), 2);
        EXPECT_NE(e.reason().find("MAYBE"), std::string::npos);
    }
    try {
        parse_annotations(
            "file,problem,line,label\na.py,DoubleMeas,8,TP\na.py,NotAProblem,2,TP\n");
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.row(), 3);
        EXPECT_NE(e.reason().find("NotAProblem"), std::string::npos);
    }
}

TEST(Annotations, RejectsStructuralProblems) {
    EXPECT_THROW(parse_annotations(""), FormatError);
    EXPECT_THROW(parse_annotations("wrong,header,row,here\n"), FormatError);
    EXPECT_THROW(parse_annotations("file,problem,line,label\na.py,DoubleMeas,8\n"),
                 FormatError);
    EXPECT_THROW(parse_annotations("file,problem,line,label\na.py,DoubleMeas,abc,TP\n"),
                 FormatError);
    EXPECT_THROW(parse_annotations("file,problem,line,label\na.py,DoubleMeas,0,TP\n"),
                 FormatError);
    EXPECT_THROW(parse_annotations("file,problem,line,label\n,DoubleMeas,3,TP\n"),
                 FormatError);
}

TEST(Annotations, DuplicateRowsRejected) {
    const std::string csv =
        "file,problem,line,label\n"
        "a.py,DoubleMeas,8,TP\n"
        "a.py,DoubleMeas,8,FP\n";
    EXPECT_THROW(parse_annotations(csv), DuplicateAnnotation);
    try {
        parse_annotations(csv);
    } catch (const FormatError& e) {
        EXPECT_EQ(e.row(), 3);
    }
}

TEST(Annotations, LoadsFromFile) {
    const std::string path = testing::TempDir() + "annotations.csv";
    write_file(path, "file,problem,line,label\na.py,GhostCompose,4,TP\n");
    std::vector<AnnotatedWarning> rows = load_annotations(path);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].problem, ProblemKind::GhostCompose);
    std::remove(path.c_str());
}

TEST(Matching, ExactLineMatches) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::DoubleMeas, 8)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::DoubleMeas, 8, AnnotationLabel::TP)};
    MatchResult r = match_warnings(detected, annotations, MatchPolicy::exact_line());
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.counts.tp, 1);
    EXPECT_EQ(r.counts.fn, 0);
    EXPECT_TRUE(r.unmatched_detected.empty());
}

TEST(Matching, FileAndProblemIgnoresLines) {
    // Detection at the measurement line, annotation at the creation line.
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::ConstClasBit, 9)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::ConstClasBit, 1, AnnotationLabel::TP)};

    MatchResult wide = match_warnings(detected, annotations, MatchPolicy::file_and_problem());
    EXPECT_EQ(wide.counts.tp, 1);
    EXPECT_EQ(wide.counts.fn, 0);

    MatchResult strict = match_warnings(detected, annotations, MatchPolicy::exact_line());
    EXPECT_EQ(strict.counts.tp, 0);
    EXPECT_EQ(strict.counts.fn, 1);
    ASSERT_EQ(strict.unmatched_detected.size(), 1u);
}

TEST(Matching, WindowBoundsTheDistance) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::OpAfterMeas, 5)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::OpAfterMeas, 7, AnnotationLabel::TP)};
    EXPECT_EQ(match_warnings(detected, annotations, MatchPolicy::window(2)).counts.tp, 1);
    EXPECT_EQ(match_warnings(detected, annotations, MatchPolicy::window(1)).counts.tp, 0);
}

TEST(Matching, FileAndProblemStillRequireEquality) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::DoubleMeas, 3)};
    std::vector<AnnotatedWarning> annotations{
        annotated("b.py", ProblemKind::DoubleMeas, 3, AnnotationLabel::TP),
        annotated("a.py", ProblemKind::OpAfterMeas, 3, AnnotationLabel::TP)};
    MatchResult r = match_warnings(detected, annotations, MatchPolicy::file_and_problem());
    EXPECT_TRUE(r.pairs.empty());
    EXPECT_EQ(r.counts.fn, 2);
}

TEST(Matching, OneToOneNeverReusesEndpoints) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::DoubleMeas, 4),
                                  detected_at("a.py", ProblemKind::DoubleMeas, 4)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::DoubleMeas, 4, AnnotationLabel::TP)};
    MatchResult r = match_warnings(detected, annotations, MatchPolicy::exact_line());
    EXPECT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.unmatched_detected.size(), 1u);
    EXPECT_EQ(r.counts.tp, 1);
}

TEST(Matching, TiesGoToTheEarlierAnnotation) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::DoubleMeas, 5)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::DoubleMeas, 6, AnnotationLabel::FP),
        annotated("a.py", ProblemKind::DoubleMeas, 4, AnnotationLabel::TP)};
    MatchResult r = match_warnings(detected, annotations, MatchPolicy::window(2));
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.pairs[0].annotation_index, 1u);
    EXPECT_EQ(r.counts.tp, 1);
    EXPECT_EQ(r.counts.fn, 0);
}

TEST(Matching, SmallestDistanceWinsBeforeWiderPairs) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::DoubleMeas, 5),
                                  detected_at("a.py", ProblemKind::DoubleMeas, 6)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::DoubleMeas, 5, AnnotationLabel::TP),
        annotated("a.py", ProblemKind::DoubleMeas, 6, AnnotationLabel::TP)};
    MatchResult r = match_warnings(detected, annotations, MatchPolicy::window(2));
    ASSERT_EQ(r.pairs.size(), 2u);
    for (const MatchPair& pair : r.pairs) EXPECT_EQ(pair.distance, 0);
    EXPECT_EQ(r.counts.tp, 2);
}

TEST(Metrics, PaperHeadlineArithmetic) {
    MatchCounts counts{137, 36, 22, 73};
    std::optional<Rational> p = precision(counts);
    std::optional<Rational> r = recall(counts);
    ASSERT_TRUE(p && r);
    EXPECT_EQ(p->num, 137);
    EXPECT_EQ(p->den, 195);
    EXPECT_EQ(p->percent(), 70);
    EXPECT_NEAR(p->value(), 0.7026, 0.0001);
    EXPECT_EQ(r->num, 137);
    EXPECT_EQ(r->den, 210);
    EXPECT_EQ(r->percent(), 65);
    EXPECT_NEAR(r->value(), 0.6524, 0.0001);
}

TEST(Metrics, EdgeValues) {
    EXPECT_EQ(*precision({5, 0, 0, 0}) == (Rational{1, 1}), true);
    EXPECT_EQ(precision({5, 0, 0, 0})->percent(), 100);
    EXPECT_FALSE(precision({0, 0, 0, 9}).has_value());
    EXPECT_FALSE(recall({0, 5, 5, 0}).has_value());
    EXPECT_EQ(recall({0, 0, 0, 10})->value(), 0.0);
    EXPECT_EQ(recall({0, 0, 0, 10})->percent(), 0);
}

TEST(Metrics, ScaleFree) {
    std::mt19937 rng(20240822);
    for (int i = 0; i < 200; ++i) {
        MatchCounts counts{int(rng() % 50), int(rng() % 50), int(rng() % 50),
                           int(rng() % 50)};
        int k = 1 + int(rng() % 9);
        MatchCounts scaled{counts.tp * k, counts.fp * k, counts.nw * k, counts.fn * k};
        auto p1 = precision(counts);
        auto p2 = precision(scaled);
        ASSERT_EQ(p1.has_value(), p2.has_value());
        if (p1) {
            EXPECT_TRUE(*p1 == *p2);
            EXPECT_EQ(p1->percent(), p2->percent());
        }
        auto r1 = recall(counts);
        auto r2 = recall(scaled);
        ASSERT_EQ(r1.has_value(), r2.has_value());
        if (r1) EXPECT_TRUE(*r1 == *r2);
    }
}

// Synthetic dataset shaped to reproduce two per-problem recall cells through
// the whole pipeline: 17 of 18 DoubleMeas TPs found (94%), 3 of 10
// OversizedCircuit TPs found (30%).
TEST(PerProblemReport, SyntheticRecallCells) {
    std::vector<Warning> detected;
    std::vector<AnnotatedWarning> annotations;
    for (int i = 0; i < 18; ++i) {
        annotations.push_back(
            annotated("dm.py", ProblemKind::DoubleMeas, 10 + i, AnnotationLabel::TP));
        if (i < 17) detected.push_back(detected_at("dm.py", ProblemKind::DoubleMeas, 10 + i));
    }
    for (int i = 0; i < 10; ++i) {
        annotations.push_back(
            annotated("oc.py", ProblemKind::OversizedCircuit, 20 + i, AnnotationLabel::TP));
        if (i < 3) {
            detected.push_back(detected_at("oc.py", ProblemKind::OversizedCircuit, 20 + i));
        }
    }

    EvalReport report = per_problem_report(detected, annotations, MatchPolicy::exact_line());
    const ProblemRow& dm = report.per_problem.at(ProblemKind::DoubleMeas);
    ASSERT_TRUE(dm.metrics.recall.has_value());
    EXPECT_EQ(dm.counts.tp, 17);
    EXPECT_EQ(dm.counts.fn, 1);
    EXPECT_EQ(dm.metrics.recall->percent(), 94);

    const ProblemRow& oc = report.per_problem.at(ProblemKind::OversizedCircuit);
    ASSERT_TRUE(oc.metrics.recall.has_value());
    EXPECT_EQ(oc.counts.tp, 3);
    EXPECT_EQ(oc.counts.fn, 7);
    EXPECT_EQ(oc.metrics.recall->percent(), 30);

    EXPECT_EQ(report.overall.counts.tp, 20);
    EXPECT_EQ(report.overall.counts.fn, 8);
    ASSERT_TRUE(report.overall.metrics.recall.has_value());
    EXPECT_EQ(report.overall.metrics.recall->num, 20);
    EXPECT_EQ(report.overall.metrics.recall->den, 28);
}

TEST(PerProblemReport, EmptyDetectedSet) {
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::DoubleMeas, 3, AnnotationLabel::TP)};
    EvalReport report = per_problem_report({}, annotations, MatchPolicy::exact_line());
    for (const auto& [kind, row] : report.per_problem) {
        EXPECT_FALSE(row.metrics.precision.has_value());
        if (kind == ProblemKind::DoubleMeas) {
            ASSERT_TRUE(row.metrics.recall.has_value());
            EXPECT_EQ(row.metrics.recall->value(), 0.0);
        } else {
            EXPECT_FALSE(row.metrics.recall.has_value());
        }
    }
}

TEST(PerProblemReport, JsonAndTextRendering) {
    std::vector<Warning> detected{detected_at("a.py", ProblemKind::DoubleMeas, 3)};
    std::vector<AnnotatedWarning> annotations{
        annotated("a.py", ProblemKind::DoubleMeas, 3, AnnotationLabel::TP)};
    EvalReport report = per_problem_report(detected, annotations, MatchPolicy::window(2));

    nlohmann::json j = eval_report_to_json(report);
    EXPECT_EQ(j["policy"], "Window(2)");
    EXPECT_EQ(j["per_problem"].size(), kAllProblems.size());
    EXPECT_EQ(j["per_problem"]["DoubleMeas"]["tp"], 1);
    EXPECT_EQ(j["per_problem"]["DoubleMeas"]["precision"]["percent"], 100);
    EXPECT_EQ(j["per_problem"]["DoubleMeas"]["recall"]["num"], 1);
    EXPECT_TRUE(j["per_problem"]["OldIdenGate"]["precision"].is_null());
    EXPECT_EQ(j["overall"]["tp"], 1);

    std::string text = eval_report_to_text(report);
    EXPECT_NE(text.find("match policy: Window(2)"), std::string::npos);
    EXPECT_NE(text.find("problem"), std::string::npos);
    EXPECT_NE(text.find("DoubleMeas"), std::string::npos);
    EXPECT_NE(text.find("overall"), std::string::npos);
    EXPECT_NE(text.find("100%"), std::string::npos);
}

TEST(MatchPolicy, ParseRoundTrip) {
    EXPECT_EQ(parse_match_policy("exact").name(), "ExactLine");
    EXPECT_EQ(parse_match_policy("file").name(), "FileAndProblem");
    EXPECT_EQ(parse_match_policy("window:2").name(), "Window(2)");
    EXPECT_EQ(parse_match_policy("window:0").name(), "Window(0)");
    EXPECT_THROW(parse_match_policy("fuzzy"), std::invalid_argument);
    EXPECT_THROW(parse_match_policy("window:-1"), std::invalid_argument);
}

// Randomized check of the policy ordering: every matched annotation under a
// narrower policy stays matched under a wider one, so recall never drops.
TEST(Matching, PolicyMonotonicityProperty) {
    std::mt19937 rng(424242);
    const std::array<ProblemKind, 3> kinds{ProblemKind::DoubleMeas,
                                           ProblemKind::OpAfterMeas,
                                           ProblemKind::OversizedCircuit};
    const std::array<const char*, 2> files{"a.py", "b.py"};
    const std::array<AnnotationLabel, 3> labels{AnnotationLabel::TP, AnnotationLabel::FP,
                                                AnnotationLabel::NW};
    int comparable_cases = 0;
    for (int iteration = 0; iteration < 2500; ++iteration) {
        std::vector<Warning> detected;
        std::vector<AnnotatedWarning> annotations;
        const int n_detected = int(rng() % 7);
        const int n_annotations = int(rng() % 7);
        for (int i = 0; i < n_detected; ++i) {
            detected.push_back(detected_at(files[rng() % files.size()],
                                           kinds[rng() % kinds.size()],
                                           1 + int(rng() % 12)));
        }
        std::set<std::tuple<std::string, ProblemKind, int>> used;
        for (int i = 0; i < n_annotations; ++i) {
            AnnotatedWarning a =
                annotated(files[rng() % files.size()], kinds[rng() % kinds.size()],
                          1 + int(rng() % 12), labels[rng() % labels.size()]);
            if (!used.insert({a.file, a.problem, a.line}).second) continue;
            annotations.push_back(std::move(a));
        }

        MatchResult exact = match_warnings(detected, annotations, MatchPolicy::exact_line());
        MatchResult window = match_warnings(detected, annotations, MatchPolicy::window(2));
        MatchResult wide =
            match_warnings(detected, annotations, MatchPolicy::file_and_problem());

        auto matched_annotations = [](const MatchResult& r) {
            std::set<std::size_t> s;
            for (const MatchPair& p : r.pairs) s.insert(p.annotation_index);
            return s;
        };
        std::set<std::size_t> s1 = matched_annotations(exact);
        std::set<std::size_t> s2 = matched_annotations(window);
        std::set<std::size_t> s3 = matched_annotations(wide);
        EXPECT_TRUE(std::includes(s2.begin(), s2.end(), s1.begin(), s1.end()));
        EXPECT_TRUE(std::includes(s3.begin(), s3.end(), s2.begin(), s2.end()));

        for (const MatchResult* r : {&exact, &window, &wide}) {
            EXPECT_EQ(r->pairs.size() + r->unmatched_detected.size(), detected.size());
            int tp_annotations = 0;
            for (const AnnotatedWarning& a : annotations) {
                if (a.label == AnnotationLabel::TP) ++tp_annotations;
            }
            EXPECT_EQ(r->counts.tp + r->counts.fn, tp_annotations);
        }

        auto r1 = recall(exact.counts);
        auto r2 = recall(window.counts);
        auto r3 = recall(wide.counts);
        ASSERT_EQ(r1.has_value(), r2.has_value());
        ASSERT_EQ(r2.has_value(), r3.has_value());
        if (!r1) continue;
        ++comparable_cases;
        EXPECT_LE(r1->num * r2->den, r2->num * r1->den);
        EXPECT_LE(r2->num * r3->den, r3->num * r2->den);
    }
    EXPECT_GE(comparable_cases, 1000);
}

}  // namespace
}  // namespace qulint
