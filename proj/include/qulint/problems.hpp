#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qulint {

enum class ProblemKind {
    DoubleMeas,
    OpAfterMeas,
    MeasAllAbuse,
    CondWoMeas,
    ConstClasBit,
    InsuffClasReg,
    OversizedCircuit,
    GhostCompose,
    OpAfterOpt,
    OldIdenGate,
};

inline constexpr std::array<ProblemKind, 10> kAllProblems = {
    ProblemKind::DoubleMeas,    ProblemKind::OpAfterMeas,
    ProblemKind::MeasAllAbuse,  ProblemKind::CondWoMeas,
    ProblemKind::ConstClasBit,  ProblemKind::InsuffClasReg,
    ProblemKind::OversizedCircuit, ProblemKind::GhostCompose,
    ProblemKind::OpAfterOpt,    ProblemKind::OldIdenGate,
};

inline constexpr std::string_view problem_name(ProblemKind k) {
    switch (k) {
        case ProblemKind::DoubleMeas: return "DoubleMeas";
        case ProblemKind::OpAfterMeas: return "OpAfterMeas";
        case ProblemKind::MeasAllAbuse: return "MeasAllAbuse";
        case ProblemKind::CondWoMeas: return "CondWoMeas";
        case ProblemKind::ConstClasBit: return "ConstClasBit";
        case ProblemKind::InsuffClasReg: return "InsuffClasReg";
        case ProblemKind::OversizedCircuit: return "OversizedCircuit";
        case ProblemKind::GhostCompose: return "GhostCompose";
        case ProblemKind::OpAfterOpt: return "OpAfterOpt";
        case ProblemKind::OldIdenGate: return "OldIdenGate";
    }
    return "";
}

inline constexpr std::string_view problem_summary(ProblemKind k) {
    switch (k) {
        case ProblemKind::DoubleMeas:
            return "Two consecutive measurements are performed on the same qubit state.";
        case ProblemKind::OpAfterMeas:
            return "A gate is applied to a qubit after it has already been measured.";
        case ProblemKind::MeasAllAbuse:
            return "Measurement results are stored in a newly and implicitly created register, "
                   "despite the presence of an existing classical register.";
        case ProblemKind::CondWoMeas:
            return "A conditional gate is applied without measuring the associated register.";
        case ProblemKind::ConstClasBit:
            return "A qubit is measured without undergoing any prior transformation.";
        case ProblemKind::InsuffClasReg:
            return "There are not enough classical bits to store the measurement results of all "
                   "qubits.";
        case ProblemKind::OversizedCircuit:
            return "The quantum register includes qubits that remain unused.";
        case ProblemKind::GhostCompose:
            return "Two circuits are composed, but the resulting composed circuit is not "
                   "utilized.";
        case ProblemKind::OpAfterOpt:
            return "A gate is applied to the circuit after transpilation.";
        case ProblemKind::OldIdenGate:
            return "An identity gate is created using an API that has been removed.";
    }
    return "";
}

inline std::optional<ProblemKind> problem_from_name(std::string_view name) {
    for (ProblemKind k : kAllProblems) {
        if (problem_name(k) == name) return k;
    }
    return std::nullopt;
}

inline ProblemKind require_problem(std::string_view name) {
    if (auto k = problem_from_name(name)) return *k;
    throw std::invalid_argument("unknown problem kind: " + std::string(name));
}

enum class WarningSource { Static, Llm };

inline constexpr std::string_view warning_source_name(WarningSource s) {
    return s == WarningSource::Static ? "static" : "llm";
}

struct Warning {
    std::string file;
    ProblemKind problem = ProblemKind::DoubleMeas;
    int line = 0;
    std::string snippet;
    std::string explanation;
    WarningSource source = WarningSource::Static;
    int rank = 0;  // hybrid merge rank; 0 outside hybrid mode

    friend bool operator==(const Warning& a, const Warning& b) {
        return a.file == b.file && a.problem == b.problem && a.line == b.line &&
               a.snippet == b.snippet && a.explanation == b.explanation &&
               a.source == b.source && a.rank == b.rank;
    }
};

/// A unit of analysis that was skipped instead of producing warnings: a whole
/// file (parse failure, I/O error) or a single problem kind on one file
/// (token limit, transport failure, malformed response).
struct SkipDiagnostic {
    std::string file;
    std::optional<ProblemKind> kind;  // absent for whole-file skips
    std::string reason;

    friend bool operator==(const SkipDiagnostic& a, const SkipDiagnostic& b) {
        return a.file == b.file && a.kind == b.kind && a.reason == b.reason;
    }
};

}  // namespace qulint
