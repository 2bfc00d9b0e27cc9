#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qulint/problems.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

namespace detail {

// Built-in copies of the v1 prompt catalog. data/prompts/v1/ ships the same
// bytes as editable files; the byte-equality is asserted in tests.
inline constexpr const char* kTemplateV1 =
    R"PROMPT(## Situation
You are analyzing the source code to detect ?problem? occurrences.
<code>
?code?
</code>

## Your Role
Act as a source code linter tool to detect all occurrences of the problem:
?problem_description?

## Output Format
If the code contains ?problem?, return this JSON object:
{
	"problem": "?problem?", 
	"snippets": ["string"], // extract code verbatim where ?problem? occurs.
	"lines": ["integer"], // list line numbers where ?problem? occurs.
	"explanations": ["string"] // explain why each line has ?problem?.
}
If the code does not contain ?problem?, return the same JSON object with "snippets", "lines", and "explanations" set to empty arrays.
)PROMPT";

inline constexpr const char* kDoubleMeasV1 =
    R"PROMPT(DoubleMeas (Double measurement) --- Any two subsequent measurements on the same qubit produce the same classical result, making the second measurement not only redundant but also a possible sign of unintended behavior or a misunderstanding of the properties of quantum information.
The code example below shows the DoubleMeas problem.
<example>
	circuit = QuantumCircuit(3, 3)
	circuit.ccx(0, 1, 2)
	circuit.measure(0, 0) # Measure qubit 0
	circuit.measure(2, 2)
	circuit.measure(0, 1) # Problem: Qubit 0 already measured
</example>
)PROMPT";

inline constexpr const char* kOpAfterMeasV1 =
    R"PROMPT(OpAfterMeas (Operation after measurement) --- A gate is applied to a qubit after it has already been measured. The measurement collapses the qubit state, so a later gate on that qubit usually indicates a misplaced operation or a missing reset.
The code example below shows the OpAfterMeas problem.
<example>
	circuit = QuantumCircuit(1, 1)
	circuit.h(0)
	circuit.measure(0, 0)
	circuit.x(0) # Problem: Qubit 0 was already measured
</example>
)PROMPT";

inline constexpr const char* kMeasAllAbuseV1 =
    R"PROMPT(MeasAllAbuse (Measure-all abuse) --- Measurement results are stored in a newly and implicitly created register, despite the presence of an existing classical register. Calling measure_all() appends another classical register instead of reusing the declared one, which is left unused.
The code example below shows the MeasAllAbuse problem.
<example>
	qr = QuantumRegister(2)
	cr = ClassicalRegister(2)
	circuit = QuantumCircuit(qr, cr)
	circuit.h(0)
	circuit.measure_all() # Problem: Results go to a new register instead of cr
</example>
)PROMPT";

inline constexpr const char* kCondWoMeasV1 =
    R"PROMPT(CondWoMeas (Conditional without measurement) --- A conditional gate is applied without measuring the associated register. The register still holds its initial value, so the condition outcome is fixed and the gate never reacts to the quantum state.
The code example below shows the CondWoMeas problem.
<example>
	qr = QuantumRegister(1)
	cr = ClassicalRegister(1)
	circuit = QuantumCircuit(qr, cr)
	circuit.x(0).c_if(cr, 1) # Problem: cr is never written by a measurement
</example>
)PROMPT";

inline constexpr const char* kConstClasBitV1 =
    R"PROMPT(ConstClasBit (Constant classical bit) --- A qubit is measured without undergoing any prior transformation. The qubit is still in its initial state, so the measurement always stores the same constant result.
The code example below shows the ConstClasBit problem.
<example>
	circuit = QuantumCircuit(2, 2)
	circuit.h(0)
	circuit.measure(0, 0)
	circuit.measure(1, 1) # Problem: Qubit 1 was never transformed
</example>
)PROMPT";

inline constexpr const char* kInsuffClasRegV1 =
    R"PROMPT(InsuffClasReg (Insufficient classical register) --- There are not enough classical bits to store the measurement results of all qubits. Some measurement results overwrite earlier ones because the classical register is smaller than the number of measured qubits.
The code example below shows the InsuffClasReg problem.
<example>
	circuit = QuantumCircuit(3, 1) # Problem: Three qubits share one classical bit
	circuit.h(0)
	circuit.measure(0, 0)
	circuit.measure(1, 0)
	circuit.measure(2, 0)
</example>
)PROMPT";

inline constexpr const char* kOversizedCircuitV1 =
    R"PROMPT(OversizedCircuit (Oversized circuit) --- The quantum register includes qubits that remain unused. Allocating more qubits than the program ever touches wastes resources and usually signals a leftover or miscounted register size.
The code example below shows the OversizedCircuit problem.
<example>
	circuit = QuantumCircuit(3, 1) # Problem: Qubits 1 and 2 are never used
	circuit.h(0)
	circuit.measure(0, 0)
</example>
)PROMPT";

inline constexpr const char* kGhostComposeV1 =
    R"PROMPT(GhostCompose (Ghost composition) --- Two circuits are composed, but the resulting composed circuit is not utilized. compose() returns a new circuit by default, so discarding the return value leaves both input circuits unchanged.
The code example below shows the GhostCompose problem.
<example>
	first = QuantumCircuit(2)
	second = QuantumCircuit(2)
	second.h(0)
	first.compose(second) # Problem: The composed circuit is discarded
</example>
)PROMPT";

inline constexpr const char* kOpAfterOptV1 =
    R"PROMPT(OpAfterOpt (Operation after optimization) --- A gate is applied to the circuit after transpilation. Modifying a transpiled circuit invalidates the optimization and the added gate may violate the target device constraints.
The code example below shows the OpAfterOpt problem.
<example>
	circuit = QuantumCircuit(2, 2)
	circuit.h(0)
	optimized = transpile(circuit, backend)
	optimized.x(0) # Problem: The transpiled circuit is modified
</example>
)PROMPT";

inline constexpr const char* kOldIdenGateV1 =
    R"PROMPT(OldIdenGate (Old identity gate) --- An identity gate is created using an API that has been removed. The iden() method no longer exists on QuantumCircuit; current code must call id() instead.
The code example below shows the OldIdenGate problem.
<example>
	circuit = QuantumCircuit(1, 1)
	circuit.iden(0) # Problem: iden() was removed; use id() instead
</example>
)PROMPT";

inline const char* builtin_description_text(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::DoubleMeas: return kDoubleMeasV1;
        case ProblemKind::OpAfterMeas: return kOpAfterMeasV1;
        case ProblemKind::MeasAllAbuse: return kMeasAllAbuseV1;
        case ProblemKind::CondWoMeas: return kCondWoMeasV1;
        case ProblemKind::ConstClasBit: return kConstClasBitV1;
        case ProblemKind::InsuffClasReg: return kInsuffClasRegV1;
        case ProblemKind::OversizedCircuit: return kOversizedCircuitV1;
        case ProblemKind::GhostCompose: return kGhostComposeV1;
        case ProblemKind::OpAfterOpt: return kOpAfterOptV1;
        case ProblemKind::OldIdenGate: return kOldIdenGateV1;
    }
    return "";
}

}  // namespace detail

struct ProblemDescription {
    ProblemKind kind = ProblemKind::DoubleMeas;
    std::string full_text;               // verbatim catalog bytes, used in prompts
    std::string prose;                   // text after the "--- " marker, before examples
    std::vector<std::string> examples;   // dedented example block bodies
};

namespace detail {

inline ProblemDescription parse_description(ProblemKind kind, const std::string& text) {
    ProblemDescription d;
    d.kind = kind;
    d.full_text = text;

    const std::string marker = " --- ";
    std::size_t prose_begin = text.find(marker);
    prose_begin = prose_begin == std::string::npos ? 0 : prose_begin + marker.size();
    std::size_t prose_end = text.find("<example>");
    if (prose_end == std::string::npos) prose_end = text.size();
    d.prose = trim(text.substr(prose_begin, prose_end - prose_begin));

    std::size_t pos = 0;
    while (true) {
        std::size_t begin = text.find("<example>\n", pos);
        if (begin == std::string::npos) break;
        begin += std::string("<example>\n").size();
        std::size_t end = text.find("</example>", begin);
        if (end == std::string::npos) break;
        const std::string block = text.substr(begin, end - begin);
        std::string body;
        for (std::string_view line : split_lines(block)) {
            if (!line.empty() && line.front() == '\t') line.remove_prefix(1);
            body += std::string(line);
            body += '\n';
        }
        d.examples.push_back(std::move(body));
        pos = end;
    }
    return d;
}

}  // namespace detail

/// Versioned prompt catalog: the Fig. 2-shaped template plus one few-shot
/// problem description per ProblemKind.
class PromptCatalog {
public:
    static PromptCatalog builtin() {
        PromptCatalog c;
        c.version_ = "v1";
        c.template_text_ = detail::kTemplateV1;
        for (ProblemKind kind : kAllProblems) {
            c.descriptions_.emplace(
                kind, detail::parse_description(kind, detail::builtin_description_text(kind)));
        }
        return c;
    }

    /// Loads template.txt plus <Kind>.txt for all ten kinds from a directory.
    static PromptCatalog load_dir(const std::string& dir) {
        PromptCatalog c;
        std::size_t slash = dir.find_last_of('/');
        c.version_ = slash == std::string::npos ? dir : dir.substr(slash + 1);
        c.template_text_ = read_file(dir + "/template.txt");
        for (ProblemKind kind : kAllProblems) {
            const std::string path = dir + "/" + std::string(problem_name(kind)) + ".txt";
            c.descriptions_.emplace(kind, detail::parse_description(kind, read_file(path)));
        }
        return c;
    }

    const std::string& version() const { return version_; }
    const std::string& template_text() const { return template_text_; }

    const ProblemDescription& description(ProblemKind kind) const {
        auto it = descriptions_.find(kind);
        if (it == descriptions_.end()) {
            throw std::out_of_range("no description for " + std::string(problem_name(kind)));
        }
        return it->second;
    }

    /// Full catalog rendering for `prompts dump`.
    std::string dump() const {
        std::string out;
        out += "# template (" + version_ + ")\n";
        out += template_text_;
        for (ProblemKind kind : kAllProblems) {
            out += "\n# description: " + std::string(problem_name(kind)) + "\n";
            out += description(kind).full_text;
        }
        return out;
    }

private:
    std::string version_;
    std::string template_text_;
    std::map<ProblemKind, ProblemDescription> descriptions_;
};

}  // namespace qulint
