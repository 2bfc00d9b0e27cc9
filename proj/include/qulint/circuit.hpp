#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qulint {

enum class RegKind { Quantum, Classical };

struct RegisterDecl {
    RegKind kind = RegKind::Quantum;
    bool size_known = false;
    int size = 0;
    std::string name;  // binding identifier; empty when anonymous
    int decl_line = 0;
};

struct QubitRef {
    bool known = false;
    int index = 0;

    static QubitRef unknown() { return {}; }
    static QubitRef of(int i) { return {true, i}; }
};

/// Classical-bit reference. The flat index and the owning register are
/// resolved independently: measure(0, cr[i]) has an unknown index but a known
/// register, which is what the conditional-gate analysis needs.
struct ClbitRef {
    bool known = false;
    int index = 0;
    int register_ref = -1;  // index into CircuitModel::registers, -1 unknown
};

struct Condition {
    int register_ref = -1;
    std::string register_name;
    bool value_known = false;
    long long value = 0;
};

/// Branch-context frame stack recorded with each event: (branch id, arm).
using PathContext = std::vector<std::pair<int, int>>;

/// Two contexts lie on one straight-line path iff they agree on the shared
/// prefix; diverging arms of the same conditional are mutually exclusive.
inline bool paths_compatible(const PathContext& a, const PathContext& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

struct CircuitEvent {
    enum class Kind { GateApply, Measure, MeasureAll, Reset, Compose, Transpile };

    Kind kind = Kind::GateApply;
    int line = 0;
    PathContext path;

    // GateApply
    std::string gate_name;
    std::vector<QubitRef> qubits;
    std::optional<Condition> condition;

    // Measure / Reset
    QubitRef qubit;
    ClbitRef clbit;

    // MeasureAll
    bool add_bits = true;

    // Compose
    int other_circuit = -1;
    bool result_bound = false;
    bool inplace = false;

    // Transpile
    int result_circuit = -1;
};

enum class OriginKind { Constructed, FromTranspile, FromCompose };

struct CircuitModel {
    int id = 0;
    std::string var_name;
    std::string file;
    // Source lines of the defining module, shared across its models.
    std::shared_ptr<const std::vector<std::string>> source_lines;
    int creation_line = 0;
    bool num_qubits_known = false;
    int num_qubits = 0;
    bool num_clbits_known = false;
    int num_clbits = 0;
    std::vector<RegisterDecl> registers;
    std::vector<CircuitEvent> events;
    OriginKind origin = OriginKind::Constructed;
    std::vector<int> origin_parents;
    // True when the circuit holds operations we cannot see (transpile/compose
    // results); size- and usage-dependent checks are suppressed then.
    bool content_opaque = false;
    // Event-stream positions of unrecognized mutating calls on this circuit.
    std::vector<std::size_t> opaque_marks;

    std::string line_text(int line) const {
        if (!source_lines || line < 1 ||
            static_cast<std::size_t>(line) > source_lines->size()) {
            return "";
        }
        return (*source_lines)[static_cast<std::size_t>(line - 1)];
    }

    bool has_opaque_before(std::size_t event_index) const {
        for (std::size_t m : opaque_marks) {
            if (m <= event_index) return true;
        }
        return false;
    }

    bool has_explicit_classical_register() const {
        for (const RegisterDecl& r : registers) {
            if (r.kind != RegKind::Classical) continue;
            if (!r.size_known || r.size > 0) return true;
        }
        return false;
    }
};

/// A set of known qubit indices plus a completeness flag; incomplete sets
/// suppress the size-dependent analyses.
struct QubitSet {
    std::set<int> indices;
    bool complete = true;
};

inline QubitSet measured_qubits(const CircuitModel& model) {
    QubitSet out;
    if (model.content_opaque || !model.opaque_marks.empty()) out.complete = false;
    for (const CircuitEvent& e : model.events) {
        if (e.kind == CircuitEvent::Kind::Measure) {
            if (e.qubit.known) {
                out.indices.insert(e.qubit.index);
            } else {
                out.complete = false;
            }
        } else if (e.kind == CircuitEvent::Kind::MeasureAll) {
            if (model.num_qubits_known) {
                for (int i = 0; i < model.num_qubits; ++i) out.indices.insert(i);
            } else {
                out.complete = false;
            }
        }
    }
    return out;
}

inline QubitSet used_qubits(const CircuitModel& model) {
    QubitSet out;
    if (model.content_opaque || !model.opaque_marks.empty()) out.complete = false;
    auto add = [&out](const QubitRef& q) {
        if (q.known) {
            out.indices.insert(q.index);
        } else {
            out.complete = false;
        }
    };
    for (const CircuitEvent& e : model.events) {
        switch (e.kind) {
            case CircuitEvent::Kind::GateApply:
                for (const QubitRef& q : e.qubits) add(q);
                break;
            case CircuitEvent::Kind::Measure:
            case CircuitEvent::Kind::Reset:
                add(e.qubit);
                break;
            case CircuitEvent::Kind::MeasureAll:
                if (model.num_qubits_known) {
                    for (int i = 0; i < model.num_qubits; ++i) out.indices.insert(i);
                } else {
                    out.complete = false;
                }
                break;
            default:
                break;
        }
    }
    return out;
}

inline nlohmann::json circuit_to_json(const CircuitModel& m) {
    auto qubit_json = [](const QubitRef& q) -> nlohmann::json {
        if (q.known) return q.index;
        return "?";
    };
    nlohmann::json regs = nlohmann::json::array();
    for (const RegisterDecl& r : m.registers) {
        regs.push_back({{"kind", r.kind == RegKind::Quantum ? "quantum" : "classical"},
                        {"size", r.size_known ? nlohmann::json(r.size) : nlohmann::json("?")},
                        {"name", r.name},
                        {"line", r.decl_line}});
    }
    nlohmann::json events = nlohmann::json::array();
    for (const CircuitEvent& e : m.events) {
        nlohmann::json ev{{"line", e.line}};
        switch (e.kind) {
            case CircuitEvent::Kind::GateApply: {
                ev["kind"] = "gate";
                ev["gate"] = e.gate_name;
                nlohmann::json qs = nlohmann::json::array();
                for (const QubitRef& q : e.qubits) qs.push_back(qubit_json(q));
                ev["qubits"] = qs;
                if (e.condition) {
                    ev["condition"] = {{"register", e.condition->register_name},
                                       {"value", e.condition->value_known
                                                     ? nlohmann::json(e.condition->value)
                                                     : nlohmann::json("?")}};
                }
                break;
            }
            case CircuitEvent::Kind::Measure:
                ev["kind"] = "measure";
                ev["qubit"] = qubit_json(e.qubit);
                ev["clbit"] = e.clbit.known ? nlohmann::json(e.clbit.index) : nlohmann::json("?");
                break;
            case CircuitEvent::Kind::MeasureAll:
                ev["kind"] = "measure_all";
                ev["add_bits"] = e.add_bits;
                break;
            case CircuitEvent::Kind::Reset:
                ev["kind"] = "reset";
                ev["qubit"] = qubit_json(e.qubit);
                break;
            case CircuitEvent::Kind::Compose:
                ev["kind"] = "compose";
                ev["other"] = e.other_circuit;
                ev["result_bound"] = e.result_bound;
                ev["inplace"] = e.inplace;
                break;
            case CircuitEvent::Kind::Transpile:
                ev["kind"] = "transpile";
                ev["result"] = e.result_circuit;
                break;
        }
        if (!e.path.empty()) {
            nlohmann::json path = nlohmann::json::array();
            for (auto [branch, arm] : e.path) path.push_back({branch, arm});
            ev["path"] = path;
        }
        events.push_back(std::move(ev));
    }
    const char* origin = m.origin == OriginKind::Constructed    ? "constructed"
                         : m.origin == OriginKind::FromTranspile ? "transpile"
                                                                  : "compose";
    return nlohmann::json{
        {"id", m.id},
        {"var", m.var_name},
        {"creation_line", m.creation_line},
        {"num_qubits", m.num_qubits_known ? nlohmann::json(m.num_qubits) : nlohmann::json("?")},
        {"num_clbits", m.num_clbits_known ? nlohmann::json(m.num_clbits) : nlohmann::json("?")},
        {"registers", regs},
        {"events", events},
        {"origin", origin},
        {"parents", m.origin_parents},
        {"opaque", m.content_opaque || !m.opaque_marks.empty()},
    };
}

}  // namespace qulint
