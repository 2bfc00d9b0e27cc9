#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <string>

namespace qulint {

/// Recognized Qiskit construction and mutation vocabulary. The interpreter is
/// driven entirely by this table so that new gate aliases or framework
/// revisions only require a table change. `leading_params` counts non-qubit
/// parameters (angles, phases) preceding the qubit arguments of a gate call.
struct Vocabulary {
    std::set<std::string> circuit_constructors;
    std::set<std::string> quantum_register_constructors;
    std::set<std::string> classical_register_constructors;
    std::set<std::string> transpile_functions;
    std::map<std::string, int> gate_methods;  // name -> leading_params
    std::set<std::string> measure_methods;
    std::set<std::string> measure_all_methods;
    std::set<std::string> reset_methods;
    std::set<std::string> condition_methods;
    std::set<std::string> compose_methods;
    // Methods that neither mutate the circuit nor touch qubits; anything not
    // listed anywhere is treated as an unknown mutation of the receiver.
    std::set<std::string> neutral_methods;

    bool is_gate(const std::string& name) const { return gate_methods.count(name) > 0; }
    int gate_leading_params(const std::string& name) const {
        auto it = gate_methods.find(name);
        return it == gate_methods.end() ? 0 : it->second;
    }
};

inline Vocabulary default_vocabulary() {
    Vocabulary v;
    v.circuit_constructors = {"QuantumCircuit"};
    v.quantum_register_constructors = {"QuantumRegister", "AncillaRegister"};
    v.classical_register_constructors = {"ClassicalRegister"};
    v.transpile_functions = {"transpile"};
    v.gate_methods = {
        {"h", 0},    {"x", 0},    {"y", 0},    {"z", 0},    {"s", 0},     {"sdg", 0},
        {"t", 0},    {"tdg", 0},  {"i", 0},    {"id", 0},   {"iden", 0},  {"sx", 0},
        {"sxdg", 0}, {"p", 1},    {"u1", 1},   {"u2", 2},   {"u3", 3},    {"u", 3},
        {"r", 2},    {"rx", 1},   {"ry", 1},   {"rz", 1},   {"cx", 0},    {"cnot", 0},
        {"cy", 0},   {"cz", 0},   {"ch", 0},   {"cs", 0},   {"csdg", 0},  {"csx", 0},
        {"cp", 1},   {"cu1", 1},  {"cu3", 3},  {"cu", 4},   {"crx", 1},   {"cry", 1},
        {"crz", 1},  {"swap", 0}, {"iswap", 0}, {"dcx", 0}, {"ecr", 0},   {"cswap", 0},
        {"fredkin", 0}, {"ccx", 0}, {"toffoli", 0}, {"ccz", 0}, {"rccx", 0}, {"rcccx", 0},
        {"mcx", 0},  {"mct", 0},  {"mcp", 1},  {"rxx", 1},  {"ryy", 1},   {"rzz", 1},
        {"rzx", 1},  {"ms", 1},
    };
    v.measure_methods = {"measure"};
    v.measure_all_methods = {"measure_all"};
    v.reset_methods = {"reset"};
    v.condition_methods = {"c_if"};
    v.compose_methods = {"compose"};
    v.neutral_methods = {
        "barrier", "draw", "depth", "size", "width", "count_ops", "qasm",
        "copy", "to_gate", "to_instruction", "decompose", "inverse",
        "reverse_ops", "reverse_bits", "assign_parameters", "bind_parameters",
        "num_connected_components", "qubit_duration", "has_register",
    };
    return v;
}

inline nlohmann::json vocabulary_to_json(const Vocabulary& v) {
    nlohmann::json gates = nlohmann::json::object();
    for (const auto& [name, params] : v.gate_methods) gates[name] = params;
    return nlohmann::json{
        {"circuit_constructors", v.circuit_constructors},
        {"quantum_register_constructors", v.quantum_register_constructors},
        {"classical_register_constructors", v.classical_register_constructors},
        {"transpile_functions", v.transpile_functions},
        {"gate_methods", gates},
        {"measure_methods", v.measure_methods},
        {"measure_all_methods", v.measure_all_methods},
        {"reset_methods", v.reset_methods},
        {"condition_methods", v.condition_methods},
        {"compose_methods", v.compose_methods},
        {"neutral_methods", v.neutral_methods},
    };
}

inline Vocabulary vocabulary_from_json(const nlohmann::json& j) {
    Vocabulary v;
    auto read_set = [&j](const char* key, std::set<std::string>& out) {
        for (const auto& e : j.at(key)) out.insert(e.get<std::string>());
    };
    read_set("circuit_constructors", v.circuit_constructors);
    read_set("quantum_register_constructors", v.quantum_register_constructors);
    read_set("classical_register_constructors", v.classical_register_constructors);
    read_set("transpile_functions", v.transpile_functions);
    for (auto it = j.at("gate_methods").begin(); it != j.at("gate_methods").end(); ++it) {
        v.gate_methods[it.key()] = it.value().get<int>();
    }
    read_set("measure_methods", v.measure_methods);
    read_set("measure_all_methods", v.measure_all_methods);
    read_set("reset_methods", v.reset_methods);
    read_set("condition_methods", v.condition_methods);
    read_set("compose_methods", v.compose_methods);
    read_set("neutral_methods", v.neutral_methods);
    return v;
}

}  // namespace qulint
