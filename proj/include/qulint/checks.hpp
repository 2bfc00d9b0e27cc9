#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "qulint/circuit.hpp"
#include "qulint/problems.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

namespace detail {

inline std::string circuit_label(const CircuitModel& m) {
    if (m.var_name.empty()) return "the circuit";
    return "circuit '" + m.var_name + "'";
}

inline Warning make_static_warning(const CircuitModel& m, ProblemKind kind, int line,
                                   std::string explanation) {
    Warning w;
    w.file = m.file;
    w.problem = kind;
    w.line = line;
    w.snippet = trim(m.line_text(line));
    w.explanation = std::move(explanation);
    w.source = WarningSource::Static;
    return w;
}

inline bool gate_may_touch(const CircuitEvent& e, int qubit) {
    for (const QubitRef& q : e.qubits) {
        if (!q.known || q.index == qubit) return true;
    }
    return false;
}

inline bool reset_may_touch(const CircuitEvent& e, int qubit) {
    return !e.qubit.known || e.qubit.index == qubit;
}

// Opaque call strictly after event j and no later than event i.
inline bool opaque_between(const CircuitModel& m, std::size_t j, std::size_t i) {
    for (std::size_t mark : m.opaque_marks) {
        if (mark > j && mark <= i) return true;
    }
    return false;
}

// An event intervenes on the straight-line path of the pair (j, i) only when
// its branch context is compatible with both endpoints.
inline bool on_pair_path(const CircuitEvent& e, const CircuitEvent& first,
                         const CircuitEvent& second) {
    return paths_compatible(e.path, first.path) && paths_compatible(e.path, second.path);
}

}  // namespace detail

inline std::vector<Warning> check_double_meas(const CircuitModel& m) {
    std::vector<Warning> out;
    const auto& ev = m.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != CircuitEvent::Kind::Measure || !ev[i].qubit.known) continue;
        const int q = ev[i].qubit.index;
        for (std::size_t j = i; j-- > 0;) {
            if (ev[j].kind != CircuitEvent::Kind::Measure || !ev[j].qubit.known) continue;
            if (ev[j].qubit.index != q) continue;
            if (!paths_compatible(ev[j].path, ev[i].path)) continue;
            bool blocked = detail::opaque_between(m, j, i);
            for (std::size_t k = j + 1; !blocked && k < i; ++k) {
                if (!detail::on_pair_path(ev[k], ev[j], ev[i])) continue;
                if (ev[k].kind == CircuitEvent::Kind::GateApply &&
                    detail::gate_may_touch(ev[k], q)) {
                    blocked = true;
                } else if (ev[k].kind == CircuitEvent::Kind::Reset &&
                           detail::reset_may_touch(ev[k], q)) {
                    blocked = true;
                }
            }
            if (!blocked) {
                out.push_back(detail::make_static_warning(
                    m, ProblemKind::DoubleMeas, ev[i].line,
                    "Qubit " + std::to_string(q) + " of " + detail::circuit_label(m) +
                        " was already measured on line " + std::to_string(ev[j].line) +
                        "; measuring it again returns the same result."));
            }
            break;  // pair only with the nearest compatible prior measurement
        }
    }
    return out;
}

inline std::vector<Warning> check_op_after_meas(const CircuitModel& m) {
    std::vector<Warning> out;
    const auto& ev = m.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != CircuitEvent::Kind::GateApply) continue;

        int measured_qubit = -1;
        int measure_line = 0;
        bool via_measure_all = false;

        for (const QubitRef& g : ev[i].qubits) {
            if (!g.known || measured_qubit >= 0) continue;
            for (std::size_t j = i; j-- > 0;) {
                if (ev[j].kind != CircuitEvent::Kind::Measure || !ev[j].qubit.known) continue;
                if (ev[j].qubit.index != g.index) continue;
                if (!paths_compatible(ev[j].path, ev[i].path)) continue;
                bool blocked = detail::opaque_between(m, j, i);
                for (std::size_t k = j + 1; !blocked && k < i; ++k) {
                    if (!detail::on_pair_path(ev[k], ev[j], ev[i])) continue;
                    if (ev[k].kind == CircuitEvent::Kind::Reset &&
                        detail::reset_may_touch(ev[k], g.index)) {
                        blocked = true;
                    }
                }
                if (!blocked) {
                    measured_qubit = g.index;
                    measure_line = ev[j].line;
                }
                break;
            }
        }

        if (measured_qubit < 0) {
            for (std::size_t j = i; j-- > 0;) {
                if (ev[j].kind != CircuitEvent::Kind::MeasureAll) continue;
                if (!paths_compatible(ev[j].path, ev[i].path)) continue;
                bool blocked = detail::opaque_between(m, j, i);
                for (std::size_t k = j + 1; !blocked && k < i; ++k) {
                    if (!detail::on_pair_path(ev[k], ev[j], ev[i])) continue;
                    if (ev[k].kind == CircuitEvent::Kind::Reset) blocked = true;
                }
                if (!blocked) {
                    via_measure_all = true;
                    measure_line = ev[j].line;
                }
                break;
            }
        }

        if (measured_qubit >= 0) {
            out.push_back(detail::make_static_warning(
                m, ProblemKind::OpAfterMeas, ev[i].line,
                "Gate '" + ev[i].gate_name + "' is applied to qubit " +
                    std::to_string(measured_qubit) + " of " + detail::circuit_label(m) +
                    " after its measurement on line " + std::to_string(measure_line) + "."));
        } else if (via_measure_all) {
            out.push_back(detail::make_static_warning(
                m, ProblemKind::OpAfterMeas, ev[i].line,
                "Gate '" + ev[i].gate_name + "' is applied to " + detail::circuit_label(m) +
                    " after all of its qubits were measured on line " +
                    std::to_string(measure_line) + "."));
        }
    }
    return out;
}

inline std::vector<Warning> check_meas_all_abuse(const CircuitModel& m) {
    std::vector<Warning> out;
    if (!m.has_explicit_classical_register()) return out;
    std::string reg_name;
    for (const RegisterDecl& r : m.registers) {
        if (r.kind == RegKind::Classical && !r.name.empty()) {
            reg_name = r.name;
            break;
        }
    }
    for (const CircuitEvent& e : m.events) {
        if (e.kind != CircuitEvent::Kind::MeasureAll || !e.add_bits) continue;
        std::string existing = reg_name.empty()
                                   ? std::string("a classical register was declared explicitly")
                                   : "classical register '" + reg_name +
                                         "' was declared explicitly";
        out.push_back(detail::make_static_warning(
            m, ProblemKind::MeasAllAbuse, e.line,
            "measure_all() adds a new implicit classical register to " +
                detail::circuit_label(m) + " even though " + existing + "."));
    }
    return out;
}

inline std::vector<Warning> check_cond_wo_meas(const CircuitModel& m) {
    std::vector<Warning> out;
    // circuits with invisible content may measure internally
    if (m.content_opaque) return out;
    const auto& ev = m.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != CircuitEvent::Kind::GateApply || !ev[i].condition) continue;
        const Condition& cond = *ev[i].condition;
        if (cond.register_ref < 0) continue;
        if (m.has_opaque_before(i)) continue;
        bool satisfied = false;
        for (std::size_t j = 0; !satisfied && j < i; ++j) {
            if (ev[j].kind == CircuitEvent::Kind::Measure) {
                // a measure with an unresolved destination may write anywhere
                if (ev[j].clbit.register_ref < 0 ||
                    ev[j].clbit.register_ref == cond.register_ref) {
                    satisfied = true;
                }
            } else if (ev[j].kind == CircuitEvent::Kind::MeasureAll && !ev[j].add_bits) {
                satisfied = true;
            }
        }
        if (!satisfied) {
            std::string reg = cond.register_name.empty()
                                  ? std::string("its classical register")
                                  : "register '" + cond.register_name + "'";
            out.push_back(detail::make_static_warning(
                m, ProblemKind::CondWoMeas, ev[i].line,
                "Gate '" + ev[i].gate_name + "' on " + detail::circuit_label(m) +
                    " is conditioned on " + reg +
                    ", which no measurement writes to before this line."));
        }
    }
    return out;
}

inline std::vector<Warning> check_const_clas_bit(const CircuitModel& m) {
    std::vector<Warning> out;
    // circuits with invisible content may apply gates internally
    if (m.content_opaque) return out;
    const auto& ev = m.events;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != CircuitEvent::Kind::Measure || !ev[i].qubit.known) continue;
        if (m.has_opaque_before(i)) continue;
        const int q = ev[i].qubit.index;
        bool touched = false;
        for (std::size_t j = 0; !touched && j < i; ++j) {
            if (ev[j].kind == CircuitEvent::Kind::GateApply &&
                detail::gate_may_touch(ev[j], q)) {
                touched = true;
            }
        }
        if (!touched) {
            out.push_back(detail::make_static_warning(
                m, ProblemKind::ConstClasBit, ev[i].line,
                "Qubit " + std::to_string(q) + " of " + detail::circuit_label(m) +
                    " is measured without any prior gate, so the classical result is "
                    "constant."));
        }
    }
    return out;
}

inline std::vector<Warning> check_insuff_clas_reg(const CircuitModel& m) {
    std::vector<Warning> out;
    if (!m.num_clbits_known) return out;
    for (const CircuitEvent& e : m.events) {
        // measure_all(add_bits=True) grows the classical register
        if (e.kind == CircuitEvent::Kind::MeasureAll && e.add_bits) return out;
    }
    QubitSet measured = measured_qubits(m);
    if (!measured.complete) return out;
    const int n = static_cast<int>(measured.indices.size());
    if (n > m.num_clbits) {
        std::string text = detail::circuit_label(m) + " measures " + std::to_string(n) +
                           " qubits but declares only " + std::to_string(m.num_clbits) +
                           " classical bit" + (m.num_clbits == 1 ? "" : "s") + ".";
        text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        out.push_back(detail::make_static_warning(m, ProblemKind::InsuffClasReg,
                                                  m.creation_line, std::move(text)));
    }
    return out;
}

inline std::vector<Warning> check_oversized_circuit(const CircuitModel& m) {
    std::vector<Warning> out;
    if (!m.num_qubits_known) return out;
    QubitSet used = used_qubits(m);
    if (!used.complete) return out;
    for (int q : used.indices) {
        if (q < 0 || q >= m.num_qubits) return out;  // out-of-range use, not our problem
    }
    std::vector<int> unused;
    for (int q = 0; q < m.num_qubits; ++q) {
        if (!used.indices.count(q)) unused.push_back(q);
    }
    if (unused.empty()) return out;
    std::string list;
    for (std::size_t i = 0; i < unused.size(); ++i) {
        if (i) list += ", ";
        list += std::to_string(unused[i]);
    }
    std::string text = detail::circuit_label(m) + " declares " +
                       std::to_string(m.num_qubits) + " qubits but never uses qubit" +
                       (unused.size() == 1 ? " " : "s ") + list + ".";
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    out.push_back(detail::make_static_warning(m, ProblemKind::OversizedCircuit,
                                              m.creation_line, std::move(text)));
    return out;
}

inline std::vector<Warning> check_ghost_compose(const CircuitModel& m) {
    std::vector<Warning> out;
    for (const CircuitEvent& e : m.events) {
        if (e.kind != CircuitEvent::Kind::Compose) continue;
        if (e.result_bound || e.inplace) continue;
        out.push_back(detail::make_static_warning(
            m, ProblemKind::GhostCompose, e.line,
            "The circuit produced by compose() on " + detail::circuit_label(m) +
                " is never used; bind the result or pass inplace=True."));
    }
    return out;
}

inline std::vector<Warning> check_op_after_opt(const CircuitModel& m) {
    std::vector<Warning> out;
    if (m.origin != OriginKind::FromTranspile) return out;
    for (const CircuitEvent& e : m.events) {
        if (e.kind != CircuitEvent::Kind::GateApply) continue;
        out.push_back(detail::make_static_warning(
            m, ProblemKind::OpAfterOpt, e.line,
            "Gate '" + e.gate_name + "' modifies " + detail::circuit_label(m) +
                " after transpilation; the optimized circuit should not be changed."));
    }
    return out;
}

inline std::vector<Warning> check_old_iden_gate(const CircuitModel& m) {
    std::vector<Warning> out;
    for (const CircuitEvent& e : m.events) {
        if (e.kind != CircuitEvent::Kind::GateApply || e.gate_name != "iden") continue;
        out.push_back(detail::make_static_warning(
            m, ProblemKind::OldIdenGate, e.line,
            "'iden' was removed from the QuantumCircuit API; use 'id' instead."));
    }
    return out;
}

inline std::vector<Warning> run_check(const CircuitModel& m, ProblemKind kind) {
    switch (kind) {
        case ProblemKind::DoubleMeas: return check_double_meas(m);
        case ProblemKind::OpAfterMeas: return check_op_after_meas(m);
        case ProblemKind::MeasAllAbuse: return check_meas_all_abuse(m);
        case ProblemKind::CondWoMeas: return check_cond_wo_meas(m);
        case ProblemKind::ConstClasBit: return check_const_clas_bit(m);
        case ProblemKind::InsuffClasReg: return check_insuff_clas_reg(m);
        case ProblemKind::OversizedCircuit: return check_oversized_circuit(m);
        case ProblemKind::GhostCompose: return check_ghost_compose(m);
        case ProblemKind::OpAfterOpt: return check_op_after_opt(m);
        case ProblemKind::OldIdenGate: return check_old_iden_gate(m);
    }
    return {};
}

inline void sort_warnings(std::vector<Warning>& warnings) {
    std::sort(warnings.begin(), warnings.end(), [](const Warning& a, const Warning& b) {
        if (a.file != b.file) return a.file < b.file;
        if (a.line != b.line) return a.line < b.line;
        const auto an = problem_name(a.problem);
        const auto bn = problem_name(b.problem);
        if (an != bn) return an < bn;
        if (a.snippet != b.snippet) return a.snippet < b.snippet;
        return a.explanation < b.explanation;
    });
}

inline std::vector<Warning> run_all_checks(const std::vector<CircuitModel>& models,
                                           const std::set<ProblemKind>& enabled) {
    std::vector<Warning> out;
    for (const CircuitModel& m : models) {
        for (ProblemKind kind : kAllProblems) {
            if (!enabled.count(kind)) continue;
            std::vector<Warning> ws = run_check(m, kind);
            out.insert(out.end(), std::make_move_iterator(ws.begin()),
                       std::make_move_iterator(ws.end()));
        }
    }
    sort_warnings(out);
    return out;
}

inline std::set<ProblemKind> all_problem_kinds() {
    return {kAllProblems.begin(), kAllProblems.end()};
}

}  // namespace qulint
