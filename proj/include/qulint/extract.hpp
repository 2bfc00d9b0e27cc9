#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qulint/circuit.hpp"
#include "qulint/srcmodel.hpp"
#include "qulint/textutil.hpp"
#include "qulint/vocab.hpp"

namespace qulint {

namespace detail {

// Single-pass abstract interpretation of the statement tree. Policy:
// intraprocedural (module scope plus each function body independently), loop
// bodies interpreted once, both arms of a conditional interpreted with events
// tagged by branch context, aliasing only through plain `a = b` assignments.
class CircuitExtractor {
public:
    CircuitExtractor(const SourceModule& module, const Vocabulary& vocab)
        : module_(module), vocab_(vocab) {}

    std::vector<CircuitModel> run() {
        walk(module_.statements, {});
        for (const Stmt& s : module_.statements) {
            collect_function_bodies(s);
        }
        const auto views = split_lines(module_.text);
        auto lines = std::make_shared<const std::vector<std::string>>(views.begin(),
                                                                      views.end());
        for (CircuitModel& m : models_) {
            m.file = module_.path;
            m.source_lines = lines;
        }
        return std::move(models_);
    }

private:
    struct Binding {
        enum class Kind { None, Circuit, Register };
        Kind kind = Kind::None;
        int index = -1;
    };

    struct DeclaredRegister {
        RegisterDecl decl;
    };

    struct CallOutcome {
        enum class Kind { Plain, Gate, Compose, Transpile };
        Kind kind = Kind::Plain;
        int model = -1;
        std::size_t event_index = 0;
    };

    const SourceModule& module_;
    const Vocabulary& vocab_;
    std::vector<CircuitModel> models_;
    // Per-model mapping from declared-register id to CircuitModel::registers index.
    std::vector<std::map<int, int>> model_register_index_;
    std::vector<DeclaredRegister> declared_registers_;
    std::unordered_map<std::string, Binding> env_;
    int next_branch_id_ = 0;

    // ---- statement walk ----

    void walk(const std::vector<Stmt>& stmts, const PathContext& ctx) {
        for (const Stmt& s : stmts) {
            switch (s.kind) {
                case Stmt::Kind::Assign:
                    handle_assign(s, ctx);
                    break;
                case Stmt::Kind::ExprCall:
                    if (s.value) eval_effects(*s.value, false, ctx);
                    break;
                case Stmt::Kind::For:
                case Stmt::Kind::While:
                    walk(s.body, ctx);
                    break;
                case Stmt::Kind::If: {
                    const int branch = next_branch_id_++;
                    PathContext then_ctx = ctx;
                    then_ctx.emplace_back(branch, 0);
                    walk(s.body, then_ctx);
                    PathContext else_ctx = ctx;
                    else_ctx.emplace_back(branch, 1);
                    walk(s.orelse, else_ctx);
                    break;
                }
                case Stmt::Kind::FuncDef:
                    // analyzed independently afterwards
                    break;
                case Stmt::Kind::Import:
                case Stmt::Kind::Other:
                    break;
            }
        }
    }

    void collect_function_bodies(const Stmt& s) {
        if (s.kind == Stmt::Kind::FuncDef) {
            auto saved_env = std::move(env_);
            env_.clear();
            walk(s.body, {});
            env_ = std::move(saved_env);
        }
        for (const Stmt& c : s.body) collect_function_bodies(c);
        for (const Stmt& c : s.orelse) collect_function_bodies(c);
    }

    // ---- bindings ----

    Binding lookup(const std::string& name) const {
        auto it = env_.find(name);
        return it == env_.end() ? Binding{} : it->second;
    }

    const CircuitModel* circuit_of(const Expr& e) const {
        if (e.kind != Expr::Kind::Ident) return nullptr;
        Binding b = lookup(e.text);
        if (b.kind != Binding::Kind::Circuit) return nullptr;
        return &models_[static_cast<std::size_t>(b.index)];
    }

    void bind_targets(const std::vector<Expr>& targets, Binding binding) {
        for (const Expr& t : targets) {
            if (t.kind == Expr::Kind::Ident) {
                env_[t.text] = binding;
            } else if (t.kind == Expr::Kind::Tuple || t.kind == Expr::Kind::ListLit) {
                for (const Expr& c : t.children) {
                    if (c.kind == Expr::Kind::Ident) env_[c.text] = Binding{};
                }
            }
        }
    }

    // ---- assignment forms ----

    void handle_assign(const Stmt& s, const PathContext& ctx) {
        if (!s.value) return;
        const Expr& value = *s.value;

        // Plain alias: both names refer to the same model.
        if (value.kind == Expr::Kind::Ident) {
            bind_targets(s.targets, lookup(value.text));
            return;
        }

        CallOutcome outcome = eval_effects(value, true, ctx);

        if (value.is_call()) {
            const Expr& callee = value.callee();
            const bool plausible_ctor =
                callee.kind == Expr::Kind::Ident ||
                (callee.kind == Expr::Kind::Attribute &&
                 callee.children[0].kind != Expr::Kind::Call);
            if (plausible_ctor) {
                const std::string& name = callee.text;
                if (vocab_.circuit_constructors.count(name) && is_constructor_path(callee)) {
                    int id = make_constructed_circuit(value, target_name(s), s.start_line);
                    bind_targets(s.targets, Binding{Binding::Kind::Circuit, id});
                    return;
                }
                if ((vocab_.quantum_register_constructors.count(name) ||
                     vocab_.classical_register_constructors.count(name)) &&
                    is_constructor_path(callee)) {
                    int id = make_register(value, target_name(s), s.start_line);
                    bind_targets(s.targets, Binding{Binding::Kind::Register, id});
                    return;
                }
            }
        }

        if (outcome.kind == CallOutcome::Kind::Transpile) {
            int id = make_derived_circuit(OriginKind::FromTranspile, outcome.model,
                                          target_name(s), value.line);
            if (outcome.model >= 0) {
                models_[static_cast<std::size_t>(outcome.model)]
                    .events[outcome.event_index]
                    .result_circuit = id;
            }
            bind_targets(s.targets, Binding{Binding::Kind::Circuit, id});
            return;
        }
        if (outcome.kind == CallOutcome::Kind::Compose && outcome.model >= 0) {
            const CircuitEvent& ev =
                models_[static_cast<std::size_t>(outcome.model)].events[outcome.event_index];
            if (!ev.inplace) {
                int id = make_derived_circuit(OriginKind::FromCompose, outcome.model,
                                              target_name(s), value.line);
                if (ev.other_circuit >= 0) {
                    models_[static_cast<std::size_t>(id)].origin_parents.push_back(ev.other_circuit);
                }
                bind_targets(s.targets, Binding{Binding::Kind::Circuit, id});
                return;
            }
        }

        bind_targets(s.targets, Binding{});
    }

    static std::string target_name(const Stmt& s) {
        for (const Expr& t : s.targets) {
            if (t.kind == Expr::Kind::Ident) return t.text;
        }
        return "";
    }

    // Constructor recognition matches the last attribute component so that
    // qualified forms like qiskit.QuantumCircuit(...) resolve. A plain name
    // shadowed by a local binding is not a constructor.
    bool is_constructor_path(const Expr& callee) const {
        if (callee.kind == Expr::Kind::Ident) {
            return lookup(callee.text).kind == Binding::Kind::None;
        }
        return callee.kind == Expr::Kind::Attribute;
    }

    // ---- circuit and register construction ----

    int make_register(const Expr& call, const std::string& var_name, int line) {
        RegisterDecl decl;
        decl.kind = vocab_.classical_register_constructors.count(call.callee().text)
                        ? RegKind::Classical
                        : RegKind::Quantum;
        decl.name = var_name;
        decl.decl_line = line;
        const Expr* size_expr = call.arg_count() >= 1 ? &call.arg(0) : call.kwarg("size");
        if (size_expr && size_expr->kind == Expr::Kind::IntLit && size_expr->int_value >= 0) {
            decl.size_known = true;
            decl.size = static_cast<int>(size_expr->int_value);
        }
        declared_registers_.push_back(DeclaredRegister{decl});
        return static_cast<int>(declared_registers_.size() - 1);
    }

    int make_constructed_circuit(const Expr& call, const std::string& var_name, int line) {
        CircuitModel m;
        m.id = static_cast<int>(models_.size());
        m.var_name = var_name;
        m.creation_line = line;
        std::map<int, int> reg_index;

        bool poisoned = false;
        int int_args_seen = 0;
        for (std::size_t i = 0; i < call.arg_count(); ++i) {
            const Expr& a = call.arg(i);
            if (a.kind == Expr::Kind::IntLit && a.int_value >= 0) {
                RegisterDecl decl;
                decl.kind = int_args_seen == 0 ? RegKind::Quantum : RegKind::Classical;
                decl.size_known = true;
                decl.size = static_cast<int>(a.int_value);
                decl.decl_line = line;
                if (int_args_seen >= 2) poisoned = true;
                if (decl.size > 0) m.registers.push_back(decl);
                ++int_args_seen;
            } else if (a.kind == Expr::Kind::Ident &&
                       lookup(a.text).kind == Binding::Kind::Register) {
                int reg_id = lookup(a.text).index;
                reg_index[reg_id] = static_cast<int>(m.registers.size());
                m.registers.push_back(declared_registers_[static_cast<std::size_t>(reg_id)].decl);
            } else if (a.is_call() &&
                       (vocab_.quantum_register_constructors.count(a.callee().text) ||
                        vocab_.classical_register_constructors.count(a.callee().text))) {
                int reg_id = make_register(a, "", a.line);
                reg_index[reg_id] = static_cast<int>(m.registers.size());
                m.registers.push_back(declared_registers_[static_cast<std::size_t>(reg_id)].decl);
            } else if (a.kind == Expr::Kind::StrLit) {
                // positional name, no size effect
            } else {
                poisoned = true;
            }
        }

        int nq = 0;
        int nc = 0;
        bool nq_known = true;
        bool nc_known = true;
        for (const RegisterDecl& r : m.registers) {
            bool& known = r.kind == RegKind::Quantum ? nq_known : nc_known;
            int& total = r.kind == RegKind::Quantum ? nq : nc;
            if (r.size_known) {
                total += r.size;
            } else {
                known = false;
            }
        }
        m.num_qubits_known = nq_known && !poisoned;
        m.num_qubits = nq;
        m.num_clbits_known = nc_known && !poisoned;
        m.num_clbits = nc;

        models_.push_back(std::move(m));
        model_register_index_.push_back(std::move(reg_index));
        return static_cast<int>(models_.size() - 1);
    }

    int make_derived_circuit(OriginKind origin, int parent, const std::string& var_name,
                             int line) {
        CircuitModel m;
        m.id = static_cast<int>(models_.size());
        m.var_name = var_name;
        m.creation_line = line;
        m.origin = origin;
        m.content_opaque = true;
        std::map<int, int> reg_index;
        if (parent >= 0) {
            m.origin_parents.push_back(parent);
            if (origin == OriginKind::FromCompose) {
                const CircuitModel& p = models_[static_cast<std::size_t>(parent)];
                m.num_qubits_known = p.num_qubits_known;
                m.num_qubits = p.num_qubits;
                m.num_clbits_known = p.num_clbits_known;
                m.num_clbits = p.num_clbits;
                m.registers = p.registers;
                reg_index = model_register_index_[static_cast<std::size_t>(parent)];
            }
        }
        models_.push_back(std::move(m));
        model_register_index_.push_back(std::move(reg_index));
        return static_cast<int>(models_.size() - 1);
    }

    // ---- expression effects ----

    // Walks an expression, recording circuit events for recognized calls.
    // `consumed` is false only for a top-level bare expression statement; it
    // feeds the Compose result_bound field.
    CallOutcome eval_effects(const Expr& e, bool consumed, const PathContext& ctx) {
        if (!e.is_call()) {
            for (const Expr& c : e.children) eval_effects(c, true, ctx);
            return {};
        }

        const Expr& callee = e.callee();
        if (callee.kind == Expr::Kind::Attribute) {
            const Expr& base = callee.children[0];
            const std::string& method = callee.text;

            if (base.is_call()) {
                CallOutcome inner = eval_effects(base, true, ctx);
                if (inner.kind == CallOutcome::Kind::Gate && vocab_.condition_methods.count(method)) {
                    attach_condition(inner, e);
                    return {};
                }
                walk_args(e, ctx);
                return {};
            }

            if (base.kind == Expr::Kind::Ident &&
                lookup(base.text).kind == Binding::Kind::Circuit) {
                walk_args(e, ctx);
                return dispatch_method(lookup(base.text).index, method, e, consumed, ctx);
            }

            // unknown receiver: ignore the call, still walk nested arguments
            eval_effects(base, true, ctx);
            walk_args(e, ctx);
            return {};
        }

        if (callee.kind == Expr::Kind::Ident && vocab_.transpile_functions.count(callee.text) &&
            lookup(callee.text).kind == Binding::Kind::None) {
            walk_args(e, ctx);
            int parent = -1;
            if (e.arg_count() >= 1) {
                if (const CircuitModel* m = circuit_of(e.arg(0))) parent = m->id;
            }
            CallOutcome out;
            out.kind = CallOutcome::Kind::Transpile;
            out.model = parent;
            if (parent >= 0) {
                CircuitEvent ev;
                ev.kind = CircuitEvent::Kind::Transpile;
                ev.line = e.line;
                ev.path = ctx;
                out.event_index = append_event(parent, std::move(ev));
            }
            return out;
        }

        walk_args(e, ctx);
        return {};
    }

    void walk_args(const Expr& call, const PathContext& ctx) {
        for (std::size_t i = 1; i < call.children.size(); ++i) {
            eval_effects(call.children[i], true, ctx);
        }
    }

    std::size_t append_event(int model, CircuitEvent ev) {
        auto& events = models_[static_cast<std::size_t>(model)].events;
        events.push_back(std::move(ev));
        return events.size() - 1;
    }

    CallOutcome dispatch_method(int model_id, const std::string& method, const Expr& call,
                                bool consumed, const PathContext& ctx) {
        CircuitModel& model = models_[static_cast<std::size_t>(model_id)];

        if (vocab_.is_gate(method)) {
            CircuitEvent ev;
            ev.kind = CircuitEvent::Kind::GateApply;
            ev.line = call.line;
            ev.path = ctx;
            ev.gate_name = method;
            const int skip = vocab_.gate_leading_params(method);
            for (std::size_t i = static_cast<std::size_t>(skip); i < call.arg_count(); ++i) {
                append_qubit_refs(model_id, call.arg(i), ev.qubits);
            }
            CallOutcome out;
            out.kind = CallOutcome::Kind::Gate;
            out.model = model_id;
            out.event_index = append_event(model_id, std::move(ev));
            return out;
        }

        if (vocab_.measure_methods.count(method)) {
            record_measure(model_id, call, ctx);
            return {};
        }

        if (vocab_.measure_all_methods.count(method)) {
            CircuitEvent ev;
            ev.kind = CircuitEvent::Kind::MeasureAll;
            ev.line = call.line;
            ev.path = ctx;
            if (const Expr* ab = call.kwarg("add_bits")) {
                if (ab->kind == Expr::Kind::BoolLit) ev.add_bits = ab->int_value != 0;
            }
            append_event(model_id, std::move(ev));
            return {};
        }

        if (vocab_.reset_methods.count(method)) {
            CircuitEvent ev;
            ev.kind = CircuitEvent::Kind::Reset;
            ev.line = call.line;
            ev.path = ctx;
            std::vector<QubitRef> refs;
            if (call.arg_count() >= 1) {
                append_qubit_refs(model_id, call.arg(0), refs);
            }
            if (refs.size() == 1) {
                ev.qubit = refs[0];
            } else if (!refs.empty()) {
                // multi-qubit reset: one event per qubit
                for (const QubitRef& q : refs) {
                    CircuitEvent each = ev;
                    each.qubit = q;
                    append_event(model_id, std::move(each));
                }
                return {};
            }
            append_event(model_id, std::move(ev));
            return {};
        }

        if (vocab_.compose_methods.count(method)) {
            CircuitEvent ev;
            ev.kind = CircuitEvent::Kind::Compose;
            ev.line = call.line;
            ev.path = ctx;
            ev.result_bound = consumed;
            if (call.arg_count() >= 1) {
                if (const CircuitModel* other = circuit_of(call.arg(0))) {
                    ev.other_circuit = other->id;
                }
            }
            if (const Expr* ip = call.kwarg("inplace")) {
                if (ip->kind == Expr::Kind::BoolLit) ev.inplace = ip->int_value != 0;
            }
            const bool inplace = ev.inplace;
            CallOutcome out;
            out.kind = CallOutcome::Kind::Compose;
            out.model = model_id;
            out.event_index = append_event(model_id, std::move(ev));
            if (inplace) {
                // foreign operations merged in; usage info is no longer complete
                CircuitModel& m = models_[static_cast<std::size_t>(model_id)];
                m.opaque_marks.push_back(m.events.size());
            }
            return out;
        }

        if (vocab_.neutral_methods.count(method)) {
            return {};
        }

        model.opaque_marks.push_back(model.events.size());
        return {};
    }

    void record_measure(int model_id, const Expr& call, const PathContext& ctx) {
        std::vector<QubitRef> qubits;
        std::vector<ClbitRef> clbits;
        if (call.arg_count() >= 1) append_qubit_refs(model_id, call.arg(0), qubits);
        if (call.arg_count() >= 2) append_clbit_refs(model_id, call.arg(1), clbits);
        if (qubits.empty()) qubits.push_back(QubitRef::unknown());
        if (clbits.empty()) clbits.push_back(ClbitRef{});

        const std::size_t n = std::max(qubits.size(), clbits.size());
        for (std::size_t i = 0; i < n; ++i) {
            CircuitEvent ev;
            ev.kind = CircuitEvent::Kind::Measure;
            ev.line = call.line;
            ev.path = ctx;
            ev.qubit = i < qubits.size() ? qubits[i] : QubitRef::unknown();
            ev.clbit = i < clbits.size() ? clbits[i] : ClbitRef{};
            append_event(model_id, std::move(ev));
        }
    }

    void attach_condition(const CallOutcome& gate, const Expr& cond_call) {
        CircuitEvent& ev =
            models_[static_cast<std::size_t>(gate.model)].events[gate.event_index];
        Condition cond;
        if (cond_call.arg_count() >= 1) {
            const Expr& reg = cond_call.arg(0);
            if (reg.kind == Expr::Kind::Ident) {
                cond.register_ref = model_register_index_of(gate.model, reg.text);
                cond.register_name = reg.text;
            } else if (reg.kind == Expr::Kind::Subscript &&
                       reg.children[0].kind == Expr::Kind::Ident) {
                cond.register_ref = model_register_index_of(gate.model, reg.children[0].text);
                cond.register_name = reg.children[0].text;
            } else if (reg.kind == Expr::Kind::IntLit) {
                cond.register_ref =
                    register_of_flat_clbit(gate.model, static_cast<int>(reg.int_value));
                const CircuitModel& m = models_[static_cast<std::size_t>(gate.model)];
                if (cond.register_ref >= 0) {
                    cond.register_name =
                        m.registers[static_cast<std::size_t>(cond.register_ref)].name;
                }
            }
        }
        if (cond_call.arg_count() >= 2 && cond_call.arg(1).kind == Expr::Kind::IntLit) {
            cond.value_known = true;
            cond.value = cond_call.arg(1).int_value;
        }
        ev.condition = cond;
    }

    // ---- reference resolution ----

    int model_register_index_of(int model_id, const std::string& name) const {
        Binding b = lookup(name);
        if (b.kind != Binding::Kind::Register) return -1;
        const auto& map = model_register_index_[static_cast<std::size_t>(model_id)];
        auto it = map.find(b.index);
        return it == map.end() ? -1 : it->second;
    }

    // Flat offset of a model register among registers of its kind; -1 when a
    // preceding register has unknown size.
    int register_offset(const CircuitModel& m, int reg_index) const {
        int offset = 0;
        for (int i = 0; i < reg_index; ++i) {
            const RegisterDecl& r = m.registers[static_cast<std::size_t>(i)];
            if (r.kind != m.registers[static_cast<std::size_t>(reg_index)].kind) continue;
            if (!r.size_known) return -1;
            offset += r.size;
        }
        return offset;
    }

    int register_of_flat_clbit(int model_id, int flat) const {
        const CircuitModel& m = models_[static_cast<std::size_t>(model_id)];
        int cursor = 0;
        for (std::size_t i = 0; i < m.registers.size(); ++i) {
            const RegisterDecl& r = m.registers[i];
            if (r.kind != RegKind::Classical) continue;
            if (!r.size_known) return -1;
            if (flat < cursor + r.size) return static_cast<int>(i);
            cursor += r.size;
        }
        return -1;
    }

    void append_qubit_refs(int model_id, const Expr& e, std::vector<QubitRef>& out) const {
        if (e.kind == Expr::Kind::ListLit || e.kind == Expr::Kind::Tuple) {
            for (const Expr& c : e.children) out.push_back(resolve_qubit(model_id, c));
            return;
        }
        out.push_back(resolve_qubit(model_id, e));
    }

    QubitRef resolve_qubit(int model_id, const Expr& e) const {
        if (e.kind == Expr::Kind::IntLit && e.int_value >= 0) {
            return QubitRef::of(static_cast<int>(e.int_value));
        }
        if (e.kind == Expr::Kind::Subscript && e.children[0].kind == Expr::Kind::Ident &&
            e.children[1].kind == Expr::Kind::IntLit) {
            int reg_index = model_register_index_of(model_id, e.children[0].text);
            if (reg_index >= 0) {
                const CircuitModel& m = models_[static_cast<std::size_t>(model_id)];
                if (m.registers[static_cast<std::size_t>(reg_index)].kind == RegKind::Quantum) {
                    int offset = register_offset(m, reg_index);
                    if (offset >= 0) {
                        return QubitRef::of(offset + static_cast<int>(e.children[1].int_value));
                    }
                }
            }
        }
        return QubitRef::unknown();
    }

    void append_clbit_refs(int model_id, const Expr& e, std::vector<ClbitRef>& out) const {
        if (e.kind == Expr::Kind::ListLit || e.kind == Expr::Kind::Tuple) {
            for (const Expr& c : e.children) out.push_back(resolve_clbit(model_id, c));
            return;
        }
        out.push_back(resolve_clbit(model_id, e));
    }

    ClbitRef resolve_clbit(int model_id, const Expr& e) const {
        ClbitRef ref;
        if (e.kind == Expr::Kind::IntLit && e.int_value >= 0) {
            ref.known = true;
            ref.index = static_cast<int>(e.int_value);
            ref.register_ref = register_of_flat_clbit(model_id, ref.index);
            return ref;
        }
        if (e.kind == Expr::Kind::Subscript && e.children[0].kind == Expr::Kind::Ident) {
            int reg_index = model_register_index_of(model_id, e.children[0].text);
            if (reg_index >= 0) {
                const CircuitModel& m = models_[static_cast<std::size_t>(model_id)];
                if (m.registers[static_cast<std::size_t>(reg_index)].kind == RegKind::Classical) {
                    ref.register_ref = reg_index;
                    if (e.children[1].kind == Expr::Kind::IntLit) {
                        int offset = register_offset(m, reg_index);
                        if (offset >= 0) {
                            ref.known = true;
                            ref.index = offset + static_cast<int>(e.children[1].int_value);
                        }
                    }
                }
            }
        }
        return ref;
    }
};

}  // namespace detail

/// Builds one CircuitModel per circuit-producing binding in the module.
/// Unknown constructs degrade to Unknown fields; extraction never fails.
inline std::vector<CircuitModel> extract_circuits(const SourceModule& module,
                                                  const Vocabulary& vocab) {
    detail::CircuitExtractor extractor(module, vocab);
    return extractor.run();
}

inline std::vector<CircuitModel> extract_circuits(const SourceModule& module) {
    static const Vocabulary vocab = default_vocabulary();
    return extract_circuits(module, vocab);
}

}  // namespace qulint
