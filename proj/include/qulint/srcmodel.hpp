#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qulint {

/// Expression node of the lowered statement tree. Call nodes keep positional
/// order and keyword names verbatim; anything outside the modeled subset
/// lowers to Unresolved with its source line intact.
struct Expr {
    enum class Kind {
        Ident,       // text = identifier
        Attribute,   // children[0] = base, text = attribute name
        Call,        // children[0] = callee, then positional args, then kwarg values
        IntLit,      // int_value
        StrLit,      // text = value
        BoolLit,     // int_value = 0/1
        Tuple,       // children = elements
        ListLit,     // children = elements
        Subscript,   // children[0] = base, children[1] = index
        Unresolved,
    };

    Kind kind = Kind::Unresolved;
    int line = 0;
    std::string text;
    long long int_value = 0;
    std::vector<Expr> children;
    // Call only: children layout is [callee, pos args..., kwarg values...].
    std::size_t positional_count = 0;
    std::vector<std::string> kwarg_names;

    bool is_call() const { return kind == Kind::Call; }
    const Expr& callee() const { return children.front(); }
    std::size_t arg_count() const { return positional_count; }
    const Expr& arg(std::size_t i) const { return children[1 + i]; }
    const Expr* kwarg(const std::string& name) const {
        for (std::size_t i = 0; i < kwarg_names.size(); ++i) {
            if (kwarg_names[i] == name) return &children[1 + positional_count + i];
        }
        return nullptr;
    }
};

struct Stmt {
    enum class Kind { Assign, ExprCall, For, While, If, FuncDef, Import, Other };

    Kind kind = Kind::Other;
    int start_line = 0;
    int end_line = 0;
    std::vector<Expr> targets;      // Assign
    std::optional<Expr> value;      // Assign value or ExprCall call
    std::string name;               // FuncDef
    std::vector<Stmt> body;         // For/While/FuncDef body, If then-branch
    std::vector<Stmt> orelse;       // If else-branch
};

struct SourceModule {
    std::string path;
    std::string text;
    std::vector<Stmt> statements;
    int line_count = 0;
};

namespace detail {

inline void dump_expr(const Expr& e, std::ostringstream& out) {
    switch (e.kind) {
        case Expr::Kind::Ident: out << e.text; break;
        case Expr::Kind::Attribute:
            dump_expr(e.children[0], out);
            out << '.' << e.text;
            break;
        case Expr::Kind::Call: {
            dump_expr(e.children[0], out);
            out << '(';
            for (std::size_t i = 0; i < e.positional_count; ++i) {
                if (i) out << ", ";
                dump_expr(e.children[1 + i], out);
            }
            for (std::size_t i = 0; i < e.kwarg_names.size(); ++i) {
                if (i || e.positional_count) out << ", ";
                out << e.kwarg_names[i] << '=';
                dump_expr(e.children[1 + e.positional_count + i], out);
            }
            out << ')';
            break;
        }
        case Expr::Kind::IntLit: out << e.int_value; break;
        case Expr::Kind::StrLit: out << '\'' << e.text << '\''; break;
        case Expr::Kind::BoolLit: out << (e.int_value ? "True" : "False"); break;
        case Expr::Kind::Tuple:
        case Expr::Kind::ListLit: {
            out << (e.kind == Expr::Kind::Tuple ? '(' : '[');
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out << ", ";
                dump_expr(e.children[i], out);
            }
            out << (e.kind == Expr::Kind::Tuple ? ')' : ']');
            break;
        }
        case Expr::Kind::Subscript:
            dump_expr(e.children[0], out);
            out << '[';
            dump_expr(e.children[1], out);
            out << ']';
            break;
        case Expr::Kind::Unresolved: out << "<?>"; break;
    }
}

inline void dump_stmt(const Stmt& s, std::ostringstream& out, int depth) {
    for (int i = 0; i < depth; ++i) out << "  ";
    out << s.start_line << '-' << s.end_line << ' ';
    switch (s.kind) {
        case Stmt::Kind::Assign: {
            out << "Assign ";
            for (std::size_t i = 0; i < s.targets.size(); ++i) {
                if (i) out << ", ";
                dump_expr(s.targets[i], out);
            }
            out << " = ";
            if (s.value) dump_expr(*s.value, out);
            out << '\n';
            break;
        }
        case Stmt::Kind::ExprCall:
            out << "ExprCall ";
            if (s.value) dump_expr(*s.value, out);
            out << '\n';
            break;
        case Stmt::Kind::For: out << "For\n"; break;
        case Stmt::Kind::While: out << "While\n"; break;
        case Stmt::Kind::If: out << "If\n"; break;
        case Stmt::Kind::FuncDef: out << "FuncDef " << s.name << '\n'; break;
        case Stmt::Kind::Import: out << "Import\n"; break;
        case Stmt::Kind::Other: out << "Other\n"; break;
    }
    for (const Stmt& c : s.body) dump_stmt(c, out, depth + 1);
    if (!s.orelse.empty()) {
        for (int i = 0; i < depth; ++i) out << "  ";
        out << "else:\n";
        for (const Stmt& c : s.orelse) dump_stmt(c, out, depth + 1);
    }
}

}  // namespace detail

/// Canonical text rendering of the statement tree, used by determinism tests.
inline std::string dump_module(const SourceModule& m) {
    std::ostringstream out;
    out << m.path << " lines=" << m.line_count << '\n';
    for (const Stmt& s : m.statements) detail::dump_stmt(s, out, 1);
    return out.str();
}

}  // namespace qulint
