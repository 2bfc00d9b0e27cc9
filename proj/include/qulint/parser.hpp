#pragma once

#include <pybind11/embed.h>

#include <mutex>
#include <stdexcept>
#include <string>

#include "qulint/srcmodel.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

namespace py = pybind11;

/// Raised when the analyzed source is not valid Python. Callers report the
/// file as skipped; a parse failure never aborts a multi-file run.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}

    int line() const { return line_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    std::string message_;
};

namespace detail {

// The embedded interpreter is initialized once and never finalized. The
// releaser is leaked so the GIL stays available to every thread for the
// process lifetime; constructing it also initializes pybind11's internals on
// this thread, which must happen before any other thread may try to acquire
// the GIL (the first acquire would otherwise race interpreter bookkeeping).
inline void ensure_python_runtime() {
    static std::once_flag once;
    std::call_once(once, [] {
        py::initialize_interpreter();
        new py::gil_scoped_release();
    });
}

inline std::string node_type(const py::handle& node) {
    return py::str(node.attr("__class__").attr("__name__"));
}

inline int node_line(const py::handle& node) {
    if (py::hasattr(node, "lineno")) return node.attr("lineno").cast<int>();
    return 0;
}

inline Expr lower_expr(const py::handle& node);

inline void lower_call_args(const py::handle& node, Expr& call) {
    for (auto arg : node.attr("args")) {
        call.children.push_back(lower_expr(arg));
        ++call.positional_count;
    }
    for (auto kw : node.attr("keywords")) {
        py::object arg_name = kw.attr("arg");
        // **kwargs expansion has arg == None; keep the value, mark the name.
        call.kwarg_names.push_back(arg_name.is_none() ? std::string("**") : arg_name.cast<std::string>());
        call.children.push_back(lower_expr(kw.attr("value")));
    }
}

inline Expr lower_expr(const py::handle& node) {
    Expr e;
    e.line = node_line(node);
    const std::string type = node_type(node);
    if (type == "Name") {
        e.kind = Expr::Kind::Ident;
        e.text = node.attr("id").cast<std::string>();
    } else if (type == "Attribute") {
        e.kind = Expr::Kind::Attribute;
        e.text = node.attr("attr").cast<std::string>();
        e.children.push_back(lower_expr(node.attr("value")));
    } else if (type == "Call") {
        e.kind = Expr::Kind::Call;
        e.children.push_back(lower_expr(node.attr("func")));
        lower_call_args(node, e);
    } else if (type == "Constant") {
        py::object v = node.attr("value");
        if (py::isinstance<py::bool_>(v)) {
            e.kind = Expr::Kind::BoolLit;
            e.int_value = v.cast<bool>() ? 1 : 0;
        } else if (py::isinstance<py::int_>(v)) {
            int overflow = 0;
            const long long value = PyLong_AsLongLongAndOverflow(v.ptr(), &overflow);
            if (overflow == 0 && !PyErr_Occurred()) {
                e.kind = Expr::Kind::IntLit;
                e.int_value = value;
            } else {
                PyErr_Clear();  // out-of-range integer literal
            }
        } else if (py::isinstance<py::str>(v)) {
            e.kind = Expr::Kind::StrLit;
            e.text = v.cast<std::string>();
        }
    } else if (type == "Tuple" || type == "List") {
        e.kind = type == "Tuple" ? Expr::Kind::Tuple : Expr::Kind::ListLit;
        for (auto elt : node.attr("elts")) e.children.push_back(lower_expr(elt));
    } else if (type == "Subscript") {
        e.kind = Expr::Kind::Subscript;
        e.children.push_back(lower_expr(node.attr("value")));
        e.children.push_back(lower_expr(node.attr("slice")));
    } else if (type == "UnaryOp" && node_type(node.attr("op")) == "USub") {
        Expr inner = lower_expr(node.attr("operand"));
        if (inner.kind == Expr::Kind::IntLit) {
            e.kind = Expr::Kind::IntLit;
            e.int_value = -inner.int_value;
        }
    }
    return e;
}

inline Stmt lower_stmt(const py::handle& node);

inline std::vector<Stmt> lower_body(const py::handle& body) {
    std::vector<Stmt> out;
    for (auto stmt : body) out.push_back(lower_stmt(stmt));
    return out;
}

inline Stmt lower_stmt(const py::handle& node) {
    Stmt s;
    s.start_line = node_line(node);
    s.end_line = py::hasattr(node, "end_lineno") && !node.attr("end_lineno").is_none()
                     ? node.attr("end_lineno").cast<int>()
                     : s.start_line;
    const std::string type = node_type(node);
    if (type == "Assign") {
        s.kind = Stmt::Kind::Assign;
        for (auto t : node.attr("targets")) s.targets.push_back(lower_expr(t));
        s.value = lower_expr(node.attr("value"));
    } else if (type == "AnnAssign" && !node.attr("value").is_none()) {
        s.kind = Stmt::Kind::Assign;
        s.targets.push_back(lower_expr(node.attr("target")));
        s.value = lower_expr(node.attr("value"));
    } else if (type == "Expr" && node_type(node.attr("value")) == "Call") {
        s.kind = Stmt::Kind::ExprCall;
        s.value = lower_expr(node.attr("value"));
    } else if (type == "For" || type == "AsyncFor") {
        s.kind = Stmt::Kind::For;
        s.body = lower_body(node.attr("body"));
        for (Stmt& st : lower_body(node.attr("orelse"))) s.body.push_back(std::move(st));
    } else if (type == "While") {
        s.kind = Stmt::Kind::While;
        s.body = lower_body(node.attr("body"));
        for (Stmt& st : lower_body(node.attr("orelse"))) s.body.push_back(std::move(st));
    } else if (type == "If") {
        s.kind = Stmt::Kind::If;
        s.body = lower_body(node.attr("body"));
        s.orelse = lower_body(node.attr("orelse"));
    } else if (type == "FunctionDef" || type == "AsyncFunctionDef") {
        s.kind = Stmt::Kind::FuncDef;
        s.name = node.attr("name").cast<std::string>();
        s.body = lower_body(node.attr("body"));
    } else if (type == "Import" || type == "ImportFrom") {
        s.kind = Stmt::Kind::Import;
    }
    return s;
}

}  // namespace detail

/// Parses Python source into the lowered statement tree. The full CPython
/// grammar does the parsing; only the modeled statement subset is kept and
/// everything else becomes Other with correct spans.
inline SourceModule parse_source(const std::string& path, const std::string& text) {
    detail::ensure_python_runtime();

    static std::mutex parse_mutex;
    std::lock_guard<std::mutex> lock(parse_mutex);
    py::gil_scoped_acquire gil;

    SourceModule module;
    module.path = path;
    module.text = text;
    module.line_count = count_lines(text);

    try {
        py::object ast = py::module_::import("ast");
        py::object tree = ast.attr("parse")(text);
        for (auto stmt : tree.attr("body")) {
            module.statements.push_back(detail::lower_stmt(stmt));
        }
    } catch (py::error_already_set& e) {
        int line = 1;
        std::string message = "invalid syntax";
        if (e.matches(PyExc_SyntaxError)) {
            py::object value = e.value();
            if (py::hasattr(value, "lineno") && !value.attr("lineno").is_none()) {
                line = value.attr("lineno").cast<int>();
            }
            if (py::hasattr(value, "msg") && !value.attr("msg").is_none()) {
                message = py::str(value.attr("msg"));
            }
            throw ParseError(line, message);
        }
        throw ParseError(1, std::string("parse failure: ") + e.what());
    }
    return module;
}

}  // namespace qulint
