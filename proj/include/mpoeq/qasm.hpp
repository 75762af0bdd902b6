#pragma once

// OpenQASM 2.0 subset reader/writer.
//
// Accepted grammar (statements end with ';', '//' comments run to end of line):
//   OPENQASM 2.0;                  -- optional, ignored
//   include "...";                 -- optional, ignored
//   qreg <name>[<n>];              -- exactly one
//   <gate>[(expr{,expr})] <name>[<i>]{,<name>[<i>]};
// Gate names: id x sx sxdg h rx rz rzz cz cx swap.
// Angle expressions: floats, 'pi', + - * /, unary minus, parentheses.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "mpoeq/circuit.hpp"

namespace mpoeq {

namespace qasm_detail {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char next() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
                while (!eof() && peek() != '\n') next();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                next();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    void expect(char c) {
        skip_ws();
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        next();
    }

    bool accept(char c) {
        skip_ws();
        if (!eof() && peek() == c) {
            next();
            return true;
        }
        return false;
    }

    std::string identifier() {
        skip_ws();
        if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected identifier");
        std::string s;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            s += next();
        return s;
    }

    long integer() {
        skip_ws();
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
        long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
            v = v * 10 + (next() - '0');
        return v;
    }

    double number() {
        skip_ws();
        std::size_t start = pos;
        while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                          peek() == 'e' || peek() == 'E' ||
                          ((peek() == '+' || peek() == '-') && pos > start &&
                           (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            next();
        if (pos == start) fail("expected number");
        double v = 0.0;
        auto sv = text.substr(start, pos - start);
        auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size()) fail("malformed number");
        return v;
    }
};

// expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
// factor := ['-'] ( number | 'pi' | '(' expr ')' )
inline double parse_expr(Cursor& c);

inline double parse_factor(Cursor& c) {
    c.skip_ws();
    if (c.accept('-')) return -parse_factor(c);
    if (c.accept('(')) {
        double v = parse_expr(c);
        c.expect(')');
        return v;
    }
    if (!c.eof() && (std::isalpha(static_cast<unsigned char>(c.peek())))) {
        std::string id = c.identifier();
        if (id == "pi") return std::numbers::pi;
        c.fail("unknown symbol '" + id + "' in angle expression");
    }
    return c.number();
}

inline double parse_term(Cursor& c) {
    double v = parse_factor(c);
    for (;;) {
        if (c.accept('*'))
            v *= parse_factor(c);
        else if (c.accept('/'))
            v /= parse_factor(c);
        else
            return v;
    }
}

inline double parse_expr(Cursor& c) {
    double v = parse_term(c);
    for (;;) {
        if (c.accept('+'))
            v += parse_term(c);
        else if (c.accept('-'))
            v -= parse_term(c);
        else
            return v;
    }
}

} // namespace qasm_detail

inline Circuit parse_qasm(std::string_view text) {
    using qasm_detail::Cursor;
    Cursor c{text};
    Circuit circuit;
    std::string reg_name;
    bool have_reg = false;

    for (;;) {
        c.skip_ws();
        if (c.eof()) break;
        int stmt_line = c.line, stmt_col = c.col;
        std::string head = c.identifier();

        if (head == "OPENQASM") {
            c.number();
            c.expect(';');
            continue;
        }
        if (head == "include") {
            c.skip_ws();
            if (!c.eof() && c.peek() == '"') {
                c.next();
                while (!c.eof() && c.peek() != '"') c.next();
                c.expect('"');
            }
            c.expect(';');
            continue;
        }
        if (head == "qreg") {
            if (have_reg) c.fail("only a single qreg is supported");
            reg_name = c.identifier();
            c.expect('[');
            long n = c.integer();
            c.expect(']');
            c.expect(';');
            if (n < 1) throw ParseError("qreg size must be >= 1", stmt_line, stmt_col);
            circuit.num_qubits = static_cast<int>(n);
            have_reg = true;
            continue;
        }

        auto kind = gate_kind_from_name(head);
        if (!kind) throw ParseError("unknown gate '" + head + "'", stmt_line, stmt_col);
        if (!have_reg) throw ParseError("gate statement before qreg", stmt_line, stmt_col);
        const auto& info = gate_info(*kind);

        std::vector<double> params;
        if (c.accept('(')) {
            do {
                params.push_back(qasm_detail::parse_expr(c));
            } while (c.accept(','));
            c.expect(')');
        }
        if (static_cast<int>(params.size()) != info.num_params)
            throw ParseError("gate '" + head + "' expects " + std::to_string(info.num_params) +
                                 " parameter(s)",
                             stmt_line, stmt_col);

        std::vector<int> qubits;
        do {
            std::string rn = c.identifier();
            if (rn != reg_name) c.fail("unknown register '" + rn + "'");
            c.expect('[');
            long q = c.integer();
            c.expect(']');
            if (q < 0 || q >= circuit.num_qubits)
                throw ParseError("qubit index " + std::to_string(q) + " out of range", stmt_line,
                                 stmt_col);
            qubits.push_back(static_cast<int>(q));
        } while (c.accept(','));
        c.expect(';');

        circuit.gates.push_back(make_gate(*kind, std::move(qubits), std::move(params)));
    }

    if (!have_reg) throw ParseError("missing qreg declaration", c.line, c.col);
    return circuit;
}

inline std::string emit_qasm(const Circuit& c) {
    c.validate();
    std::string out = "OPENQASM 2.0;\nqreg q[" + std::to_string(c.num_qubits) + "];\n";
    char buf[64];
    for (const auto& g : c.gates) {
        out += gate_info(g.kind).name;
        if (!g.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < g.params.size(); ++i) {
                if (i) out += ',';
                std::snprintf(buf, sizeof buf, "%.17g", g.params[i]);
                out += buf;
            }
            out += ')';
        }
        out += ' ';
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            if (i) out += ',';
            out += "q[" + std::to_string(g.qubits[i]) + "]";
        }
        out += ";\n";
    }
    return out;
}

} // namespace mpoeq
