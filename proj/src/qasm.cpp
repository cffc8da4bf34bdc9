// SPDX-License-Identifier: Apache-2.0
#include "latsched/circuit.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace latsched {

namespace {

// Value of an angle expression: either exact (r * pi^pi_power) or a float.
struct SymValue {
    bool exact = true;
    Rational r{};
    int pi_power = 0;
    double f = 0.0;

    double to_double() const {
        if (!exact) return f;
        double v = r.to_double();
        for (int i = 0; i < pi_power; ++i) v *= 3.14159265358979323846;
        return v;
    }
    static SymValue floating(double v) { return SymValue{false, {}, 0, v}; }
};

bool checked_mul(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_mul_overflow(a, b, &out);
}

std::optional<Rational> add_rational(const Rational& a, const Rational& b) {
    std::int64_t x = 0, y = 0, den = 0, num = 0;
    if (!checked_mul(a.num, b.den, x) || !checked_mul(b.num, a.den, y) ||
        !checked_mul(a.den, b.den, den) || __builtin_add_overflow(x, y, &num)) {
        return std::nullopt;
    }
    return Rational::make(num, den);
}

std::optional<Rational> mul_rational(const Rational& a, const Rational& b) {
    std::int64_t num = 0, den = 0;
    if (!checked_mul(a.num, b.num, num) || !checked_mul(a.den, b.den, den)) return std::nullopt;
    return Rational::make(num, den);
}

class ExprParser {
  public:
    ExprParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    SymValue parse() {
        SymValue v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' in expression");
        return v;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const { throw QasmError(line_, what); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    SymValue expr() {
        SymValue v = term();
        for (;;) {
            if (eat('+')) {
                v = add(v, term());
            } else if (eat('-')) {
                v = add(v, negate(term()));
            } else {
                return v;
            }
        }
    }

    SymValue term() {
        SymValue v = factor();
        for (;;) {
            if (eat('*')) {
                v = mul(v, factor());
            } else if (eat('/')) {
                v = div(v, factor());
            } else {
                return v;
            }
        }
    }

    SymValue factor() {
        if (eat('-')) return negate(factor());
        if (eat('+')) return factor();
        if (eat('(')) {
            SymValue v = expr();
            if (!eat(')')) fail("missing ')' in expression");
            return v;
        }
        skip_ws();
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return SymValue{true, Rational{1, 1}, 1, 0.0};
        }
        return number();
    }

    SymValue number() {
        const std::size_t start = pos_;
        bool is_float = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.') {
                is_float = true;
                ++pos_;
            } else if ((c == 'e' || c == 'E') && pos_ > start) {
                is_float = true;
                ++pos_;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a number, 'pi' or '('");
        const std::string token(text_.substr(start, pos_ - start));
        if (!is_float) {
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec == std::errc() && ptr == token.data() + token.size()) {
                return SymValue{true, Rational{v, 1}, 0, 0.0};
            }
        }
        try {
            return SymValue::floating(std::stod(token));
        } catch (const std::exception&) {
            fail("bad number '" + token + "'");
        }
    }

    static SymValue negate(SymValue v) {
        if (v.exact) {
            v.r.num = -v.r.num;
        } else {
            v.f = -v.f;
        }
        return v;
    }

    static SymValue add(const SymValue& a, const SymValue& b) {
        if (a.exact && b.exact) {
            if (a.r.num == 0) return b;
            if (b.r.num == 0) return a;
            if (a.pi_power == b.pi_power) {
                if (auto sum = add_rational(a.r, b.r)) return SymValue{true, *sum, a.pi_power, 0.0};
            }
        }
        return SymValue::floating(a.to_double() + b.to_double());
    }

    static SymValue mul(const SymValue& a, const SymValue& b) {
        if (a.exact && b.exact && a.pi_power + b.pi_power <= 1) {
            if (auto prod = mul_rational(a.r, b.r)) return SymValue{true, *prod, a.pi_power + b.pi_power, 0.0};
        }
        return SymValue::floating(a.to_double() * b.to_double());
    }

    SymValue div(const SymValue& a, const SymValue& b) const {
        if (b.to_double() == 0.0) fail("division by zero in expression");
        if (a.exact && b.exact && a.pi_power - b.pi_power >= 0 && a.pi_power - b.pi_power <= 1) {
            if (auto q = mul_rational(a.r, Rational::make(b.r.den, b.r.num))) {
                return SymValue{true, *q, a.pi_power - b.pi_power, 0.0};
            }
        }
        return SymValue::floating(a.to_double() / b.to_double());
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

Angle to_angle(const SymValue& v) {
    if (v.exact && v.pi_power == 1) return Angle::pi_multiple(v.r);
    if (v.exact && v.r.num == 0) return Angle::pi_multiple(0, 1);
    return Angle::radians(v.to_double());
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct Register {
    std::size_t offset = 0;
    std::size_t size = 0;
};

class QasmReader {
  public:
    Circuit read(std::string_view text) {
        std::string stmt;
        std::size_t line = 1, stmt_line = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char c = text[i];
            if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
                while (i < text.size() && text[i] != '\n') ++i;
                if (i < text.size()) ++line;
                continue;
            }
            if (c == '\n') ++line;
            if (c == ';') {
                statement(trim(stmt), stmt_line == 0 ? line : stmt_line);
                stmt.clear();
                stmt_line = 0;
                continue;
            }
            if (stmt_line == 0 && !std::isspace(static_cast<unsigned char>(c))) stmt_line = line;
            stmt.push_back(c);
        }
        if (!trim(stmt).empty()) throw QasmError(stmt_line, "missing ';' at end of statement");

        Circuit circuit(num_qubits_);
        for (const auto& p : pending_) {
            switch (p.kind) {
                case GateKind::Rz: circuit.add_rz(p.q0, *p.theta); break;
                case GateKind::H: circuit.add_h(p.q0); break;
                case GateKind::X: circuit.add_x(p.q0); break;
                case GateKind::CNOT: circuit.add_cnot(p.q0, p.q1); break;
            }
        }
        return circuit;
    }

  private:
    struct PendingGate {
        GateKind kind;
        QubitId q0 = 0, q1 = 0;
        std::optional<Angle> theta;
    };

    void statement(const std::string& s, std::size_t line) {
        if (s.empty()) return;
        std::size_t name_end = 0;
        while (name_end < s.size() && (std::isalnum(static_cast<unsigned char>(s[name_end])) || s[name_end] == '_')) {
            ++name_end;
        }
        const std::string name = s.substr(0, name_end);
        std::string rest = trim(std::string_view(s).substr(name_end));

        if (name == "OPENQASM" || name == "include") return;
        if (name == "qreg" || name == "creg") {
            declare(name == "qreg", rest, line);
            return;
        }
        if (name == "measure" || name == "barrier" || name == "id") return;
        if (name.empty()) throw QasmError(line, "syntax error near '" + s.substr(0, 20) + "'");

        std::optional<Angle> param;
        if (!rest.empty() && rest.front() == '(') {
            const auto close = rest.find(')');
            if (close == std::string::npos) throw QasmError(line, "missing ')' after gate parameters");
            param = to_angle(ExprParser(std::string_view(rest).substr(1, close - 1), line).parse());
            rest = trim(std::string_view(rest).substr(close + 1));
        }

        const auto operands = split_operands(rest, line);
        auto need_param = [&](bool wanted) {
            if (wanted && !param) throw QasmError(line, "gate '" + name + "' needs an angle parameter");
            if (!wanted && param) throw QasmError(line, "gate '" + name + "' takes no parameter");
        };
        auto single = [&](GateKind kind, std::optional<Angle> theta) {
            if (operands.size() != 1) throw QasmError(line, "gate '" + name + "' takes one operand");
            for (QubitId q : operands[0]) pending_.push_back(PendingGate{kind, q, 0, theta});
        };

        if (name == "rz" || name == "p" || name == "u1") {
            need_param(true);
            single(GateKind::Rz, param);
        } else if (name == "h" || name == "x") {
            need_param(false);
            single(name == "h" ? GateKind::H : GateKind::X, std::nullopt);
        } else if (name == "t" || name == "tdg" || name == "s" || name == "sdg" || name == "z") {
            need_param(false);
            const std::map<std::string, Angle> rewrites{
                {"t", Angle::pi_multiple(1, 4)},   {"tdg", Angle::pi_multiple(-1, 4)},
                {"s", Angle::pi_multiple(1, 2)},   {"sdg", Angle::pi_multiple(-1, 2)},
                {"z", Angle::pi_multiple(1, 1)},
            };
            single(GateKind::Rz, rewrites.at(name));
        } else if (name == "cx" || name == "CX") {
            need_param(false);
            if (operands.size() != 2) throw QasmError(line, "cx takes two operands");
            const auto& a = operands[0];
            const auto& b = operands[1];
            if (a.size() != b.size() && a.size() != 1 && b.size() != 1) {
                throw QasmError(line, "cx register size mismatch");
            }
            const std::size_t n = std::max(a.size(), b.size());
            for (std::size_t i = 0; i < n; ++i) {
                const QubitId c = a[a.size() == 1 ? 0 : i];
                const QubitId t = b[b.size() == 1 ? 0 : i];
                if (c == t) throw QasmError(line, "cx control and target are the same qubit");
                pending_.push_back(PendingGate{GateKind::CNOT, c, t, std::nullopt});
            }
        } else {
            throw QasmError(line, "unsupported gate '" + name + "'");
        }
    }

    void declare(bool quantum, const std::string& rest, std::size_t line) {
        const auto lb = rest.find('['), rb = rest.find(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
            throw QasmError(line, "malformed register declaration");
        }
        const std::string reg = trim(std::string_view(rest).substr(0, lb));
        std::size_t size = 0;
        try {
            size = std::stoul(rest.substr(lb + 1, rb - lb - 1));
        } catch (const std::exception&) {
            throw QasmError(line, "bad register size");
        }
        if (!quantum) return;
        if (qregs_.count(reg)) throw QasmError(line, "register '" + reg + "' declared twice");
        qregs_[reg] = Register{num_qubits_, size};
        num_qubits_ += size;
    }

    std::vector<std::vector<QubitId>> split_operands(const std::string& rest, std::size_t line) const {
        std::vector<std::vector<QubitId>> out;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) throw QasmError(line, "empty operand");
            const auto lb = item.find('[');
            const std::string reg = trim(std::string_view(item).substr(0, lb));
            const auto it = qregs_.find(reg);
            if (it == qregs_.end()) throw QasmError(line, "unknown register '" + reg + "'");
            if (lb == std::string::npos) {
                std::vector<QubitId> all;
                for (std::size_t i = 0; i < it->second.size; ++i) {
                    all.push_back(static_cast<QubitId>(it->second.offset + i));
                }
                out.push_back(std::move(all));
                continue;
            }
            const auto rb = item.find(']', lb);
            if (rb == std::string::npos) throw QasmError(line, "missing ']' in operand");
            std::size_t idx = 0;
            try {
                idx = std::stoul(item.substr(lb + 1, rb - lb - 1));
            } catch (const std::exception&) {
                throw QasmError(line, "bad qubit index in '" + item + "'");
            }
            if (idx >= it->second.size) {
                throw QasmError(line, "qubit index " + std::to_string(idx) + " out of range for register '" +
                                          reg + "' of size " + std::to_string(it->second.size));
            }
            out.push_back({static_cast<QubitId>(it->second.offset + idx)});
        }
        return out;
    }

    std::map<std::string, Register> qregs_;
    std::size_t num_qubits_ = 0;
    std::vector<PendingGate> pending_;
};

}  // namespace

Circuit parse_qasm(std::string_view text) { return QasmReader().read(text); }

Circuit load_qasm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read circuit file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_qasm(buf.str());
}

std::string write_qasm(const Circuit& circuit) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << circuit.num_qubits() << "];\n";
    for (const Gate& g : circuit.gates()) {
        switch (g.kind) {
            case GateKind::Rz: out << "rz(" << g.theta->to_qasm() << ") q[" << g.qubits[0] << "];\n"; break;
            case GateKind::H: out << "h q[" << g.qubits[0] << "];\n"; break;
            case GateKind::X: out << "x q[" << g.qubits[0] << "];\n"; break;
            case GateKind::CNOT: out << "cx q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n"; break;
        }
    }
    return out.str();
}

}  // namespace latsched
