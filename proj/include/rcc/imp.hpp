#pragma once

// The IMP language family, one syntax with per-language restrictions:
//
//   IMP^TC : Assign Seq If Call Recurse        (tail-recursive, no loops)
//   IMP^WC : Assign Seq If Call While          (Recurse eliminated)
//   IMP^W  : Assign Seq If While               (calls inlined)
//   IMP^-  : AssignBit Seq If While            (single-bit registers)
//
// Expressions are flat: one add/sub (truncated) over two atoms, or an atom.
// Registers hold unbounded naturals, default 0. Call embeds the callee
// program (always an IMP^W program by the time it appears) and names the one
// register whose final value survives the call.
//
// Serialized form:
//   (assign r AEXP) (xbit r 0|1) (seq p q) (if r p q) (while r p)
//   (call PROG r) (recurse)
//   AEXP := (const n) | (reg x) | (add A A) | (sub A A)   with A an atom

#include "rcc/error.hpp"
#include "rcc/nat.hpp"
#include "rcc/sexpr.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rcc {

enum class Lang { imptc, impwc, impw, impminus };

inline const char* lang_name(Lang l) {
    switch (l) {
    case Lang::imptc: return "imptc";
    case Lang::impwc: return "impwc";
    case Lang::impw: return "impw";
    case Lang::impminus: return "impminus";
    }
    return "?";
}

inline std::optional<Lang> lang_from_name(const std::string& s) {
    if (s == "imptc") return Lang::imptc;
    if (s == "impwc") return Lang::impwc;
    if (s == "impw") return Lang::impw;
    if (s == "impminus") return Lang::impminus;
    return std::nullopt;
}

// ------------------------------------------------------------- expressions ----

struct Atom {
    bool is_const = true;
    Nat n;
    std::string reg;
};

inline Atom atom_const(Nat n) {
    Atom a;
    a.n = std::move(n);
    return a;
}
inline Atom atom_reg(std::string r) {
    Atom a;
    a.is_const = false;
    a.reg = std::move(r);
    return a;
}

struct AExp {
    enum class K { Atom, Add, Sub };
    K kind = K::Atom;
    Atom a, b; // b unused for Atom
};

inline AExp ax_atom(Atom a) {
    AExp e;
    e.a = std::move(a);
    return e;
}
inline AExp ax_const(Nat n) { return ax_atom(atom_const(std::move(n))); }
inline AExp ax_reg(std::string r) { return ax_atom(atom_reg(std::move(r))); }
inline AExp ax_add(Atom a, Atom b) {
    AExp e;
    e.kind = AExp::K::Add;
    e.a = std::move(a);
    e.b = std::move(b);
    return e;
}
inline AExp ax_sub(Atom a, Atom b) {
    AExp e;
    e.kind = AExp::K::Sub;
    e.a = std::move(a);
    e.b = std::move(b);
    return e;
}

// ---------------------------------------------------------------- commands ----

struct Command;
using Cmd = std::shared_ptr<const Command>;

struct Command {
    enum class K { Assign, AssignBit, Seq, If, While, Call, Recurse };
    K kind;
    std::string reg; // Assign/AssignBit target, If/While condition, Call result
    AExp e;          // Assign
    bool bit = false; // AssignBit
    Cmd a, b;        // Seq(a,b), If(a=then,b=else), While(a=body), Call(a=callee)
};

inline Cmd c_assign(std::string r, AExp e) {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::Assign;
    c->reg = std::move(r);
    c->e = std::move(e);
    return c;
}
inline Cmd c_xbit(std::string r, bool v) {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::AssignBit;
    c->reg = std::move(r);
    c->bit = v;
    return c;
}
inline Cmd c_seq(Cmd a, Cmd b) {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::Seq;
    c->a = std::move(a);
    c->b = std::move(b);
    return c;
}
inline Cmd c_if(std::string r, Cmd a, Cmd b) {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::If;
    c->reg = std::move(r);
    c->a = std::move(a);
    c->b = std::move(b);
    return c;
}
inline Cmd c_while(std::string r, Cmd body) {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::While;
    c->reg = std::move(r);
    c->a = std::move(body);
    return c;
}
inline Cmd c_call(Cmd callee, std::string ret) {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::Call;
    c->reg = std::move(ret);
    c->a = std::move(callee);
    return c;
}
inline Cmd c_recurse() {
    auto c = std::make_shared<Command>();
    c->kind = Command::K::Recurse;
    return c;
}

// Right-nested sequence of one or more commands.
inline Cmd seq_chain(std::vector<Cmd> cs) {
    if (cs.empty()) throw Error("seq_chain: empty");
    Cmd out = cs.back();
    for (size_t i = cs.size() - 1; i-- > 0;) out = c_seq(cs[i], out);
    return out;
}

// ------------------------------------------------------------------ state ----

struct State {
    std::map<std::string, Nat> m;

    State() = default;
    State(std::initializer_list<std::pair<const std::string, Nat>> init) : m(init) {}

    const Nat& get(const std::string& r) const {
        static const Nat zero = 0;
        auto it = m.find(r);
        return it == m.end() ? zero : it->second;
    }
    void set(const std::string& r, Nat v) { m[r] = std::move(v); }
};

// Equal as functions (absent registers read 0).
inline bool state_eq(const State& a, const State& b) {
    for (const auto& [r, v] : a.m)
        if (v != b.get(r)) return false;
    for (const auto& [r, v] : b.m)
        if (v != a.get(r)) return false;
    return true;
}

inline bool state_eq_on(const State& a, const State& b, const std::set<std::string>& regs) {
    for (const auto& r : regs)
        if (a.get(r) != b.get(r)) return false;
    return true;
}

// ------------------------------------------------------------- cost models ----

struct CostModel {
    std::uint64_t assign = 1, seq = 1, if_ = 1, while_false = 1, while_true = 1, recurse = 1,
                  call = 0;

    // Uniform unit cost per rule; calls charge only the callee.
    static CostModel unit() { return {}; }
    // The fixed literal costs of the bit-level language.
    static CostModel imp_minus() {
        CostModel m;
        m.while_true = 2;
        return m;
    }
};

struct ExecOutcome {
    State state;
    std::uint64_t steps = 0;
};

struct FlaggedOutcome {
    State state;
    std::uint64_t steps = 0;
    bool flag = false;
};

// ----------------------------------------------------------------- queries ----

inline size_t command_size(const Command& c) {
    switch (c.kind) {
    case Command::K::Assign:
    case Command::K::AssignBit:
    case Command::K::Recurse:
        return 1;
    case Command::K::Seq:
    case Command::K::If:
        return 1 + command_size(*c.a) + command_size(*c.b);
    case Command::K::While:
        return 1 + command_size(*c.a);
    case Command::K::Call:
        return 1 + command_size(*c.a);
    }
    return 0;
}

inline Nat maxconst(const AExp& e) {
    Nat m = 0;
    if (e.a.is_const && e.a.n > m) m = e.a.n;
    if (e.kind != AExp::K::Atom && e.b.is_const && e.b.n > m) m = e.b.n;
    return m;
}

inline Nat maxconst(const Command& c) {
    switch (c.kind) {
    case Command::K::Assign:
        return maxconst(c.e);
    case Command::K::AssignBit:
        return Nat(c.bit ? 1 : 0);
    case Command::K::Recurse:
        return 0;
    case Command::K::Seq:
    case Command::K::If: {
        Nat a = maxconst(*c.a), b = maxconst(*c.b);
        return a > b ? a : b;
    }
    case Command::K::While:
    case Command::K::Call:
        return maxconst(*c.a);
    }
    return 0;
}

inline Nat maxconst(const State& s) {
    Nat m = 0;
    for (const auto& [r, v] : s.m)
        if (v > m) m = v;
    return m;
}

inline void collect_vars(const AExp& e, std::set<std::string>& out) {
    if (!e.a.is_const) out.insert(e.a.reg);
    if (e.kind != AExp::K::Atom && !e.b.is_const) out.insert(e.b.reg);
}

inline void collect_vars(const Command& c, std::set<std::string>& out) {
    switch (c.kind) {
    case Command::K::Assign:
        out.insert(c.reg);
        collect_vars(c.e, out);
        return;
    case Command::K::AssignBit:
        out.insert(c.reg);
        return;
    case Command::K::Recurse:
        return;
    case Command::K::Seq:
        collect_vars(*c.a, out);
        collect_vars(*c.b, out);
        return;
    case Command::K::If:
        out.insert(c.reg);
        collect_vars(*c.a, out);
        collect_vars(*c.b, out);
        return;
    case Command::K::While:
        out.insert(c.reg);
        collect_vars(*c.a, out);
        return;
    case Command::K::Call:
        out.insert(c.reg);
        collect_vars(*c.a, out); // callee registers included
        return;
    }
}

inline std::set<std::string> vars(const Command& c) {
    std::set<std::string> out;
    collect_vars(c, out);
    return out;
}

inline void collect_frame_vars(const Command& c, std::set<std::string>& out) {
    switch (c.kind) {
    case Command::K::Assign:
        out.insert(c.reg);
        collect_vars(c.e, out);
        return;
    case Command::K::AssignBit:
        out.insert(c.reg);
        return;
    case Command::K::Recurse:
        return;
    case Command::K::Seq:
        collect_frame_vars(*c.a, out);
        collect_frame_vars(*c.b, out);
        return;
    case Command::K::If:
        out.insert(c.reg);
        collect_frame_vars(*c.a, out);
        collect_frame_vars(*c.b, out);
        return;
    case Command::K::While:
        out.insert(c.reg);
        collect_frame_vars(*c.a, out);
        return;
    case Command::K::Call:
        out.insert(c.reg); // only the surviving result register
        return;
    }
}

// Registers of the caller's own frame: callees run on a private copy of the
// state, so their internals don't count, only the result register they leave
// behind.
inline std::set<std::string> frame_vars(const Command& c) {
    std::set<std::string> out;
    collect_frame_vars(c, out);
    return out;
}

// ------------------------------------------------------- language membership ----

// nullopt when p is a well-formed member of lang; otherwise a reason.
inline std::optional<std::string> wf_violation(const Command& c, Lang lang) {
    auto bad = [&](const char* what) -> std::optional<std::string> {
        return std::string(what) + " not allowed in " + lang_name(lang);
    };
    switch (c.kind) {
    case Command::K::Assign:
        if (lang == Lang::impminus) return bad("assign");
        return std::nullopt;
    case Command::K::AssignBit:
        if (lang != Lang::impminus) return bad("xbit");
        return std::nullopt;
    case Command::K::Recurse:
        if (lang != Lang::imptc) return bad("recurse");
        return std::nullopt;
    case Command::K::While:
        if (lang == Lang::imptc) return bad("while");
        return wf_violation(*c.a, lang);
    case Command::K::Seq:
    case Command::K::If: {
        auto r = wf_violation(*c.a, lang);
        return r ? r : wf_violation(*c.b, lang);
    }
    case Command::K::Call:
        if (lang != Lang::imptc && lang != Lang::impwc) return bad("call");
        // Callees are complete lowered programs: loops allowed, no calls or
        // recursion of their own.
        return wf_violation(*c.a, Lang::impw);
    }
    return std::nullopt;
}

inline bool wellformed(const Command& c, Lang lang) { return !wf_violation(c, lang); }

// ------------------------------------------------------------ serialization ----

inline Sexpr atom_to_sexpr(const Atom& a) {
    if (a.is_const) return Sexpr::list({Sexpr::leaf("const"), Sexpr::leaf(a.n.str())});
    return Sexpr::list({Sexpr::leaf("reg"), Sexpr::leaf(a.reg)});
}

inline Sexpr aexp_to_sexpr(const AExp& e) {
    switch (e.kind) {
    case AExp::K::Atom:
        return atom_to_sexpr(e.a);
    case AExp::K::Add:
        return Sexpr::list({Sexpr::leaf("add"), atom_to_sexpr(e.a), atom_to_sexpr(e.b)});
    case AExp::K::Sub:
        return Sexpr::list({Sexpr::leaf("sub"), atom_to_sexpr(e.a), atom_to_sexpr(e.b)});
    }
    throw Error("unreachable AExp kind");
}

inline Sexpr command_to_sexpr(const Command& c) {
    switch (c.kind) {
    case Command::K::Assign:
        return Sexpr::list({Sexpr::leaf("assign"), Sexpr::leaf(c.reg), aexp_to_sexpr(c.e)});
    case Command::K::AssignBit:
        return Sexpr::list(
            {Sexpr::leaf("xbit"), Sexpr::leaf(c.reg), Sexpr::leaf(c.bit ? "1" : "0")});
    case Command::K::Seq:
        return Sexpr::list(
            {Sexpr::leaf("seq"), command_to_sexpr(*c.a), command_to_sexpr(*c.b)});
    case Command::K::If:
        return Sexpr::list({Sexpr::leaf("if"), Sexpr::leaf(c.reg), command_to_sexpr(*c.a),
                            command_to_sexpr(*c.b)});
    case Command::K::While:
        return Sexpr::list(
            {Sexpr::leaf("while"), Sexpr::leaf(c.reg), command_to_sexpr(*c.a)});
    case Command::K::Call:
        return Sexpr::list({Sexpr::leaf("call"), command_to_sexpr(*c.a), Sexpr::leaf(c.reg)});
    case Command::K::Recurse:
        return Sexpr::list({Sexpr::leaf("recurse")});
    }
    throw Error("unreachable Command kind");
}

inline Atom atom_from_sexpr(const Sexpr& s) {
    if (s.head() == "const" && s.size() == 2) return atom_const(parse_nat(s.at(1).atom));
    if (s.head() == "reg" && s.size() == 2 && !s.at(1).is_list) return atom_reg(s.at(1).atom);
    throw Error("expected (const n) or (reg x)");
}

inline AExp aexp_from_sexpr(const Sexpr& s) {
    std::string h = s.head();
    if (h == "add" || h == "sub") {
        if (s.size() != 3) throw Error("'" + h + "' wants 2 atoms");
        Atom a = atom_from_sexpr(s.at(1)), b = atom_from_sexpr(s.at(2));
        return h == "add" ? ax_add(std::move(a), std::move(b))
                          : ax_sub(std::move(a), std::move(b));
    }
    return ax_atom(atom_from_sexpr(s));
}

inline Cmd command_from_sexpr(const Sexpr& s) {
    std::string h = s.head();
    if (h == "assign") {
        if (s.size() != 3 || s.at(1).is_list) throw Error("(assign r AEXP)");
        return c_assign(s.at(1).atom, aexp_from_sexpr(s.at(2)));
    }
    if (h == "xbit") {
        if (s.size() != 3 || s.at(1).is_list || (s.at(2).atom != "0" && s.at(2).atom != "1"))
            throw Error("(xbit r 0|1)");
        return c_xbit(s.at(1).atom, s.at(2).atom == "1");
    }
    if (h == "seq") {
        if (s.size() != 3) throw Error("(seq p q)");
        return c_seq(command_from_sexpr(s.at(1)), command_from_sexpr(s.at(2)));
    }
    if (h == "if") {
        if (s.size() != 4 || s.at(1).is_list) throw Error("(if r p q)");
        return c_if(s.at(1).atom, command_from_sexpr(s.at(2)), command_from_sexpr(s.at(3)));
    }
    if (h == "while") {
        if (s.size() != 3 || s.at(1).is_list) throw Error("(while r p)");
        return c_while(s.at(1).atom, command_from_sexpr(s.at(2)));
    }
    if (h == "call") {
        if (s.size() != 3 || s.at(2).is_list) throw Error("(call PROG r)");
        return c_call(command_from_sexpr(s.at(1)), s.at(2).atom);
    }
    if (h == "recurse") {
        if (s.size() != 1) throw Error("(recurse)");
        return c_recurse();
    }
    throw Error("unknown command form '" + h + "'");
}

inline std::string show_command(const Command& c) { return to_string(command_to_sexpr(c)); }

inline Cmd parse_command(const std::string& text) {
    return command_from_sexpr(parse_sexpr(text));
}

// Structural equality (commands, not semantics).
inline bool command_eq(const Command& x, const Command& y);

inline bool atom_eq(const Atom& a, const Atom& b) {
    if (a.is_const != b.is_const) return false;
    return a.is_const ? a.n == b.n : a.reg == b.reg;
}
inline bool aexp_eq(const AExp& a, const AExp& b) {
    if (a.kind != b.kind) return false;
    if (!atom_eq(a.a, b.a)) return false;
    return a.kind == AExp::K::Atom || atom_eq(a.b, b.b);
}
inline bool command_eq(const Command& x, const Command& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
    case Command::K::Assign:
        return x.reg == y.reg && aexp_eq(x.e, y.e);
    case Command::K::AssignBit:
        return x.reg == y.reg && x.bit == y.bit;
    case Command::K::Recurse:
        return true;
    case Command::K::Seq:
        return command_eq(*x.a, *y.a) && command_eq(*x.b, *y.b);
    case Command::K::If:
        return x.reg == y.reg && command_eq(*x.a, *y.a) && command_eq(*x.b, *y.b);
    case Command::K::While:
        return x.reg == y.reg && command_eq(*x.a, *y.a);
    case Command::K::Call:
        return x.reg == y.reg && command_eq(*x.a, *y.a);
    }
    return false;
}

} // namespace rcc
