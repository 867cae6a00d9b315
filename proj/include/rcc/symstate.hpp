#pragma once

// Symbolic states and register reads, with a small normalizer. A symbolic
// state is a base-state name plus an ordered list of register updates; a
// symbolic value is a literal, a read of a register from a symbolic state, or
// an add/sub node over symbolic values. Normalization pushes reads through
// updates (taking the last matching update), folds constant arithmetic, and
// canonicalizes states to one sorted update per register.

#include "rcc/error.hpp"
#include "rcc/imp.hpp"
#include "rcc/nat.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rcc {

struct SymValue;
struct SymState;
using SymPtr = std::shared_ptr<const SymValue>;
using SymStatePtr = std::shared_ptr<const SymState>;

struct SymState {
    std::string base; // name of an opaque concrete state
    std::vector<std::pair<std::string, SymPtr>> updates; // applied left to right
};

struct SymValue {
    enum class K { Lit, Read, Add, Sub };
    K kind;
    Nat lit;
    SymStatePtr st; // Read
    std::string reg;
    SymPtr a, b; // Add/Sub
};

inline SymPtr sym_lit(Nat n) {
    auto v = std::make_shared<SymValue>();
    v->kind = SymValue::K::Lit;
    v->lit = std::move(n);
    return v;
}

inline SymStatePtr sym_base(std::string name) {
    auto s = std::make_shared<SymState>();
    s->base = std::move(name);
    return s;
}

inline SymStatePtr sym_update(const SymStatePtr& s, std::string reg, SymPtr v) {
    auto out = std::make_shared<SymState>(*s);
    out->updates.emplace_back(std::move(reg), std::move(v));
    return out;
}

inline SymPtr sym_read(SymStatePtr s, std::string reg) {
    auto v = std::make_shared<SymValue>();
    v->kind = SymValue::K::Read;
    v->st = std::move(s);
    v->reg = std::move(reg);
    return v;
}

inline SymPtr sym_add(SymPtr a, SymPtr b) {
    auto v = std::make_shared<SymValue>();
    v->kind = SymValue::K::Add;
    v->a = std::move(a);
    v->b = std::move(b);
    return v;
}

inline SymPtr sym_sub(SymPtr a, SymPtr b) {
    auto v = std::make_shared<SymValue>();
    v->kind = SymValue::K::Sub;
    v->a = std::move(a);
    v->b = std::move(b);
    return v;
}

inline SymStatePtr normalize_sym_state(const SymStatePtr& s);

// A value is normal when every Read targets a bare base state (no updates
// left to look through) and no arithmetic node has two literal children.
inline SymPtr normalize_sym(const SymPtr& v) {
    switch (v->kind) {
    case SymValue::K::Lit:
        return v;
    case SymValue::K::Read: {
        // Resolve against the most recent update of this register, if any.
        for (auto it = v->st->updates.rbegin(); it != v->st->updates.rend(); ++it)
            if (it->first == v->reg) return normalize_sym(it->second);
        return sym_read(sym_base(v->st->base), v->reg);
    }
    case SymValue::K::Add:
    case SymValue::K::Sub: {
        SymPtr a = normalize_sym(v->a);
        SymPtr b = normalize_sym(v->b);
        if (a->kind == SymValue::K::Lit && b->kind == SymValue::K::Lit)
            return sym_lit(v->kind == SymValue::K::Add ? a->lit + b->lit
                                                       : monus(a->lit, b->lit));
        return v->kind == SymValue::K::Add ? sym_add(a, b) : sym_sub(a, b);
    }
    }
    throw Error("unreachable symbolic value kind");
}

// Normal states carry at most one update per register, each with a normal
// value, sorted by register name. Later writes win.
inline SymStatePtr normalize_sym_state(const SymStatePtr& s) {
    std::map<std::string, SymPtr> last;
    for (const auto& [reg, val] : s->updates) last[reg] = val;
    auto out = std::make_shared<SymState>();
    out->base = s->base;
    for (const auto& [reg, val] : last)
        out->updates.emplace_back(reg, normalize_sym(val));
    return out;
}

inline Nat eval_sym(const SymValue& v, const State& base);

inline State eval_sym_state(const SymState& s, const State& base) {
    State out = base;
    for (const auto& [reg, val] : s.updates) out.set(reg, eval_sym(*val, base));
    return out;
}

inline Nat eval_sym(const SymValue& v, const State& base) {
    switch (v.kind) {
    case SymValue::K::Lit:
        return v.lit;
    case SymValue::K::Read:
        return eval_sym_state(*v.st, base).get(v.reg);
    case SymValue::K::Add:
        return eval_sym(*v.a, base) + eval_sym(*v.b, base);
    case SymValue::K::Sub:
        return monus(eval_sym(*v.a, base), eval_sym(*v.b, base));
    }
    throw Error("unreachable symbolic value kind");
}

namespace detail {

inline SymPtr sym_of_atom(const Atom& at, const SymStatePtr& s) {
    return at.is_const ? sym_lit(at.n) : sym_read(s, at.reg);
}

inline SymPtr sym_of_aexp(const AExp& e, const SymStatePtr& s) {
    switch (e.kind) {
    case AExp::K::Atom:
        return sym_of_atom(e.a, s);
    case AExp::K::Add:
        return sym_add(sym_of_atom(e.a, s), sym_of_atom(e.b, s));
    case AExp::K::Sub:
        return sym_sub(sym_of_atom(e.a, s), sym_of_atom(e.b, s));
    }
    throw Error("unreachable expression kind");
}

} // namespace detail

// Symbolic execution of straight-line programs (assignments and sequencing
// only); anything branching needs a concrete state.
inline SymStatePtr sym_exec(const Cmd& c, SymStatePtr s) {
    switch (c->kind) {
    case Command::K::Assign:
        return sym_update(s, c->reg, detail::sym_of_aexp(c->e, s));
    case Command::K::Seq:
        return sym_exec(c->b, sym_exec(c->a, std::move(s)));
    default:
        throw Error("symbolic execution handles only straight-line code");
    }
}

inline std::string show_sym(const SymValue& v);

inline std::string show_sym_state(const SymState& s) {
    std::string out = s.base;
    for (const auto& [reg, val] : s.updates)
        out += "[" + reg + " := " + show_sym(*val) + "]";
    return out;
}

inline std::string show_sym(const SymValue& v) {
    switch (v.kind) {
    case SymValue::K::Lit:
        return v.lit.str();
    case SymValue::K::Read:
        return show_sym_state(*v.st) + "(" + v.reg + ")";
    case SymValue::K::Add:
        return "(" + show_sym(*v.a) + " + " + show_sym(*v.b) + ")";
    case SymValue::K::Sub:
        return "(" + show_sym(*v.a) + " - " + show_sym(*v.b) + ")";
    }
    throw Error("unreachable symbolic value kind");
}

} // namespace rcc
