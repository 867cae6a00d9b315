#pragma once

// First-order tail-recursive IR over naturals. Functions take positional
// arguments (Arg i, 0-based); lets are de Bruijn (LetBound 0 is the innermost
// enclosing Let). TailCall re-enters the current function and is only legal in
// tail position; Call invokes a named function or primitive.
//
// Serialized form:
//   (def name arity body)
//   (if c t e) (let rhs body) (bound i) (arg i) (num n)
//   (call g a1 ...) (tailcall a1 ...)

#include "rcc/error.hpp"
#include "rcc/nat.hpp"
#include "rcc/sexpr.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rcc {

struct NatTerm;
using NatTermPtr = std::shared_ptr<const NatTerm>;

struct NatTerm {
    enum class K { If, Let, LetBound, Arg, Num, Call, TailCall };
    K kind;

    NatTermPtr cond, then_t, else_t; // If
    NatTermPtr rhs, body;            // Let
    size_t index = 0;                // LetBound / Arg
    Nat num;                         // Num
    std::string callee;              // Call
    std::vector<NatTermPtr> args;    // Call / TailCall
};

inline NatTermPtr nt_if(NatTermPtr c, NatTermPtr t, NatTermPtr e) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::If;
    n->cond = std::move(c);
    n->then_t = std::move(t);
    n->else_t = std::move(e);
    return n;
}
inline NatTermPtr nt_let(NatTermPtr rhs, NatTermPtr body) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::Let;
    n->rhs = std::move(rhs);
    n->body = std::move(body);
    return n;
}
inline NatTermPtr nt_bound(size_t i) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::LetBound;
    n->index = i;
    return n;
}
inline NatTermPtr nt_arg(size_t i) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::Arg;
    n->index = i;
    return n;
}
inline NatTermPtr nt_num(Nat v) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::Num;
    n->num = std::move(v);
    return n;
}
inline NatTermPtr nt_call(std::string g, std::vector<NatTermPtr> args) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::Call;
    n->callee = std::move(g);
    n->args = std::move(args);
    return n;
}
inline NatTermPtr nt_tailcall(std::vector<NatTermPtr> args) {
    auto n = std::make_shared<NatTerm>();
    n->kind = NatTerm::K::TailCall;
    n->args = std::move(args);
    return n;
}

struct NatFunDef {
    std::string name;
    size_t arity = 0;
    NatTermPtr body;
};

struct NatProgram {
    std::vector<NatFunDef> defs;

    const NatFunDef* find(const std::string& n) const {
        for (const auto& d : defs)
            if (d.name == n) return &d;
        return nullptr;
    }
};

// The primitives every NatTerm evaluator and the register compiler know.
inline bool is_nat_primitive(const std::string& n) {
    return n == "add" || n == "sub" || n == "eq" || n == "suc" || n == "fst" || n == "snd";
}

// ------------------------------------------------------- structural equality ----

inline bool nat_term_eq(const NatTerm& a, const NatTerm& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NatTerm::K::If:
        return nat_term_eq(*a.cond, *b.cond) && nat_term_eq(*a.then_t, *b.then_t) &&
               nat_term_eq(*a.else_t, *b.else_t);
    case NatTerm::K::Let:
        return nat_term_eq(*a.rhs, *b.rhs) && nat_term_eq(*a.body, *b.body);
    case NatTerm::K::LetBound:
    case NatTerm::K::Arg:
        return a.index == b.index;
    case NatTerm::K::Num:
        return a.num == b.num;
    case NatTerm::K::Call:
        if (a.callee != b.callee) break;
        [[fallthrough]];
    case NatTerm::K::TailCall: {
        if (a.kind == NatTerm::K::Call && a.callee != b.callee) return false;
        if (a.args.size() != b.args.size()) return false;
        for (size_t i = 0; i < a.args.size(); ++i)
            if (!nat_term_eq(*a.args[i], *b.args[i])) return false;
        return true;
    }
    }
    return false;
}

// ------------------------------------------------------------ tail validity ----

struct NatTailReport {
    bool ok = true;
    std::string where; // path like "if.else/let.rhs" to the offending node
};

namespace detail {

inline void nat_tail_walk(const NatTerm& t, bool tail, const std::string& path,
                          NatTailReport& r) {
    if (!r.ok) return;
    switch (t.kind) {
    case NatTerm::K::TailCall:
        if (!tail) {
            r = {false, path};
            return;
        }
        for (size_t i = 0; i < t.args.size(); ++i)
            nat_tail_walk(*t.args[i], false, path + "/tailcall.arg" + std::to_string(i), r);
        return;
    case NatTerm::K::If:
        nat_tail_walk(*t.cond, false, path + "/if.cond", r);
        nat_tail_walk(*t.then_t, tail, path + "/if.then", r);
        nat_tail_walk(*t.else_t, tail, path + "/if.else", r);
        return;
    case NatTerm::K::Let:
        nat_tail_walk(*t.rhs, false, path + "/let.rhs", r);
        nat_tail_walk(*t.body, tail, path + "/let.body", r);
        return;
    case NatTerm::K::Call:
        for (size_t i = 0; i < t.args.size(); ++i)
            nat_tail_walk(*t.args[i], false, path + "/call.arg" + std::to_string(i), r);
        return;
    default:
        return;
    }
}

} // namespace detail

// TailCall may appear only in tail position (body root, If branches, Let
// bodies); never in a condition, Let rhs, or any argument list.
inline NatTailReport validate_tail(const NatTerm& body) {
    NatTailReport r;
    detail::nat_tail_walk(body, true, "body", r);
    return r;
}

// ------------------------------------------------------------- serialization ----

inline Sexpr nat_term_to_sexpr(const NatTerm& t) {
    using K = NatTerm::K;
    switch (t.kind) {
    case K::If:
        return Sexpr::list({Sexpr::leaf("if"), nat_term_to_sexpr(*t.cond),
                            nat_term_to_sexpr(*t.then_t), nat_term_to_sexpr(*t.else_t)});
    case K::Let:
        return Sexpr::list(
            {Sexpr::leaf("let"), nat_term_to_sexpr(*t.rhs), nat_term_to_sexpr(*t.body)});
    case K::LetBound:
        return Sexpr::list({Sexpr::leaf("bound"), Sexpr::leaf(std::to_string(t.index))});
    case K::Arg:
        return Sexpr::list({Sexpr::leaf("arg"), Sexpr::leaf(std::to_string(t.index))});
    case K::Num:
        return Sexpr::list({Sexpr::leaf("num"), Sexpr::leaf(t.num.str())});
    case K::Call: {
        std::vector<Sexpr> xs{Sexpr::leaf("call"), Sexpr::leaf(t.callee)};
        for (const auto& a : t.args) xs.push_back(nat_term_to_sexpr(*a));
        return Sexpr::list(std::move(xs));
    }
    case K::TailCall: {
        std::vector<Sexpr> xs{Sexpr::leaf("tailcall")};
        for (const auto& a : t.args) xs.push_back(nat_term_to_sexpr(*a));
        return Sexpr::list(std::move(xs));
    }
    }
    throw Error("unreachable NatTerm kind");
}

inline NatTermPtr nat_term_from_sexpr(const Sexpr& s) {
    std::string h = s.head();
    if (h == "if") {
        if (s.size() != 4) throw Error("if wants 3 operands");
        return nt_if(nat_term_from_sexpr(s.at(1)), nat_term_from_sexpr(s.at(2)),
                     nat_term_from_sexpr(s.at(3)));
    }
    if (h == "let") {
        if (s.size() != 3) throw Error("let wants 2 operands");
        return nt_let(nat_term_from_sexpr(s.at(1)), nat_term_from_sexpr(s.at(2)));
    }
    if (h == "bound") {
        if (s.size() != 2) throw Error("bound wants an index");
        return nt_bound(std::stoull(s.at(1).atom));
    }
    if (h == "arg") {
        if (s.size() != 2) throw Error("arg wants an index");
        return nt_arg(std::stoull(s.at(1).atom));
    }
    if (h == "num") {
        if (s.size() != 2) throw Error("num wants a value");
        return nt_num(parse_nat(s.at(1).atom));
    }
    if (h == "call") {
        if (s.size() < 2 || s.at(1).is_list) throw Error("call wants a callee name");
        std::vector<NatTermPtr> args;
        for (size_t i = 2; i < s.size(); ++i) args.push_back(nat_term_from_sexpr(s.at(i)));
        return nt_call(s.at(1).atom, std::move(args));
    }
    if (h == "tailcall") {
        std::vector<NatTermPtr> args;
        for (size_t i = 1; i < s.size(); ++i) args.push_back(nat_term_from_sexpr(s.at(i)));
        return nt_tailcall(std::move(args));
    }
    throw Error("unknown NatTerm form '" + h + "'");
}

inline Sexpr nat_def_to_sexpr(const NatFunDef& d) {
    return Sexpr::list({Sexpr::leaf("def"), Sexpr::leaf(d.name),
                        Sexpr::leaf(std::to_string(d.arity)), nat_term_to_sexpr(*d.body)});
}

inline NatFunDef nat_def_from_sexpr(const Sexpr& s) {
    if (s.head() != "def" || s.size() != 4) throw Error("expected (def name arity body)");
    NatFunDef d;
    d.name = s.at(1).atom;
    d.arity = std::stoull(s.at(2).atom);
    d.body = nat_term_from_sexpr(s.at(3));
    return d;
}

inline std::string show_nat_term(const NatTerm& t) { return to_string(nat_term_to_sexpr(t)); }
inline std::string show_nat_def(const NatFunDef& d) { return to_string(nat_def_to_sexpr(d)); }

} // namespace rcc
