#pragma once

// Surface AST for the source language: first-order tail-recursive functions
// over Nat and user ADTs. One struct per syntactic class, kind enums rather
// than std::variant so switch statements stay flat.

#include "rcc/nat.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rcc {

// ---------------------------------------------------------------- types ----

// head is "Nat", an ADT name, a type parameter, or "->" for function types
// (legal only on template parameters; args = doms..., cod).
struct TypeRef {
    std::string head;
    std::vector<TypeRef> args;

    static TypeRef nat() { return {"Nat", {}}; }
    bool is_nat() const { return head == "Nat" && args.empty(); }
    bool is_fun() const { return head == "->"; }

    bool operator==(const TypeRef& o) const { return head == o.head && args == o.args; }
    bool operator!=(const TypeRef& o) const { return !(*this == o); }
};

inline std::string show_type(const TypeRef& t) {
    if (t.is_fun()) {
        std::string s;
        for (size_t i = 0; i < t.args.size(); ++i) {
            if (i) s += " -> ";
            bool paren = t.args[i].is_fun() || !t.args[i].args.empty();
            if (paren) s += '(';
            s += show_type(t.args[i]);
            if (paren) s += ')';
        }
        return s;
    }
    std::string s = t.head;
    for (const auto& a : t.args) {
        s += ' ';
        if (a.args.empty()) {
            s += a.head;
        } else {
            s += '(' + show_type(a) + ')';
        }
    }
    return s;
}

// ---------------------------------------------------------------- terms ----

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct CaseArm {
    // Constructor name; for a Nat scrutinee the two arms are "0" (no binders)
    // and "Suc" (one binder).
    std::string ctor;
    std::vector<std::string> binders;
    TermPtr body;
};

struct Term {
    enum class K { Var, NatLit, App, Let, If, Case };
    K kind;
    int line = 0, col = 0;

    std::string name;          // Var: variable; App: head (fun/ctor/primitive)
    Nat lit;                   // NatLit
    std::vector<TermPtr> args; // App
    std::string bind;          // Let
    TermPtr rhs, body;         // Let
    TermPtr cond, then_t, else_t; // If
    TermPtr scrutinee;         // Case
    std::vector<CaseArm> arms; // Case
};

inline TermPtr mk_var(std::string n, int line = 0, int col = 0) {
    auto t = std::make_shared<Term>();
    t->kind = Term::K::Var;
    t->name = std::move(n);
    t->line = line;
    t->col = col;
    return t;
}
inline TermPtr mk_lit(Nat n, int line = 0, int col = 0) {
    auto t = std::make_shared<Term>();
    t->kind = Term::K::NatLit;
    t->lit = std::move(n);
    t->line = line;
    t->col = col;
    return t;
}
inline TermPtr mk_app(std::string head, std::vector<TermPtr> args, int line = 0, int col = 0) {
    auto t = std::make_shared<Term>();
    t->kind = Term::K::App;
    t->name = std::move(head);
    t->args = std::move(args);
    t->line = line;
    t->col = col;
    return t;
}
inline TermPtr mk_let(std::string x, TermPtr rhs, TermPtr body, int line = 0, int col = 0) {
    auto t = std::make_shared<Term>();
    t->kind = Term::K::Let;
    t->bind = std::move(x);
    t->rhs = std::move(rhs);
    t->body = std::move(body);
    t->line = line;
    t->col = col;
    return t;
}
inline TermPtr mk_if(TermPtr c, TermPtr a, TermPtr b, int line = 0, int col = 0) {
    auto t = std::make_shared<Term>();
    t->kind = Term::K::If;
    t->cond = std::move(c);
    t->then_t = std::move(a);
    t->else_t = std::move(b);
    t->line = line;
    t->col = col;
    return t;
}
inline TermPtr mk_case(TermPtr scrut, std::vector<CaseArm> arms, int line = 0, int col = 0) {
    auto t = std::make_shared<Term>();
    t->kind = Term::K::Case;
    t->scrutinee = std::move(scrut);
    t->arms = std::move(arms);
    t->line = line;
    t->col = col;
    return t;
}

// ----------------------------------------------------------- declarations ----

struct CtorDecl {
    std::string name;
    std::vector<TypeRef> arg_types;
};

struct AdtDecl {
    std::string name;
    std::vector<std::string> type_params;
    std::vector<CtorDecl> ctors;
    int line = 0, col = 0;

    // 1-based tag, by declaration order.
    int tag_of(size_t ctor_index) const { return static_cast<int>(ctor_index) + 1; }
};

struct Param {
    std::string name;
    TypeRef type;
};

struct FunDef {
    std::string name;
    std::vector<Param> params;
    TypeRef ret_type;
    TermPtr body;
    int line = 0, col = 0;

    // Higher-order templates (exactly one function-typed parameter) exist only
    // as monomorphization fodder; they never reach the pipeline.
    bool is_template() const {
        for (const auto& p : params)
            if (p.type.is_fun()) return true;
        return false;
    }
};

struct Program {
    std::vector<AdtDecl> adts;
    std::vector<FunDef> funs;

    const AdtDecl* find_adt(const std::string& n) const {
        for (const auto& a : adts)
            if (a.name == n) return &a;
        return nullptr;
    }
    const FunDef* find_fun(const std::string& n) const {
        for (const auto& f : funs)
            if (f.name == n) return &f;
        return nullptr;
    }
    // (adt, ctor_index) or {nullptr, 0}.
    std::pair<const AdtDecl*, size_t> find_ctor(const std::string& n) const {
        for (const auto& a : adts)
            for (size_t i = 0; i < a.ctors.size(); ++i)
                if (a.ctors[i].name == n) return {&a, i};
        return {nullptr, 0};
    }
};

// ---------------------------------------------------------------- values ----

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
    bool is_nat = true;
    Nat n;                      // when is_nat
    std::string adt, ctor;      // when constructor value
    size_t ctor_index = 0;
    std::vector<ValuePtr> args;
};

inline ValuePtr natv(Nat n) {
    auto v = std::make_shared<Value>();
    v->n = std::move(n);
    return v;
}
inline ValuePtr conv(std::string adt, std::string ctor, size_t idx, std::vector<ValuePtr> args) {
    auto v = std::make_shared<Value>();
    v->is_nat = false;
    v->adt = std::move(adt);
    v->ctor = std::move(ctor);
    v->ctor_index = idx;
    v->args = std::move(args);
    return v;
}

inline bool value_eq(const Value& a, const Value& b) {
    if (a.is_nat != b.is_nat) return false;
    if (a.is_nat) return a.n == b.n;
    if (a.adt != b.adt || a.ctor_index != b.ctor_index || a.args.size() != b.args.size())
        return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!value_eq(*a.args[i], *b.args[i])) return false;
    return true;
}

inline std::string show_value(const Value& v, bool parens = false) {
    if (v.is_nat) return v.n.str();
    if (v.args.empty()) return v.ctor;
    std::string s = v.ctor;
    for (const auto& a : v.args) {
        s += ' ';
        s += show_value(*a, true);
    }
    return parens ? "(" + s + ")" : s;
}

// Primitive function table shared by the checker and every evaluator.
// eq is polymorphic (both arguments of one type); the rest are Nat-only.
inline bool is_primitive(const std::string& n) {
    return n == "add" || n == "sub" || n == "eq" || n == "suc" || n == "fst" || n == "snd";
}
inline size_t primitive_arity(const std::string& n) {
    return (n == "suc" || n == "fst" || n == "snd") ? 1 : 2;
}

} // namespace rcc
