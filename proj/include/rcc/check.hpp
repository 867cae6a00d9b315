#pragma once

// Scope and type checking for parsed programs, plus the tail-position check
// that gates the compilation pipeline.
//
// The language is first-order: the only function-typed things are the single
// higher-order parameter of a template definition, and templates exist only to
// be monomorphized. A case over an ADT must list every constructor exactly
// once in declaration order; a case over Nat has exactly the arms 0 and Suc.
// Functions may call only earlier functions or themselves, so recursion is
// self-recursion and the pipeline can process definitions in order.

#include "rcc/ast.hpp"
#include "rcc/error.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rcc {

inline TypeRef subst_type(const TypeRef& t, const std::map<std::string, TypeRef>& s) {
    if (t.args.empty()) {
        auto it = s.find(t.head);
        if (it != s.end()) return it->second;
    }
    TypeRef out{t.head, {}};
    out.args.reserve(t.args.size());
    for (const auto& a : t.args) out.args.push_back(subst_type(a, s));
    return out;
}

namespace detail {

[[noreturn]] inline void err(const std::string& msg, int line, int col) {
    throw ParseError(msg, line, col);
}

// Structurally match `pattern` (may contain the given type parameters) against
// ground `concrete`, extending `subst`.
inline void match_type(const TypeRef& pattern, const TypeRef& concrete,
                       const std::set<std::string>& params,
                       std::map<std::string, TypeRef>& subst, int line, int col) {
    if (pattern.args.empty() && params.count(pattern.head)) {
        auto it = subst.find(pattern.head);
        if (it == subst.end()) {
            subst.emplace(pattern.head, concrete);
        } else if (it->second != concrete) {
            err("conflicting instantiations for type parameter '" + pattern.head + "': " +
                    show_type(it->second) + " vs " + show_type(concrete),
                line, col);
        }
        return;
    }
    if (pattern.head != concrete.head || pattern.args.size() != concrete.args.size())
        err("type mismatch: expected shape " + show_type(pattern) + ", found " +
                show_type(concrete),
            line, col);
    for (size_t i = 0; i < pattern.args.size(); ++i)
        match_type(pattern.args[i], concrete.args[i], params, subst, line, col);
}

inline bool type_solved(const TypeRef& t, const std::set<std::string>& params,
                        const std::map<std::string, TypeRef>& subst) {
    if (t.args.empty() && params.count(t.head)) return subst.count(t.head) != 0;
    for (const auto& a : t.args)
        if (!type_solved(a, params, subst)) return false;
    return true;
}

struct Checker {
    const Program& p;

    // ---- declaration-level checks ----

    void check_type_wf(const TypeRef& t, const std::set<std::string>& params, int line,
                       int col) const {
        if (t.is_fun()) err("function types are not allowed here", line, col);
        if (t.is_nat()) return;
        if (t.args.empty() && params.count(t.head)) return;
        const AdtDecl* d = p.find_adt(t.head);
        if (!d) err("unknown type '" + t.head + "'", line, col);
        if (d->type_params.size() != t.args.size())
            err("type '" + t.head + "' expects " + std::to_string(d->type_params.size()) +
                    " argument(s), got " + std::to_string(t.args.size()),
                line, col);
        for (const auto& a : t.args) check_type_wf(a, params, line, col);
    }

    void check_ground(const TypeRef& t, int line, int col) const {
        check_type_wf(t, {}, line, col);
    }

    void check_adts() const {
        std::set<std::string> adt_names, ctor_names;
        for (const auto& d : p.adts) {
            if (d.name == "Nat") err("type name 'Nat' is reserved", d.line, d.col);
            if (!adt_names.insert(d.name).second)
                err("duplicate type '" + d.name + "'", d.line, d.col);
            std::set<std::string> params;
            for (const auto& tp : d.type_params)
                if (!params.insert(tp).second)
                    err("duplicate type parameter '" + tp + "'", d.line, d.col);
            if (d.ctors.empty()) err("type '" + d.name + "' has no constructors", d.line, d.col);
            for (const auto& c : d.ctors) {
                if (c.name == "Suc") err("constructor name 'Suc' is reserved", d.line, d.col);
                if (!ctor_names.insert(c.name).second)
                    err("duplicate constructor '" + c.name + "'", d.line, d.col);
                for (const auto& at : c.arg_types) check_type_wf(at, params, d.line, d.col);
            }
        }
    }

    // ---- term-level checks ----

    struct Env {
        std::map<std::string, TypeRef> vars;
        const FunDef* fn = nullptr;
        size_t fn_index = 0;
    };

    const FunDef* resolve_callee(const Env& env, const std::string& name, int line,
                                 int col) const {
        for (size_t i = 0; i < p.funs.size(); ++i) {
            if (p.funs[i].name != name) continue;
            if (i > env.fn_index)
                err("'" + name + "' is defined later; functions may call only earlier "
                    "functions or themselves",
                    line, col);
            return &p.funs[i];
        }
        return nullptr;
    }

    TypeRef infer(const Env& env, const Term& t) const {
        switch (t.kind) {
        case Term::K::NatLit:
            return TypeRef::nat();
        case Term::K::Var: {
            auto it = env.vars.find(t.name);
            if (it == env.vars.end()) err("unbound variable '" + t.name + "'", t.line, t.col);
            if (it->second.is_fun())
                err("higher-order parameter '" + t.name + "' may only be applied", t.line,
                    t.col);
            return it->second;
        }
        case Term::K::Let: {
            TypeRef rt = infer(env, *t.rhs);
            Env e2 = env;
            e2.vars[t.bind] = rt;
            return infer(e2, *t.body);
        }
        case Term::K::If: {
            check(env, *t.cond, TypeRef::nat());
            TypeRef a = infer(env, *t.then_t);
            check(env, *t.else_t, a);
            return a;
        }
        case Term::K::Case: {
            TypeRef a;
            bool first = true;
            check_case(env, t, [&](const Env& e, const Term& body) {
                if (first) {
                    a = infer(e, body);
                    first = false;
                } else {
                    check(e, body, a);
                }
            });
            return a;
        }
        case Term::K::App:
            return infer_app(env, t, nullptr);
        }
        err("unreachable term kind", t.line, t.col);
    }

    void check(const Env& env, const Term& t, const TypeRef& expected) const {
        switch (t.kind) {
        case Term::K::Let: {
            TypeRef rt = infer(env, *t.rhs);
            Env e2 = env;
            e2.vars[t.bind] = rt;
            check(e2, *t.body, expected);
            return;
        }
        case Term::K::If: {
            check(env, *t.cond, TypeRef::nat());
            check(env, *t.then_t, expected);
            check(env, *t.else_t, expected);
            return;
        }
        case Term::K::Case: {
            check_case(env, t,
                       [&](const Env& e, const Term& body) { check(e, body, expected); });
            return;
        }
        case Term::K::App: {
            TypeRef got = infer_app(env, t, &expected);
            if (got != expected)
                err("expected " + show_type(expected) + ", found " + show_type(got), t.line,
                    t.col);
            return;
        }
        default: {
            TypeRef got = infer(env, t);
            if (got != expected)
                err("expected " + show_type(expected) + ", found " + show_type(got), t.line,
                    t.col);
            return;
        }
        }
    }

    // Shared shape check for case; calls `arm_body` on each arm with binders
    // in scope.
    template <class F>
    void check_case(const Env& env, const Term& t, F arm_body) const {
        TypeRef st = infer(env, *t.scrutinee);
        if (st.is_nat()) {
            if (t.arms.size() != 2 || t.arms[0].ctor != "0" || t.arms[1].ctor != "Suc")
                err("a case over Nat needs exactly the arms 0 and Suc, in that order", t.line,
                    t.col);
            arm_body(env, *t.arms[0].body);
            Env e2 = env;
            e2.vars[t.arms[1].binders[0]] = TypeRef::nat();
            arm_body(e2, *t.arms[1].body);
            return;
        }
        const AdtDecl* d = p.find_adt(st.head);
        if (!d) err("cannot case on a value of type " + show_type(st), t.line, t.col);
        if (t.arms.size() != d->ctors.size())
            err("case over " + d->name + " must have one arm per constructor (" +
                    std::to_string(d->ctors.size()) + ")",
                t.line, t.col);
        std::map<std::string, TypeRef> subst;
        for (size_t i = 0; i < d->type_params.size(); ++i)
            subst.emplace(d->type_params[i], st.args[i]);
        for (size_t i = 0; i < t.arms.size(); ++i) {
            const CaseArm& arm = t.arms[i];
            const CtorDecl& c = d->ctors[i];
            if (arm.ctor != c.name)
                err("arm " + std::to_string(i + 1) + " must match constructor '" + c.name +
                        "' (arms follow declaration order)",
                    t.line, t.col);
            if (arm.binders.size() != c.arg_types.size())
                err("constructor '" + c.name + "' has " + std::to_string(c.arg_types.size()) +
                        " argument(s), pattern binds " + std::to_string(arm.binders.size()),
                    t.line, t.col);
            Env e2 = env;
            for (size_t j = 0; j < arm.binders.size(); ++j)
                e2.vars[arm.binders[j]] = subst_type(c.arg_types[j], subst);
            arm_body(e2, *arm.body);
        }
    }

    TypeRef infer_app(const Env& env, const Term& t, const TypeRef* expected) const {
        // Local variables (the higher-order template parameter) shadow
        // everything else.
        auto vit = env.vars.find(t.name);
        if (vit != env.vars.end()) {
            const TypeRef& ft = vit->second;
            if (!ft.is_fun())
                err("'" + t.name + "' is not a function and cannot be applied", t.line, t.col);
            size_t doms = ft.args.size() - 1;
            if (t.args.size() != doms)
                err("higher-order parameter '" + t.name + "' must be fully applied (" +
                        std::to_string(doms) + " argument(s))",
                    t.line, t.col);
            for (size_t i = 0; i < doms; ++i) check(env, *t.args[i], ft.args[i]);
            return ft.args.back();
        }

        if (is_primitive(t.name)) {
            size_t n = primitive_arity(t.name);
            if (t.args.size() != n)
                err("primitive '" + t.name + "' takes " + std::to_string(n) + " argument(s)",
                    t.line, t.col);
            if (t.name == "eq") {
                // Polymorphic equality: both sides one (non-function) type.
                TypeRef a = infer(env, *t.args[0]);
                check(env, *t.args[1], a);
            } else {
                for (const auto& a : t.args) check(env, *a, TypeRef::nat());
            }
            return TypeRef::nat();
        }

        auto [adt, ci] = p.find_ctor(t.name);
        if (adt) return infer_ctor(env, t, *adt, ci, expected);

        const FunDef* g = resolve_callee(env, t.name, t.line, t.col);
        if (!g) err("unknown function or constructor '" + t.name + "'", t.line, t.col);
        if (t.args.size() != g->params.size())
            err("function '" + g->name + "' takes " + std::to_string(g->params.size()) +
                    " argument(s), got " + std::to_string(t.args.size()),
                t.line, t.col);
        for (size_t i = 0; i < t.args.size(); ++i) {
            const TypeRef& pt = g->params[i].type;
            if (pt.is_fun()) {
                // Passing a function along (self-call of a template): only the
                // identically-typed higher-order parameter fits.
                const Term& a = *t.args[i];
                if (a.kind != Term::K::Var)
                    err("only a higher-order parameter can be passed here", a.line, a.col);
                auto hit = env.vars.find(a.name);
                if (hit == env.vars.end() || hit->second != pt)
                    err("argument must be a higher-order parameter of type " + show_type(pt),
                        a.line, a.col);
            } else {
                check(env, *t.args[i], pt);
            }
        }
        return g->ret_type;
    }

    TypeRef infer_ctor(const Env& env, const Term& t, const AdtDecl& d, size_t ci,
                       const TypeRef* expected) const {
        const CtorDecl& c = d.ctors[ci];
        if (t.args.size() != c.arg_types.size())
            err("constructor '" + c.name + "' takes " + std::to_string(c.arg_types.size()) +
                    " argument(s), got " + std::to_string(t.args.size()),
                t.line, t.col);
        std::set<std::string> params(d.type_params.begin(), d.type_params.end());
        std::map<std::string, TypeRef> subst;
        if (expected && !expected->is_fun()) {
            // Expected type drives instantiation when available (handles Nil).
            TypeRef decl_result{d.name, {}};
            for (const auto& tp : d.type_params) decl_result.args.push_back({tp, {}});
            match_type(decl_result, *expected, params, subst, t.line, t.col);
        }
        for (size_t i = 0; i < t.args.size(); ++i) {
            const TypeRef& at = c.arg_types[i];
            if (type_solved(at, params, subst)) {
                check(env, *t.args[i], subst_type(at, subst));
            } else {
                TypeRef got = infer(env, *t.args[i]);
                match_type(at, got, params, subst, t.args[i]->line, t.args[i]->col);
            }
        }
        TypeRef result{d.name, {}};
        for (const auto& tp : d.type_params) {
            auto it = subst.find(tp);
            if (it == subst.end())
                err("cannot infer type argument '" + tp + "' of constructor '" + c.name +
                        "'; give it a typed context",
                    t.line, t.col);
            result.args.push_back(it->second);
        }
        return result;
    }

    void check_fun(const FunDef& f, size_t index) const {
        if (is_primitive(f.name))
            err("function name '" + f.name + "' collides with a primitive", f.line, f.col);
        for (size_t i = 0; i < index; ++i)
            if (p.funs[i].name == f.name) err("duplicate function '" + f.name + "'", f.line, f.col);

        size_t fn_params = 0;
        std::set<std::string> names;
        for (const auto& pr : f.params) {
            if (!names.insert(pr.name).second)
                err("duplicate parameter '" + pr.name + "'", f.line, f.col);
            if (pr.type.is_fun()) {
                ++fn_params;
                for (const auto& part : pr.type.args) check_ground(part, f.line, f.col);
            } else {
                check_ground(pr.type, f.line, f.col);
            }
        }
        if (fn_params > 1)
            err("a template may have only one higher-order parameter", f.line, f.col);
        check_ground(f.ret_type, f.line, f.col);

        Env env;
        env.fn = &f;
        env.fn_index = index;
        for (const auto& pr : f.params) env.vars[pr.name] = pr.type;
        check(env, *f.body, f.ret_type);
    }

    void run() const {
        check_adts();
        for (size_t i = 0; i < p.funs.size(); ++i) check_fun(p.funs[i], i);
    }
};

} // namespace detail

// Throws ParseError (with source position) on any scope/type/shape problem.
inline void validate(const Program& p) { detail::Checker{p}.run(); }

// ------------------------------------------------------------ tail check ----

struct TailReport {
    bool ok = true;
    int line = 0, col = 0;
    std::string what;
};

namespace detail {

inline void tail_walk(const std::string& fname, const Term& t, bool tail, TailReport& r) {
    if (!r.ok) return;
    switch (t.kind) {
    case Term::K::Var:
        if (t.name == fname) {
            r = {false, t.line, t.col, "function name '" + fname + "' used as a value"};
        }
        return;
    case Term::K::NatLit:
        return;
    case Term::K::App:
        if (t.name == fname && !tail) {
            r = {false, t.line, t.col, "recursive call to '" + fname + "' is not in tail position"};
            return;
        }
        for (const auto& a : t.args) tail_walk(fname, *a, false, r);
        return;
    case Term::K::Let:
        tail_walk(fname, *t.rhs, false, r);
        tail_walk(fname, *t.body, tail, r);
        return;
    case Term::K::If:
        tail_walk(fname, *t.cond, false, r);
        tail_walk(fname, *t.then_t, tail, r);
        tail_walk(fname, *t.else_t, tail, r);
        return;
    case Term::K::Case:
        tail_walk(fname, *t.scrutinee, false, r);
        for (const auto& arm : t.arms) tail_walk(fname, *arm.body, tail, r);
        return;
    }
}

} // namespace detail

// Every self-reference must be a call in tail position. Tail positions: the
// body root, both branches of an If, the body of a Let, and case arms; never
// a condition, a Let right-hand side, a scrutinee, or an argument.
inline TailReport check_tail(const FunDef& f) {
    TailReport r;
    detail::tail_walk(f.name, *f.body, true, r);
    return r;
}

} // namespace rcc
