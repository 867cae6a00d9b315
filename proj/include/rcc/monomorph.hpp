#pragma once

// Instantiating a higher-order template with a concrete first-order function.
// A template has exactly one function-typed parameter; instantiation replaces
// every application of that parameter by the concrete function, drops the
// parameter, and renames self-calls (which must pass the parameter through
// unchanged) to the new definition.

#include "rcc/ast.hpp"
#include "rcc/check.hpp"
#include "rcc/error.hpp"

#include <string>
#include <vector>

namespace rcc {

namespace detail {

struct Monomorphizer {
    const std::string& tmpl_name;
    const std::string& hof; // the function parameter's name
    size_t hof_pos;
    const std::string& concrete;
    const std::string& new_name;

    TermPtr tr(const Term& t) const {
        switch (t.kind) {
        case Term::K::Var:
            if (t.name == hof)
                throw Error("template parameter '" + hof + "' escapes (used as a value)");
            return mk_var(t.name, t.line, t.col);
        case Term::K::NatLit:
            return mk_lit(t.lit, t.line, t.col);
        case Term::K::Let:
            return mk_let(t.bind, tr(*t.rhs), tr(*t.body), t.line, t.col);
        case Term::K::If:
            return mk_if(tr(*t.cond), tr(*t.then_t), tr(*t.else_t), t.line, t.col);
        case Term::K::Case: {
            std::vector<CaseArm> arms;
            for (const auto& a : t.arms) arms.push_back({a.ctor, a.binders, tr(*a.body)});
            return mk_case(tr(*t.scrutinee), std::move(arms), t.line, t.col);
        }
        case Term::K::App: {
            if (t.name == tmpl_name) {
                // Self-call: the function argument must ride through unchanged.
                const Term& carried = *t.args.at(hof_pos);
                if (carried.kind != Term::K::Var || carried.name != hof)
                    throw Error("self-call must pass template parameter '" + hof +
                                "' through unchanged");
                std::vector<TermPtr> args;
                for (size_t i = 0; i < t.args.size(); ++i)
                    if (i != hof_pos) args.push_back(tr(*t.args[i]));
                return mk_app(new_name, std::move(args), t.line, t.col);
            }
            std::vector<TermPtr> args;
            for (const auto& a : t.args) args.push_back(tr(*a));
            return mk_app(t.name == hof ? concrete : t.name, std::move(args), t.line, t.col);
        }
        }
        throw Error("unreachable term kind");
    }
};

inline void require_signature(const Program& p, const std::string& concrete,
                              const std::vector<TypeRef>& doms, const TypeRef& cod) {
    auto fail = [&](const std::string& got) {
        std::string want;
        for (const auto& d : doms) want += show_type(d) + " -> ";
        throw Error("'" + concrete + "' does not fit the template parameter: expected " +
                    want + show_type(cod) + ", found " + got);
    };
    if (is_primitive(concrete)) {
        size_t n = primitive_arity(concrete);
        bool ok = doms.size() == n && cod.is_nat();
        for (const auto& d : doms) ok = ok && d.is_nat();
        if (!ok) fail("the primitive's Nat signature");
        return;
    }
    const FunDef* g = p.find_fun(concrete);
    if (!g) throw Error("unknown concrete function '" + concrete + "'");
    if (g->is_template()) throw Error("'" + concrete + "' is itself a template");
    bool ok = g->params.size() == doms.size() && g->ret_type == cod;
    for (size_t i = 0; ok && i < doms.size(); ++i) ok = g->params[i].type == doms[i];
    if (!ok) {
        std::string got;
        for (const auto& prm : g->params) got += show_type(prm.type) + " -> ";
        fail(got + show_type(g->ret_type));
    }
}

} // namespace detail

// `concrete` is a primitive or an existing non-template function whose
// signature matches the template's function parameter. The result is not yet
// part of any program; append it and re-validate.
inline FunDef monomorphize_instance(const Program& p, const std::string& template_name,
                                    const std::string& concrete,
                                    const std::string& new_name) {
    const FunDef* t = p.find_fun(template_name);
    if (!t) throw Error("unknown template '" + template_name + "'");
    size_t hof_pos = t->params.size();
    for (size_t i = 0; i < t->params.size(); ++i) {
        if (!t->params[i].type.is_fun()) continue;
        if (hof_pos != t->params.size())
            throw Error("'" + template_name + "' has more than one function parameter");
        hof_pos = i;
    }
    if (hof_pos == t->params.size())
        throw Error("'" + template_name + "' is not a template (no function parameter)");

    const TypeRef& ft = t->params[hof_pos].type;
    std::vector<TypeRef> doms(ft.args.begin(), ft.args.end() - 1);
    detail::require_signature(p, concrete, doms, ft.args.back());

    if (p.find_fun(new_name) || p.find_ctor(new_name).first || is_primitive(new_name))
        throw Error("name '" + new_name + "' is already taken");

    detail::Monomorphizer mono{template_name, t->params[hof_pos].name, hof_pos, concrete,
                               new_name};
    FunDef out;
    out.name = new_name;
    for (size_t i = 0; i < t->params.size(); ++i)
        if (i != hof_pos) out.params.push_back(t->params[i]);
    out.ret_type = t->ret_type;
    out.body = mono.tr(*t->body);
    out.line = t->line;
    out.col = t->col;
    return out;
}

} // namespace rcc
