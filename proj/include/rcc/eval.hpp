#pragma once

// Reference interpreter for the source language. Tail self-calls run as a
// loop (constant C++ stack); non-tail recursion re-enters the evaluator and is
// depth-guarded. Fuel is charged per function entry and per tail iteration.

#include "rcc/ast.hpp"
#include "rcc/error.hpp"
#include "rcc/natenc.hpp"

#include <map>
#include <string>
#include <vector>

namespace rcc {

namespace detail {

struct RefEvaluator {
    const Program& p;
    std::uint64_t fuel;
    int depth = 0;
    // Each source-level call costs several C++ frames; keep the guard low
    // enough to fire well before the real stack runs out.
    static constexpr int kMaxDepth = 2000;

    using Env = std::map<std::string, ValuePtr>;

    struct Res {
        ValuePtr v;                  // set unless tail
        bool tail = false;
        std::vector<ValuePtr> targs; // set when tail
    };

    void burn() {
        if (fuel == 0) throw FuelError("evaluation fuel exhausted");
        --fuel;
    }

    ValuePtr call(const FunDef& f, std::vector<ValuePtr> args) {
        if (args.size() != f.params.size())
            throw Error("'" + f.name + "' wants " + std::to_string(f.params.size()) +
                        " argument(s), got " + std::to_string(args.size()));
        if (++depth > kMaxDepth) {
            --depth;
            throw FuelError("non-tail call depth exceeded");
        }
        while (true) {
            burn();
            Env env;
            for (size_t i = 0; i < f.params.size(); ++i) env[f.params[i].name] = args[i];
            Res r = eval(f, env, *f.body, true);
            if (!r.tail) {
                --depth;
                return r.v;
            }
            args = std::move(r.targs);
        }
    }

    ValuePtr plain(const FunDef& f, const Env& env, const Term& t) {
        Res r = eval(f, env, t, false);
        return r.v;
    }

    static Nat as_nat(const ValuePtr& v, const char* who) {
        if (!v->is_nat) throw Error(std::string(who) + ": expected a Nat");
        return v->n;
    }

    ValuePtr apply_primitive(const std::string& name, const std::vector<ValuePtr>& a) {
        if (name == "add") return natv(as_nat(a[0], "add") + as_nat(a[1], "add"));
        if (name == "sub") return natv(monus(as_nat(a[0], "sub"), as_nat(a[1], "sub")));
        if (name == "suc") return natv(as_nat(a[0], "suc") + 1);
        if (name == "eq") return natv(value_eq(*a[0], *a[1]) ? 1 : 0);
        if (name == "fst") return natv(cantor_fst(as_nat(a[0], "fst")));
        if (name == "snd") return natv(cantor_snd(as_nat(a[0], "snd")));
        throw Error("unknown primitive '" + name + "'");
    }

    Res eval(const FunDef& f, const Env& env, const Term& t, bool tail) {
        switch (t.kind) {
        case Term::K::NatLit:
            return {natv(t.lit)};
        case Term::K::Var: {
            auto it = env.find(t.name);
            if (it == env.end()) throw Error("unbound variable '" + t.name + "'");
            return {it->second};
        }
        case Term::K::Let: {
            ValuePtr v = plain(f, env, *t.rhs);
            Env e2 = env;
            e2[t.bind] = std::move(v);
            return eval(f, e2, *t.body, tail);
        }
        case Term::K::If: {
            Nat c = as_nat(plain(f, env, *t.cond), "if");
            return eval(f, env, c != 0 ? *t.then_t : *t.else_t, tail);
        }
        case Term::K::Case: {
            ValuePtr s = plain(f, env, *t.scrutinee);
            if (s->is_nat) {
                if (s->n == 0) return eval(f, env, *t.arms[0].body, tail);
                Env e2 = env;
                e2[t.arms[1].binders[0]] = natv(s->n - 1);
                return eval(f, e2, *t.arms[1].body, tail);
            }
            const CaseArm& arm = t.arms.at(s->ctor_index);
            Env e2 = env;
            for (size_t i = 0; i < arm.binders.size(); ++i) e2[arm.binders[i]] = s->args[i];
            return eval(f, e2, *arm.body, tail);
        }
        case Term::K::App: {
            std::vector<ValuePtr> args;
            args.reserve(t.args.size());
            for (const auto& a : t.args) args.push_back(plain(f, env, *a));
            if (t.name == f.name && tail) return {nullptr, true, std::move(args)};
            if (env.count(t.name))
                throw Error("cannot evaluate a higher-order template directly; "
                            "monomorphize it first");
            if (is_primitive(t.name)) return {apply_primitive(t.name, args)};
            auto [adt, ci] = p.find_ctor(t.name);
            if (adt) return {conv(adt->name, adt->ctors[ci].name, ci, std::move(args))};
            const FunDef* g = p.find_fun(t.name);
            if (!g) throw Error("unknown function '" + t.name + "'");
            return {call(*g, std::move(args))};
        }
        }
        throw Error("unreachable term kind");
    }
};

} // namespace detail

// fuel bounds function entries + tail iterations.
inline ValuePtr eval_ref(const Program& p, const std::string& fname,
                         std::vector<ValuePtr> args, std::uint64_t fuel = 1'000'000) {
    const FunDef* f = p.find_fun(fname);
    if (!f) throw Error("unknown function '" + fname + "'");
    if (f->is_template())
        throw Error("'" + fname + "' is a template; monomorphize it first");
    detail::RefEvaluator ev{p, fuel};
    return ev.call(*f, std::move(args));
}

} // namespace rcc
