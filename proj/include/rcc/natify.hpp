#pragma once

// White-box translation of checked, tail-recursive source functions into the
// NatTerm IR, so that running the translation on encoded inputs agrees with
// encoding the source-level result ("relatedness").
//
//   - parameters become positional Args, source lets become de Bruijn Lets
//   - a case becomes the tag-test cascade of lower_case_shape, with each
//     arm's binders replaced by selector nests over the scrutinee; scrutinees
//     that are not already variables are Let-bound first so they are
//     evaluated once
//   - a case over Nat becomes a zero test, the Suc binder turning into
//     "scrutinee - 1"
//   - constructor applications become Cantor pairs, built with the reserved
//     helper %pair (a tail-recursive triangle-sum; see pair_fun) and folded
//     to literals when every part is constant, e.g. an empty list is just 1
//   - a tail self-call becomes TailCall, every other call a plain Call
//
// eq on ADT arguments needs no special casing: both sides arrive encoded and
// primitive eq compares the encodings, which are injective.

#include "rcc/ast.hpp"
#include "rcc/check.hpp"
#include "rcc/error.hpp"
#include "rcc/eval.hpp"
#include "rcc/gen.hpp"
#include "rcc/nat_eval.hpp"
#include "rcc/nat_ir.hpp"
#include "rcc/natenc.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rcc {

struct NatifyOptions {
    // Mutation hooks for the harness.
    bool flip_if_arms = false;       // swap then/else of every emitted If
    bool selector_off_by_one = false; // drop one snd from every selector nest
};

// %tri(i, acc, s, b) = if i = s then acc + b else %tri(i+1, acc + (i+1), s, b)
// Started at (0, 0, s, b) it computes s(s+1)/2 + b.
inline NatFunDef tri_fun() {
    NatTermPtr i1 = nt_call("suc", {nt_arg(0)});
    NatTermPtr body = nt_if(
        nt_call("eq", {nt_arg(0), nt_arg(2)}), nt_call("add", {nt_arg(1), nt_arg(3)}),
        nt_tailcall({i1, nt_call("add", {nt_arg(1), nt_call("suc", {nt_arg(0)})}), nt_arg(2),
                     nt_arg(3)}));
    return {"%tri", 4, std::move(body)};
}

// %pair(a, b) = %tri(0, 0, a+b, b)  —  the Cantor pair.
inline NatFunDef pair_fun() {
    NatTermPtr body = nt_call(
        "%tri", {nt_num(0), nt_num(0), nt_call("add", {nt_arg(0), nt_arg(1)}), nt_arg(1)});
    return {"%pair", 2, std::move(body)};
}

namespace detail {

struct Natifier {
    const Program& p;
    const FunDef& f;
    NatifyOptions opts;

    // How to rebuild a source variable at the current Let depth: a base
    // (argument or enclosing let) plus a chain of selector / predecessor
    // steps accumulated by the patterns that bound it.
    struct Step {
        bool pred = false; // Suc binder: subtract one
        size_t arity = 0, j = 0;
    };
    struct VarRef {
        bool is_arg = true;
        size_t index = 0; // argument position, or let depth at binding
        std::vector<Step> steps;
    };

    std::vector<std::pair<std::string, VarRef>> scope;
    size_t depth = 0;

    const VarRef& lookup(const std::string& n) const {
        for (size_t i = scope.size(); i-- > 0;)
            if (scope[i].first == n) return scope[i].second;
        throw Error("unbound variable '" + n + "' during translation");
    }

    NatTermPtr apply_selector(NatTermPtr x, size_t arity, size_t j) const {
        size_t snds = opts.selector_off_by_one ? j - 1 : j;
        for (size_t k = 0; k < snds; ++k) x = nt_call("snd", {std::move(x)});
        if (j < arity) x = nt_call("fst", {std::move(x)});
        return x;
    }

    NatTermPtr build(const VarRef& r) const {
        NatTermPtr x = r.is_arg ? nt_arg(r.index) : nt_bound(depth - 1 - r.index);
        for (const Step& st : r.steps)
            x = st.pred ? nt_call("sub", {std::move(x), nt_num(1)})
                        : apply_selector(std::move(x), st.arity, st.j);
        return x;
    }

    NatTermPtr mk_if(NatTermPtr c, NatTermPtr t, NatTermPtr e) const {
        if (opts.flip_if_arms) std::swap(t, e);
        return nt_if(std::move(c), std::move(t), std::move(e));
    }

    NatTermPtr mk_pair(NatTermPtr a, NatTermPtr b) const {
        if (a->kind == NatTerm::K::Num && b->kind == NatTerm::K::Num)
            return nt_num(cantor_pair(a->num, b->num));
        return nt_call("%pair", {std::move(a), std::move(b)});
    }

    // sref by value: pushing binders below may reallocate `scope`, which
    // would invalidate a reference into it.
    NatTermPtr dispatch(const Term& t, VarRef sref, bool tail) {
        // Nat scrutinee: zero test.
        if (t.arms[0].ctor == "0") {
            NatTermPtr z = nt_call("eq", {build(sref), nt_num(0)});
            NatTermPtr arm0 = go(*t.arms[0].body, tail);
            VarRef m = sref;
            m.steps.push_back({true, 0, 0});
            scope.emplace_back(t.arms[1].binders[0], std::move(m));
            NatTermPtr arm1 = go(*t.arms[1].body, tail);
            scope.pop_back();
            return mk_if(std::move(z), std::move(arm0), std::move(arm1));
        }

        auto [d, first_ci] = p.find_ctor(t.arms[0].ctor);
        if (!d || first_ci != 0) throw Error("malformed case during translation");
        EncodedAdt enc = EncodedAdt::of(*d);

        auto arm = [&](size_t i) {
            const CaseArm& a = t.arms[i];
            size_t pushed = 0;
            for (size_t j = 0; j < a.binders.size(); ++j) {
                VarRef r = sref;
                r.steps.push_back({false, a.binders.size(), j + 1});
                scope.emplace_back(a.binders[j], std::move(r));
                ++pushed;
            }
            NatTermPtr body = go(*a.body, tail);
            while (pushed--) scope.pop_back();
            return body;
        };

        size_t n = enc.n_ctors();
        NatTermPtr out = arm(n - 1);
        for (size_t i = n - 1; i-- > 0;) {
            NatTermPtr test =
                nt_call("eq", {nt_call("fst", {build(sref)}), nt_num(enc.tag(i))});
            out = mk_if(std::move(test), arm(i), std::move(out));
        }
        return out;
    }

    NatTermPtr go(const Term& t, bool tail) {
        switch (t.kind) {
        case Term::K::NatLit:
            return nt_num(t.lit);
        case Term::K::Var:
            return build(lookup(t.name));
        case Term::K::Let: {
            NatTermPtr rhs = go(*t.rhs, false);
            scope.emplace_back(t.bind, VarRef{false, depth, {}});
            ++depth;
            NatTermPtr body = go(*t.body, tail);
            --depth;
            scope.pop_back();
            return nt_let(std::move(rhs), std::move(body));
        }
        case Term::K::If:
            return mk_if(go(*t.cond, false), go(*t.then_t, tail), go(*t.else_t, tail));
        case Term::K::Case: {
            if (t.scrutinee->kind == Term::K::Var)
                return dispatch(t, lookup(t.scrutinee->name), tail);
            // Bind computed scrutinees once.
            NatTermPtr s = go(*t.scrutinee, false);
            VarRef ref{false, depth, {}};
            ++depth;
            NatTermPtr d = dispatch(t, ref, tail);
            --depth;
            return nt_let(std::move(s), std::move(d));
        }
        case Term::K::App: {
            std::vector<NatTermPtr> args;
            args.reserve(t.args.size());
            for (const auto& a : t.args) args.push_back(go(*a, false));
            if (t.name == f.name) {
                if (!tail) throw Error("non-tail self-call survived check_tail");
                return nt_tailcall(std::move(args));
            }
            if (is_primitive(t.name)) return nt_call(t.name, std::move(args));
            auto [adt, ci] = p.find_ctor(t.name);
            if (adt) {
                EncodedAdt enc = EncodedAdt::of(*adt);
                NatTermPtr nest = nt_num(0);
                if (!args.empty()) {
                    nest = args.back();
                    for (size_t i = args.size() - 1; i-- > 0;)
                        nest = mk_pair(args[i], std::move(nest));
                }
                return mk_pair(nt_num(enc.tag(ci)), std::move(nest));
            }
            if (p.find_fun(t.name)) return nt_call(t.name, std::move(args));
            throw Error("unknown application head '" + t.name + "' during translation");
        }
        }
        throw Error("unreachable term kind");
    }
};

inline bool mentions_callee(const NatTerm& t, const std::string& name) {
    switch (t.kind) {
    case NatTerm::K::Call:
        if (t.callee == name) return true;
        [[fallthrough]];
    case NatTerm::K::TailCall:
        for (const auto& a : t.args)
            if (mentions_callee(*a, name)) return true;
        return false;
    case NatTerm::K::If:
        return mentions_callee(*t.cond, name) || mentions_callee(*t.then_t, name) ||
               mentions_callee(*t.else_t, name);
    case NatTerm::K::Let:
        return mentions_callee(*t.rhs, name) || mentions_callee(*t.body, name);
    default:
        return false;
    }
}

} // namespace detail

// f must be a checked, tail-recursive, non-template definition.
inline NatFunDef natify_fun(const Program& p, const FunDef& f, NatifyOptions opts = {}) {
    if (f.is_template())
        throw Error("'" + f.name + "' is a template; monomorphize it first");
    TailReport tr = check_tail(f);
    if (!tr.ok)
        throw Error("'" + f.name + "' is not tail-recursive: " + tr.what);
    detail::Natifier nat{p, f, opts};
    for (size_t i = 0; i < f.params.size(); ++i)
        nat.scope.emplace_back(f.params[i].name, detail::Natifier::VarRef{true, i, {}});
    NatTermPtr body = nat.go(*f.body, true);
    return {f.name, f.params.size(), std::move(body)};
}

// Translate every non-template function, prepending the %tri/%pair helpers
// when some translation builds pairs.
inline NatProgram natify_program(const Program& p, NatifyOptions opts = {}) {
    std::vector<NatFunDef> defs;
    bool need_pair = false;
    for (const auto& f : p.funs) {
        if (f.is_template()) continue;
        NatFunDef d = natify_fun(p, f, opts);
        need_pair = need_pair || detail::mentions_callee(*d.body, "%pair");
        defs.push_back(std::move(d));
    }
    NatProgram np;
    if (need_pair) {
        np.defs.push_back(tri_fun());
        np.defs.push_back(pair_fun());
    }
    for (auto& d : defs) np.defs.push_back(std::move(d));
    return np;
}

// --------------------------------------------------------- relatedness ----

struct RelatednessReport {
    std::string function;
    size_t samples = 0, passed = 0, fuel_exhausted = 0;
    struct Mismatch {
        std::string inputs;
        std::string expected, actual; // encoded results, as decimal strings
    };
    std::vector<Mismatch> mismatches;

    bool ok() const { return passed == samples; }
};

// Draw `samples` random well-typed argument tuples and compare
// natify(f(args)) with f_n(natify(args)). Runs out of fuel count as failures
// of the sample but are tallied separately.
inline RelatednessReport relatedness_check(const Program& p, const FunDef& f,
                                           const NatProgram& np, size_t samples,
                                           std::uint64_t seed,
                                           const ValueProfile& prof = {},
                                           std::uint64_t fuel = 50'000'000) {
    RelatednessReport rep;
    rep.function = f.name;
    rep.samples = samples;
    Rng rng(seed);
    for (size_t k = 0; k < samples; ++k) {
        std::vector<ValuePtr> args;
        std::vector<Nat> enc_args;
        std::string shown;
        for (const auto& prm : f.params) {
            ValuePtr v = random_value(rng, p, prm.type, prof);
            enc_args.push_back(natify(p, prm.type, *v));
            if (!shown.empty()) shown += ", ";
            shown += prm.name + " = " + show_value(*v);
            args.push_back(std::move(v));
        }
        try {
            ValuePtr ref = eval_ref(p, f.name, args, fuel);
            Nat expected = natify(p, f.ret_type, *ref);
            Nat actual = eval_nat(np, f.name, enc_args, fuel);
            if (expected == actual) {
                ++rep.passed;
            } else {
                rep.mismatches.push_back({shown, expected.str(), actual.str()});
            }
        } catch (const FuelError&) {
            ++rep.fuel_exhausted;
            rep.mismatches.push_back({shown, "(result)", "(fuel exhausted)"});
        }
    }
    return rep;
}

} // namespace rcc
