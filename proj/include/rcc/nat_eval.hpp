#pragma once

// Evaluator for the NatTerm IR. TailCall rebinds the argument vector and
// loops, so tail depth never grows the C++ stack; Call re-enters and is
// depth-guarded. Fuel is charged per node visited.

#include "rcc/error.hpp"
#include "rcc/nat.hpp"
#include "rcc/nat_ir.hpp"
#include "rcc/natenc.hpp"

#include <string>
#include <vector>

namespace rcc {

namespace detail {

struct NatEvaluator {
    const NatProgram& p;
    std::uint64_t fuel;
    int depth = 0;
    static constexpr int kMaxDepth = 8000;

    struct Res {
        Nat v;
        bool tail = false;
        std::vector<Nat> targs;
    };

    void burn() {
        if (fuel == 0) throw FuelError("NatTerm fuel exhausted");
        --fuel;
    }

    Nat call(const NatFunDef& d, std::vector<Nat> args) {
        if (args.size() != d.arity)
            throw Error("'" + d.name + "' wants " + std::to_string(d.arity) +
                        " argument(s), got " + std::to_string(args.size()));
        if (++depth > kMaxDepth) {
            --depth;
            throw FuelError("non-tail Call depth exceeded");
        }
        std::vector<Nat> lets;
        while (true) {
            lets.clear();
            Res r = eval(d, *d.body, args, lets, true);
            if (!r.tail) {
                --depth;
                return r.v;
            }
            if (r.targs.size() != d.arity)
                throw Error("tailcall in '" + d.name + "' passes " +
                            std::to_string(r.targs.size()) + " argument(s), arity is " +
                            std::to_string(d.arity));
            args = std::move(r.targs);
        }
    }

    Nat prim(const std::string& name, const std::vector<Nat>& a) {
        if (name == "add") return a[0] + a[1];
        if (name == "sub") return monus(a[0], a[1]);
        if (name == "eq") return a[0] == a[1] ? 1 : 0;
        if (name == "suc") return a[0] + 1;
        if (name == "fst") return cantor_fst(a[0]);
        if (name == "snd") return cantor_snd(a[0]);
        throw Error("unknown call target '" + name + "'");
    }

    Nat plain(const NatFunDef& d, const NatTerm& t, const std::vector<Nat>& args,
              std::vector<Nat>& lets) {
        return eval(d, t, args, lets, false).v;
    }

    Res eval(const NatFunDef& d, const NatTerm& t, const std::vector<Nat>& args,
             std::vector<Nat>& lets, bool tail) {
        burn();
        switch (t.kind) {
        case NatTerm::K::Num:
            return {t.num};
        case NatTerm::K::Arg:
            if (t.index >= args.size())
                throw Error("argument index " + std::to_string(t.index) + " out of range in '" +
                            d.name + "'");
            return {args[t.index]};
        case NatTerm::K::LetBound:
            if (t.index >= lets.size())
                throw Error("let index " + std::to_string(t.index) + " out of range in '" +
                            d.name + "'");
            return {lets[lets.size() - 1 - t.index]};
        case NatTerm::K::If: {
            Nat c = plain(d, *t.cond, args, lets);
            return eval(d, c != 0 ? *t.then_t : *t.else_t, args, lets, tail);
        }
        case NatTerm::K::Let: {
            Nat v = plain(d, *t.rhs, args, lets);
            lets.push_back(std::move(v));
            Res r = eval(d, *t.body, args, lets, tail);
            lets.pop_back();
            return r;
        }
        case NatTerm::K::TailCall: {
            if (!tail) throw Error("tailcall outside tail position in '" + d.name + "'");
            std::vector<Nat> vs;
            vs.reserve(t.args.size());
            for (const auto& a : t.args) vs.push_back(plain(d, *a, args, lets));
            return {Nat(0), true, std::move(vs)};
        }
        case NatTerm::K::Call: {
            std::vector<Nat> vs;
            vs.reserve(t.args.size());
            for (const auto& a : t.args) vs.push_back(plain(d, *a, args, lets));
            // The reserved %pair helper is shortcut: its defined loop is
            // linear in the *value*, and encodings of nested data get
            // astronomically large. The definition itself is exercised by the
            // register-machine stages on small inputs.
            if (t.callee == "%pair" && vs.size() == 2)
                return {cantor_pair(vs[0], vs[1])};
            const NatFunDef* g = p.find(t.callee);
            if (g) return {call(*g, std::move(vs))};
            if (is_nat_primitive(t.callee)) {
                size_t want = (t.callee == "suc" || t.callee == "fst" || t.callee == "snd") ? 1 : 2;
                if (vs.size() != want)
                    throw Error("primitive '" + t.callee + "' wants " + std::to_string(want) +
                                " argument(s)");
                return {prim(t.callee, vs)};
            }
            throw Error("unknown call target '" + t.callee + "'");
        }
        }
        throw Error("unreachable NatTerm kind");
    }
};

} // namespace detail

inline Nat eval_nat(const NatProgram& p, const std::string& fname, std::vector<Nat> args,
                    std::uint64_t fuel = 10'000'000) {
    const NatFunDef* d = p.find(fname);
    if (!d) throw Error("unknown function '" + fname + "'");
    detail::NatEvaluator ev{p, fuel};
    return ev.call(*d, std::move(args));
}

} // namespace rcc
