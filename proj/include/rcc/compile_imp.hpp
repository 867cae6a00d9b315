#pragma once

// NatTerm -> IMP^TC compiler.
//
// A function f of arity k reads its arguments from f.arg.0 .. f.arg.(k-1) and
// leaves its result in f.ret. Compilation of a term targets a register r and
// threads a compile-time list b of registers holding the enclosing Let values
// (index n reads b[n]); scratch registers are f.tmp.0, f.tmp.1, ... in
// left-to-right traversal order. The whole body compiles against r = f.ret,
// and TailCall becomes argument-register updates followed by RECURSE.
//
// Calls go through a registry of previously compiled IMP^W programs; the six
// primitives are seeded by stdlib_primitives(). fst and snd recover Cantor
// components by searching for the triangle root with a while loop.

#include "rcc/error.hpp"
#include "rcc/imp.hpp"
#include "rcc/nat_ir.hpp"

#include <map>
#include <string>
#include <vector>

namespace rcc {

struct RegNamer {
    std::string fn;
    std::uint64_t k = 0;

    std::string fresh() { return fn + ".tmp." + std::to_string(k++); }
    static std::string arg(const std::string& f, size_t i) {
        return f + ".arg." + std::to_string(i);
    }
    static std::string ret(const std::string& f) { return f + ".ret"; }
};

struct CompiledFun {
    Cmd prog; // IMP^W
    size_t arity = 0;
};

using FuncRegistry = std::map<std::string, CompiledFun>;

namespace detail {

struct TcCompiler {
    const NatFunDef& f;
    const FuncRegistry& registry;
    RegNamer namer;

    Cmd go(const NatTerm& t, std::vector<std::string>& b, const std::string& r) {
        switch (t.kind) {
        case NatTerm::K::Num:
            return c_assign(r, ax_const(t.num));
        case NatTerm::K::Arg:
            if (t.index >= f.arity)
                throw Error("argument index out of range in '" + f.name + "'");
            return c_assign(r, ax_reg(RegNamer::arg(f.name, t.index)));
        case NatTerm::K::LetBound:
            if (t.index >= b.size())
                throw Error("let index out of range in '" + f.name + "'");
            return c_assign(r, ax_reg(b[t.index]));
        case NatTerm::K::If: {
            std::string x = namer.fresh();
            Cmd cond = go(*t.cond, b, x);
            Cmd thn = go(*t.then_t, b, r);
            Cmd els = go(*t.else_t, b, r);
            return c_seq(std::move(cond), c_if(x, std::move(thn), std::move(els)));
        }
        case NatTerm::K::Let: {
            std::string x = namer.fresh();
            Cmd rhs = go(*t.rhs, b, x);
            b.insert(b.begin(), x);
            Cmd body = go(*t.body, b, r);
            b.erase(b.begin());
            return c_seq(std::move(rhs), std::move(body));
        }
        case NatTerm::K::Call: {
            auto it = registry.find(t.callee);
            if (it == registry.end())
                throw Error("unknown callee '" + t.callee + "'; compile callees first");
            if (it->second.arity != t.args.size())
                throw Error("callee '" + t.callee + "' wants " +
                            std::to_string(it->second.arity) + " argument(s)");
            std::vector<Cmd> parts;
            std::vector<std::string> xs;
            for (const auto& a : t.args) {
                std::string x = namer.fresh();
                parts.push_back(go(*a, b, x));
                xs.push_back(std::move(x));
            }
            for (size_t i = 0; i < xs.size(); ++i)
                parts.push_back(c_assign(RegNamer::arg(t.callee, i), ax_reg(xs[i])));
            std::string ret = RegNamer::ret(t.callee);
            parts.push_back(c_call(it->second.prog, ret));
            parts.push_back(c_assign(r, ax_reg(ret)));
            return seq_chain(std::move(parts));
        }
        case NatTerm::K::TailCall: {
            if (t.args.size() != f.arity)
                throw Error("tailcall arity mismatch in '" + f.name + "'");
            std::vector<Cmd> parts;
            std::vector<std::string> xs;
            for (const auto& a : t.args) {
                std::string x = namer.fresh();
                parts.push_back(go(*a, b, x));
                xs.push_back(std::move(x));
            }
            // All argument values are staged in scratch first, then moved:
            // the new arguments may depend on the old ones.
            for (size_t i = 0; i < xs.size(); ++i)
                parts.push_back(c_assign(RegNamer::arg(f.name, i), ax_reg(xs[i])));
            parts.push_back(c_recurse());
            return seq_chain(std::move(parts));
        }
        }
        throw Error("unreachable NatTerm kind");
    }
};

} // namespace detail

// The result is an IMP^TC program; run it with run_imptc after placing the
// arguments in f.arg.*, and read f.ret.
inline Cmd compile(const NatFunDef& f, const FuncRegistry& registry) {
    NatTailReport tr = validate_tail(*f.body);
    if (!tr.ok) throw Error("'" + f.name + "': tailcall outside tail position at " + tr.where);
    detail::TcCompiler c{f, registry, RegNamer{f.name}};
    std::vector<std::string> b;
    return c.go(*f.body, b, RegNamer::ret(f.name));
}

// --------------------------------------------------------- normalization ----

// Reassociate sequences to the right and pull trailing code into both arms of
// an If. Step counts and final states are preserved exactly: both rewrites
// shuffle the same per-node charges into a different bracketing.
inline Cmd normalize_seq(const Cmd& p) {
    switch (p->kind) {
    case Command::K::Seq: {
        const Cmd& a = p->a;
        if (a->kind == Command::K::Seq)
            return normalize_seq(c_seq(a->a, c_seq(a->b, p->b)));
        if (a->kind == Command::K::If)
            return c_if(a->reg, normalize_seq(c_seq(a->a, p->b)),
                        normalize_seq(c_seq(a->b, p->b)));
        return c_seq(normalize_seq(a), normalize_seq(p->b));
    }
    case Command::K::If:
        return c_if(p->reg, normalize_seq(p->a), normalize_seq(p->b));
    case Command::K::While:
        return c_while(p->reg, normalize_seq(p->a));
    default:
        // Atomic commands; Call callees are separate programs and stay as-is.
        return p;
    }
}

// ------------------------------------------------------ primitive library ----

namespace detail {

// Shared triangle-root search: finds root = max t with t(t+1)/2 <= n, leaving
// pre.tri = T(root) and pre.step = root + 1.
inline std::vector<Cmd> triangle_search(const std::string& pre) {
    auto R = [&](const char* n) { return pre + "." + n; };
    Cmd body = seq_chain({
        c_assign(R("t"), ax_add(atom_reg(R("tri")), atom_reg(R("step")))),
        c_assign(R("d"), ax_sub(atom_reg(R("t")), atom_reg(R("n")))),
        c_if(R("d"), c_assign(R("go"), ax_const(0)),
             c_seq(c_assign(R("tri"), ax_reg(R("t"))),
                   c_assign(R("step"), ax_add(atom_reg(R("step")), atom_const(1))))),
    });
    return {
        c_assign(R("n"), ax_reg(RegNamer::arg(pre, 0))),
        c_assign(R("tri"), ax_const(0)),
        c_assign(R("step"), ax_const(1)),
        c_assign(R("go"), ax_const(1)),
        c_while(R("go"), std::move(body)),
    };
}

} // namespace detail

// add, sub, eq, suc, fst, snd as IMP^W programs under the f.arg.*/f.ret
// conventions.
inline FuncRegistry stdlib_primitives() {
    FuncRegistry reg;

    reg["add"] = {c_assign("add.ret",
                           ax_add(atom_reg(RegNamer::arg("add", 0)),
                                  atom_reg(RegNamer::arg("add", 1)))),
                  2};
    reg["sub"] = {c_assign("sub.ret",
                           ax_sub(atom_reg(RegNamer::arg("sub", 0)),
                                  atom_reg(RegNamer::arg("sub", 1)))),
                  2};
    reg["suc"] = {c_assign("suc.ret", ax_add(atom_reg(RegNamer::arg("suc", 0)), atom_const(1))),
                  1};

    // eq: zero iff both differences vanish.
    reg["eq"] = {seq_chain({
                     c_assign("eq.d1", ax_sub(atom_reg(RegNamer::arg("eq", 0)),
                                              atom_reg(RegNamer::arg("eq", 1)))),
                     c_assign("eq.d2", ax_sub(atom_reg(RegNamer::arg("eq", 1)),
                                              atom_reg(RegNamer::arg("eq", 0)))),
                     c_assign("eq.d", ax_add(atom_reg("eq.d1"), atom_reg("eq.d2"))),
                     c_if("eq.d", c_assign("eq.ret", ax_const(0)),
                          c_assign("eq.ret", ax_const(1))),
                 }),
                 2};

    // fst/snd: with root r and b = n - T(r), the components are (r - b, b).
    {
        std::vector<Cmd> parts = detail::triangle_search("fst");
        parts.push_back(c_assign("fst.b", ax_sub(atom_reg("fst.n"), atom_reg("fst.tri"))));
        parts.push_back(c_assign("fst.r", ax_sub(atom_reg("fst.step"), atom_const(1))));
        parts.push_back(c_assign("fst.ret", ax_sub(atom_reg("fst.r"), atom_reg("fst.b"))));
        reg["fst"] = {seq_chain(std::move(parts)), 1};
    }
    {
        std::vector<Cmd> parts = detail::triangle_search("snd");
        parts.push_back(c_assign("snd.ret", ax_sub(atom_reg("snd.n"), atom_reg("snd.tri"))));
        reg["snd"] = {seq_chain(std::move(parts)), 1};
    }
    return reg;
}

} // namespace rcc
