#pragma once

// Call elimination. A call site
//
//   CALL q r
//
// becomes: copy every register of q (and r) into a fresh per-site namespace
// "call<k>::", run q renamed into that namespace, then pull the one surviving
// register back with r := call<k>::r. Because the callee runs on copies, all
// of its scratch writes are discarded exactly as the Call rule discards them,
// and the renaming is injective, so the renamed body steps in lockstep with
// the original.

#include "rcc/error.hpp"
#include "rcc/imp.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace rcc {

using RegMap = std::function<std::string(const std::string&)>;

inline Atom rename_atom(const Atom& a, const RegMap& m) {
    return a.is_const ? a : atom_reg(m(a.reg));
}

inline AExp rename_aexp(const AExp& e, const RegMap& m) {
    AExp out = e;
    out.a = rename_atom(e.a, m);
    if (e.kind != AExp::K::Atom) out.b = rename_atom(e.b, m);
    return out;
}

// Apply a register renaming everywhere, including inside Call callees and the
// Call result register. For injective m the renamed program runs in lockstep
// with the original on the renamed state.
inline Cmd rename_registers(const Cmd& p, const RegMap& m) {
    switch (p->kind) {
    case Command::K::Assign:
        return c_assign(m(p->reg), rename_aexp(p->e, m));
    case Command::K::AssignBit:
        return c_xbit(m(p->reg), p->bit);
    case Command::K::Seq:
        return c_seq(rename_registers(p->a, m), rename_registers(p->b, m));
    case Command::K::If:
        return c_if(m(p->reg), rename_registers(p->a, m), rename_registers(p->b, m));
    case Command::K::While:
        return c_while(m(p->reg), rename_registers(p->a, m));
    case Command::K::Call:
        return c_call(rename_registers(p->a, m), m(p->reg));
    case Command::K::Recurse:
        return p;
    }
    throw Error("unreachable Command kind");
}

namespace detail {

struct Inliner {
    std::uint64_t& site_counter;

    Cmd go(const Cmd& p) {
        switch (p->kind) {
        case Command::K::Call: {
            if (auto why = wf_violation(*p->a, Lang::impw))
                throw Error("callee is not call-free: " + *why);
            std::string prefix = "call" + std::to_string(site_counter++) + "::";
            std::set<std::string> vs = vars(*p->a);
            vs.insert(p->reg); // degenerate callees may never touch r
            RegMap m = [prefix](const std::string& r) { return prefix + r; };
            std::vector<Cmd> parts;
            for (const auto& v : vs) parts.push_back(c_assign(m(v), ax_reg(v)));
            parts.push_back(rename_registers(p->a, m));
            parts.push_back(c_assign(p->reg, ax_reg(m(p->reg))));
            return seq_chain(std::move(parts));
        }
        case Command::K::Seq: {
            // Force left-to-right so site numbering follows program order
            // (argument evaluation order would otherwise be unspecified).
            Cmd a = go(p->a);
            return c_seq(std::move(a), go(p->b));
        }
        case Command::K::If: {
            Cmd a = go(p->a);
            return c_if(p->reg, std::move(a), go(p->b));
        }
        case Command::K::While:
            return c_while(p->reg, go(p->a));
        default:
            return p;
        }
    }
};

} // namespace detail

// p: IMP^WC; result: IMP^W. Each call site gets the next "call<k>::" prefix
// from site_counter (traversal order), so separately inlined programs can
// share one counter and never collide.
inline Cmd inline_calls(const Cmd& p, std::uint64_t& site_counter) {
    if (auto why = wf_violation(*p, Lang::impwc)) throw Error(*why);
    detail::Inliner inl{site_counter};
    return inl.go(p);
}

inline Cmd inline_calls(const Cmd& p) {
    std::uint64_t k = 0;
    return inline_calls(p, k);
}

} // namespace rcc
