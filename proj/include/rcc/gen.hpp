#pragma once

// Seeded random generation of values, states, expressions, and IMP programs.
// All draws go through Rng's own uniform so runs are reproducible across
// standard libraries (std::uniform_int_distribution is not pinned).
//
// Generated programs terminate by construction: every While decrements a
// dedicated guard register that nothing else writes, and every RECURSE sits
// behind such a guard in terminal position (nothing sequenced after it), the
// shape the compiler itself produces.

#include "rcc/ast.hpp"
#include "rcc/check.hpp"
#include "rcc/error.hpp"
#include "rcc/imp.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rcc {

struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t u64(std::uint64_t lo, std::uint64_t hi) { // inclusive
        if (lo > hi) throw Error("bad range");
        std::uint64_t span = hi - lo + 1;
        if (span == 0) return eng(); // full range
        return lo + eng() % span;
    }
    bool percent(unsigned p) { return u64(0, 99) < p; }
    template <class T>
    const T& pick(const std::vector<T>& xs) {
        if (xs.empty()) throw Error("pick from empty");
        return xs[u64(0, xs.size() - 1)];
    }
};

// ------------------------------------------------------------ value gen ----

struct ValueProfile {
    std::uint64_t max_nat = 7;    // leaves drawn from 0..max_nat
    std::uint64_t size_budget = 8; // total constructor nodes allowed
};

namespace detail {

inline bool type_mentions_adt(const TypeRef& t) {
    if (t.is_nat()) return false;
    return true; // ground non-Nat types are ADT instances
}

inline ValuePtr random_value_go(Rng& rng, const Program& p, const TypeRef& t,
                                const ValueProfile& prof, std::uint64_t& budget,
                                int depth) {
    if (depth > 10000)
        throw Error("cannot generate a finite value of type " + show_type(t));
    if (t.is_nat()) return natv(Nat(rng.u64(0, prof.max_nat)));
    const AdtDecl* d = p.find_adt(t.head);
    if (!d) throw Error("unknown type " + show_type(t));
    std::map<std::string, TypeRef> subst;
    for (size_t i = 0; i < d->type_params.size(); ++i)
        subst.emplace(d->type_params[i], t.args[i]);

    std::vector<size_t> leafy, all;
    for (size_t i = 0; i < d->ctors.size(); ++i) {
        all.push_back(i);
        bool rec = false;
        for (const auto& at : d->ctors[i].arg_types)
            if (type_mentions_adt(subst_type(at, subst))) rec = true;
        if (!rec) leafy.push_back(i);
    }
    const std::vector<size_t>& pool = (budget == 0 && !leafy.empty()) ? leafy : all;
    size_t ci = rng.pick(pool);
    if (budget > 0) --budget;

    const CtorDecl& c = d->ctors[ci];
    std::vector<ValuePtr> args;
    for (const auto& at : c.arg_types)
        args.push_back(random_value_go(rng, p, subst_type(at, subst), prof, budget, depth + 1));
    return conv(d->name, c.name, ci, std::move(args));
}

} // namespace detail

inline ValuePtr random_value(Rng& rng, const Program& p, const TypeRef& t,
                             const ValueProfile& prof) {
    std::uint64_t budget = prof.size_budget;
    return detail::random_value_go(rng, p, t, prof, budget, 0);
}

// ---------------------------------------------------------- IMP program gen ----

struct ProgProfile {
    unsigned regs = 4;            // working registers r0..r{regs-1}
    std::uint64_t max_const = 9;  // constants in expressions
    unsigned max_block = 4;       // commands per block
    unsigned max_depth = 2;       // If/While nesting
    std::uint64_t max_guard = 4;  // initial guard values drawn 0..max_guard
};

namespace detail {

inline std::string work_reg(Rng& rng, const ProgProfile& prof) {
    return "r" + std::to_string(rng.u64(0, prof.regs - 1));
}
inline std::string guard_reg(unsigned depth) { return "g" + std::to_string(depth); }

inline Atom random_atom(Rng& rng, const ProgProfile& prof) {
    if (rng.percent(40)) return atom_const(Nat(rng.u64(0, prof.max_const)));
    return atom_reg(work_reg(rng, prof));
}

inline AExp random_aexp_for(Rng& rng, const ProgProfile& prof) {
    switch (rng.u64(0, 2)) {
    case 0: return ax_atom(random_atom(rng, prof));
    case 1: return ax_add(random_atom(rng, prof), random_atom(rng, prof));
    default: return ax_sub(random_atom(rng, prof), random_atom(rng, prof));
    }
}

inline Cmd random_cmd(Rng& rng, const ProgProfile& prof, unsigned depth, bool allow_while);

inline Cmd random_block(Rng& rng, const ProgProfile& prof, unsigned depth,
                        bool allow_while = true) {
    std::vector<Cmd> cs;
    unsigned n = static_cast<unsigned>(rng.u64(1, prof.max_block));
    for (unsigned i = 0; i < n; ++i) cs.push_back(random_cmd(rng, prof, depth, allow_while));
    return seq_chain(std::move(cs));
}

inline Cmd random_cmd(Rng& rng, const ProgProfile& prof, unsigned depth, bool allow_while) {
    std::uint64_t kind = rng.u64(0, 99);
    if (depth < prof.max_depth && kind < 20) {
        return c_if(work_reg(rng, prof), random_block(rng, prof, depth + 1, allow_while),
                    random_block(rng, prof, depth + 1, allow_while));
    }
    if (allow_while && depth < prof.max_depth && kind < 35) {
        // Guarded loop; the guard register is reserved for this purpose.
        std::string g = guard_reg(depth);
        Cmd body = c_seq(random_block(rng, prof, depth + 1, allow_while),
                         c_assign(g, ax_sub(atom_reg(g), atom_const(1))));
        return c_while(g, std::move(body));
    }
    return c_assign(work_reg(rng, prof), random_aexp_for(rng, prof));
}

} // namespace detail

inline Cmd random_impw(Rng& rng, const ProgProfile& prof) {
    return detail::random_block(rng, prof, 0);
}

// Straight-line/branching program whose only RECURSE sites are terminal and
// sit behind the dedicated guard "rec", so runs re-enter at most rec times.
// No While anywhere: IMP^TC loops only through RECURSE.
inline Cmd random_imptc(Rng& rng, const ProgProfile& prof) {
    Cmd prelude = detail::random_block(rng, prof, 0, false);
    Cmd again = c_seq(c_assign("rec", ax_sub(atom_reg("rec"), atom_const(1))), c_recurse());
    Cmd stop = detail::random_block(rng, prof, 0, false);
    return c_seq(std::move(prelude), c_if("rec", std::move(again), std::move(stop)));
}

// Initial state covering working registers, loop guards, and the recursion
// guard.
inline State random_imp_state(Rng& rng, const ProgProfile& prof) {
    State s;
    for (unsigned i = 0; i < prof.regs; ++i)
        s.set("r" + std::to_string(i), Nat(rng.u64(0, prof.max_const)));
    for (unsigned d = 0; d < prof.max_depth; ++d)
        s.set(detail::guard_reg(d), Nat(rng.u64(0, prof.max_guard)));
    s.set("rec", Nat(rng.u64(0, prof.max_guard)));
    return s;
}

inline AExp random_aexp(Rng& rng, const ProgProfile& prof) {
    return detail::random_aexp_for(rng, prof);
}

} // namespace rcc
