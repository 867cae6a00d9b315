#pragma once

// Recursion elimination: wrap the program in a driver loop and turn every
// RECURSE into re-arming the loop counter.
//
//   comp_t(p) = %cnt := 1 ;; WHILE %cnt ( %cnt := 0 ;; p[ %cnt := 1 / RECURSE ] )
//
// Sound because compiled programs only reach RECURSE in terminal position:
// once the substituted assignment runs, the iteration has nothing left to do,
// and the loop re-enters p exactly where RECURSE would have.

#include "rcc/error.hpp"
#include "rcc/imp.hpp"

#include <string>

namespace rcc {

inline const std::string kCounterReg = "%cnt";

// Replace every RECURSE in p by `replacement`. Call callees never contain
// RECURSE (they are complete lowered programs) and are left untouched.
inline Cmd subst_recurse(const Cmd& p, const Cmd& replacement) {
    switch (p->kind) {
    case Command::K::Recurse:
        return replacement;
    case Command::K::Seq:
        return c_seq(subst_recurse(p->a, replacement), subst_recurse(p->b, replacement));
    case Command::K::If:
        return c_if(p->reg, subst_recurse(p->a, replacement),
                    subst_recurse(p->b, replacement));
    case Command::K::While:
        return c_while(p->reg, subst_recurse(p->a, replacement));
    default:
        return p;
    }
}

// p must be IMP^TC and its own frame must not mention the counter register.
// Callee programs may well contain %cnt loops of their own; they run on a
// private state copy, so there is no clash.
inline Cmd eliminate_recursion(const Cmd& p) {
    if (auto why = wf_violation(*p, Lang::imptc)) throw Error(*why);
    if (frame_vars(*p).count(kCounterReg))
        throw Error("program already uses " + kCounterReg);
    Cmd rearmed = subst_recurse(p, c_assign(kCounterReg, ax_const(1)));
    return c_seq(c_assign(kCounterReg, ax_const(1)),
                 c_while(kCounterReg,
                         c_seq(c_assign(kCounterReg, ax_const(0)), std::move(rearmed))));
}

} // namespace rcc
