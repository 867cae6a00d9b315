#pragma once

// Drives one function through every lowering stage and keeps the
// intermediate programs around for inspection and testing:
//
//   source --natify--> NatTerm --compile--> IMP^TC --normalize--> IMP^TC
//          --eliminate_recursion--> IMP^WC --inline_calls--> IMP^W
//
// Bit-blasting is not part of the pipeline record because its width depends
// on the run; see bitblast.hpp.

#include "rcc/ast.hpp"
#include "rcc/compile_imp.hpp"
#include "rcc/error.hpp"
#include "rcc/inliner.hpp"
#include "rcc/natify.hpp"
#include "rcc/tail_elim.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rcc {

struct FunStages {
    size_t arity = 0;
    NatFunDef nat;
    Cmd imptc;      // raw compiler output
    Cmd imptc_norm; // sequences normalized; this one feeds the later stages
    Cmd impwc;
    Cmd impw;
};

struct Pipeline {
    NatProgram natprog;
    FuncRegistry registry; // primitives plus every compiled function (IMP^W)
    std::vector<std::string> order;
    std::map<std::string, FunStages> fn;
    std::uint64_t inline_sites = 0;

    const FunStages& at(const std::string& name) const {
        auto it = fn.find(name);
        if (it == fn.end()) throw Error("no compiled function '" + name + "'");
        return it->second;
    }
};

inline Pipeline build_pipeline(const Program& p, const NatifyOptions& nopts = {}) {
    Pipeline pl;
    pl.natprog = natify_program(p, nopts);
    pl.registry = stdlib_primitives();
    for (const auto& d : pl.natprog.defs) {
        FunStages st;
        st.arity = d.arity;
        st.nat = d;
        st.imptc = compile(d, pl.registry);
        st.imptc_norm = normalize_seq(st.imptc);
        st.impwc = eliminate_recursion(st.imptc_norm);
        st.impw = inline_calls(st.impwc, pl.inline_sites);
        pl.registry[d.name] = {st.impw, d.arity};
        pl.order.push_back(d.name);
        pl.fn.emplace(d.name, std::move(st));
    }
    return pl;
}

// Entry state for running a compiled function: arguments go to f.arg.i.
inline State entry_state(const std::string& fname, const std::vector<Nat>& args) {
    State s;
    for (size_t i = 0; i < args.size(); ++i) s.set(RegNamer::arg(fname, i), args[i]);
    return s;
}

inline std::string result_reg(const std::string& fname) { return RegNamer::ret(fname); }

} // namespace rcc
