#pragma once

// Differential testing across the whole lowering chain. One sampled input is
// pushed through every stage and each stage's answer is compared against the
// reference interpreter:
//
//   eval_ref  ->  eval_nat  ->  run_imptc  ->  run_impwc  ->  run_impw
//             ->  (blast)   ->  run_impminus
//
// A handful of seedable mutations deliberately break individual stages so the
// harness can demonstrate that it catches them.

#include "rcc/ast.hpp"
#include "rcc/bitblast.hpp"
#include "rcc/eval.hpp"
#include "rcc/gen.hpp"
#include "rcc/imp_run.hpp"
#include "rcc/nat_eval.hpp"
#include "rcc/natenc.hpp"
#include "rcc/pipeline.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rcc {

// ---------------------------------------------------------------- mutations ----

enum class Mutation {
    none,
    natify_flip_if,       // If arms swapped during the Nat translation
    selector_off_by_one,  // constructor field selectors shifted by one
    tailelim_drop_reset,  // driver loop never clears its counter
    inliner_alias,        // one call site's registers collapsed (non-injective)
    adder_carry_swap,     // bit adder wires sum and carry-out swapped
};

inline const char* mutation_name(Mutation m) {
    switch (m) {
    case Mutation::none: return "none";
    case Mutation::natify_flip_if: return "natify-flip-if";
    case Mutation::selector_off_by_one: return "selector-off-by-one";
    case Mutation::tailelim_drop_reset: return "tailelim-drop-reset";
    case Mutation::inliner_alias: return "inliner-alias";
    case Mutation::adder_carry_swap: return "adder-carry-swap";
    }
    return "?";
}

inline std::optional<Mutation> mutation_from_name(const std::string& s) {
    for (Mutation m : {Mutation::none, Mutation::natify_flip_if, Mutation::selector_off_by_one,
                       Mutation::tailelim_drop_reset, Mutation::inliner_alias,
                       Mutation::adder_carry_swap})
        if (s == mutation_name(m)) return m;
    return std::nullopt;
}

namespace detail {

// Remove the first `%cnt := 0` loop-head reset (pre-order). Returns the input
// unchanged if no driver loop is found.
inline Cmd drop_first_counter_reset(const Cmd& c, bool& done) {
    if (done) return c;
    if (c->kind == Command::K::While && c->a->kind == Command::K::Seq) {
        const Cmd& h = c->a->a;
        if (h->kind == Command::K::Assign && h->reg == kCounterReg &&
            h->e.kind == AExp::K::Atom && h->e.a.is_const && h->e.a.n == 0) {
            done = true;
            return c_while(c->reg, c->a->b);
        }
    }
    switch (c->kind) {
    case Command::K::Seq: {
        Cmd a = drop_first_counter_reset(c->a, done);
        return c_seq(std::move(a), drop_first_counter_reset(c->b, done));
    }
    case Command::K::If: {
        Cmd a = drop_first_counter_reset(c->a, done);
        return c_if(c->reg, std::move(a), drop_first_counter_reset(c->b, done));
    }
    case Command::K::While:
        return c_while(c->reg, drop_first_counter_reset(c->a, done));
    default:
        return c;
    }
}

// Map every register of the lowest-numbered "call<k>::" site onto a single
// register, destroying the injectivity the inliner relies on. nullopt when
// the program has no inlined sites.
inline std::optional<RegMap> alias_map_for(const Cmd& impw) {
    std::optional<std::pair<std::uint64_t, std::string>> best;
    for (const auto& v : vars(*impw)) {
        if (v.rfind("call", 0) != 0) continue;
        size_t pos = v.find("::");
        if (pos == std::string::npos || pos == 4) continue;
        std::string num = v.substr(4, pos - 4);
        if (!std::all_of(num.begin(), num.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            continue;
        std::uint64_t k = std::stoull(num);
        if (!best || k < best->first) best = {k, v.substr(0, pos + 2)};
    }
    if (!best) return std::nullopt;
    std::string prefix = best->second;
    return RegMap([prefix](const std::string& r) {
        return r.rfind(prefix, 0) == 0 ? prefix + "all" : r;
    });
}

inline size_t nat_term_size(const NatTerm& t) {
    switch (t.kind) {
    case NatTerm::K::Num:
    case NatTerm::K::Arg:
    case NatTerm::K::LetBound:
        return 1;
    case NatTerm::K::If:
        return 1 + nat_term_size(*t.cond) + nat_term_size(*t.then_t) + nat_term_size(*t.else_t);
    case NatTerm::K::Let:
        return 1 + nat_term_size(*t.rhs) + nat_term_size(*t.body);
    case NatTerm::K::Call:
    case NatTerm::K::TailCall: {
        size_t s = 1;
        for (const auto& a : t.args) s += nat_term_size(*a);
        return s;
    }
    }
    return 0;
}

} // namespace detail

// Builds the pipeline a mutation run should execute against. For the two
// translation mutations this re-runs the translator with the fault switched
// on; the structural ones post-process the clean stages. adder_carry_swap
// leaves the programs alone and bites at blast time.
inline Pipeline build_mutated_pipeline(const Program& p, Mutation m, const Pipeline& clean) {
    switch (m) {
    case Mutation::none:
    case Mutation::adder_carry_swap:
        return clean;
    case Mutation::natify_flip_if: {
        NatifyOptions o;
        o.flip_if_arms = true;
        return build_pipeline(p, o);
    }
    case Mutation::selector_off_by_one: {
        NatifyOptions o;
        o.selector_off_by_one = true;
        return build_pipeline(p, o);
    }
    case Mutation::tailelim_drop_reset: {
        Pipeline out = clean;
        for (auto& [name, st] : out.fn) {
            bool done = false;
            Cmd wc = detail::drop_first_counter_reset(st.impwc, done);
            if (!done) continue;
            st.impwc = std::move(wc);
            std::uint64_t ctr = out.inline_sites;
            st.impw = inline_calls(st.impwc, ctr);
        }
        return out;
    }
    case Mutation::inliner_alias: {
        Pipeline out = clean;
        for (auto& [name, st] : out.fn)
            if (auto m2 = detail::alias_map_for(st.impw))
                st.impw = rename_registers(st.impw, *m2);
        return out;
    }
    }
    throw Error("unreachable mutation");
}

// ------------------------------------------------------------ configuration ----

struct DiffLimits {
    std::uint64_t ref_fuel = 1'000'000;     // reference evaluator, function entries
    std::uint64_t nat_fuel = 50'000'000;    // Nat evaluator, node visits
    std::uint64_t imp_fuel = 20'000'000;    // register machines, steps
    std::uint64_t bit_fuel = 4'000'000'000; // bit machine, steps
};

struct DiffConfig {
    size_t cases = 100;
    std::uint64_t seed = 1;
    CostModel cost = CostModel::unit();
    // Deliberately tiny inputs: the encoded argument *values* drive the loop
    // counts of the lowered pairing/selector code, and they grow doubly
    // exponentially in constructor depth.
    ValueProfile values{2, 1};
    bool bits = false;   // also descend to IMP^-; costly, so off by default
    size_t bit_cases = 4; // how many of the cases descend to bits (0 = all)
    Mutation mutation = Mutation::none;
    DiffLimits limits;
};

struct StageTally {
    size_t cases = 0, mismatches = 0;
};

struct DiffReport {
    std::string function;
    std::string mutation = "none";
    size_t cases = 0, skipped = 0;
    std::map<std::string, StageTally> stages; // natify imptc impwc impw impminus
    std::vector<std::string> notes;
    bool applicable = true;

    size_t total_mismatches() const {
        size_t n = 0;
        for (const auto& [k, t] : stages) n += t.mismatches;
        return n;
    }

    nlohmann::json to_json() const {
        nlohmann::json st = nlohmann::json::object();
        for (const auto& [k, t] : stages)
            st[k] = {{"cases", t.cases}, {"mismatches", t.mismatches}};
        return {{"function", function}, {"mutation", mutation},     {"cases", cases},
                {"skipped", skipped},   {"applicable", applicable}, {"stages", st},
                {"mismatches", total_mismatches()}, {"notes", notes}};
    }
};

// ----------------------------------------------------------------- difftest ----

inline DiffReport difftest_function(const Program& p, const Pipeline& mut,
                                    const std::string& fname, const DiffConfig& cfg) {
    const FunDef* f = p.find_fun(fname);
    if (!f) throw Error("unknown function '" + fname + "'");
    if (f->is_template()) throw Error("'" + fname + "' is a template; instantiate it first");
    const FunStages& st = mut.at(fname);

    DiffReport rep;
    rep.function = fname;
    rep.mutation = mutation_name(cfg.mutation);
    if (cfg.mutation == Mutation::inliner_alias && !detail::alias_map_for(st.impw)) {
        rep.applicable = false;
        rep.notes.push_back("no inlined call sites; mutation does not apply");
        return rep;
    }

    BlastOptions bopts;
    bopts.swap_carry_wiring = cfg.mutation == Mutation::adder_carry_swap;

    auto note = [&](const std::string& stage, size_t i, const std::string& what) {
        rep.stages[stage].mismatches++;
        if (rep.notes.size() < 8)
            rep.notes.push_back(stage + " case " + std::to_string(i) + ": " + what);
    };

    Rng rng(cfg.seed);
    size_t bit_left = cfg.bits ? (cfg.bit_cases ? cfg.bit_cases : cfg.cases) : 0;
    for (size_t i = 0; i < cfg.cases; ++i) {
        std::vector<ValuePtr> argv;
        std::vector<Nat> natargs;
        for (const auto& prm : f->params) {
            ValuePtr v = random_value(rng, p, prm.type, cfg.values);
            natargs.push_back(natify(p, prm.type, *v));
            argv.push_back(std::move(v));
        }

        Nat expected;
        try {
            ValuePtr out = eval_ref(p, fname, argv, cfg.limits.ref_fuel);
            expected = natify(p, f->ret_type, *out);
        } catch (const FuelError&) {
            rep.skipped++; // reference gave up; nothing to compare against
            continue;
        }
        rep.cases++;

        {
            rep.stages["natify"].cases++;
            try {
                Nat got = eval_nat(mut.natprog, fname, natargs, cfg.limits.nat_fuel);
                if (got != expected) note("natify", i, got.str() + " != " + expected.str());
            } catch (const Error& e) {
                note("natify", i, e.what());
            }
        }

        State s0 = entry_state(fname, natargs);
        std::string ret = result_reg(fname);
        auto reg_stage = [&](const char* stage, auto runner, const Cmd& prog)
            -> std::optional<ExecOutcome> {
            rep.stages[stage].cases++;
            try {
                ExecOutcome out = runner(*prog, s0, cfg.cost, cfg.limits.imp_fuel);
                if (out.state.get(ret) != expected)
                    note(stage, i, out.state.get(ret).str() + " != " + expected.str());
                return out;
            } catch (const Error& e) {
                note(stage, i, e.what());
                return std::nullopt;
            }
        };

        reg_stage("imptc", [](const Command& c, const State& s, const CostModel& cm,
                              std::uint64_t fl) { return run_imptc(c, s, cm, fl); },
                  st.imptc_norm);
        reg_stage("impwc", [](const Command& c, const State& s, const CostModel& cm,
                              std::uint64_t fl) { return run_impwc(c, s, cm, fl); },
                  st.impwc);
        auto w_out = reg_stage("impw", [](const Command& c, const State& s, const CostModel& cm,
                                          std::uint64_t fl) { return run_impw(c, s, cm, fl); },
                               st.impw);

        if (bit_left > 0 && w_out) {
            --bit_left;
            rep.stages["impminus"].cases++;
            try {
                unsigned w = required_width(*st.impw, s0, w_out->steps);
                MinusProg mp = blast_program_flat(*st.impw, w, bopts);
                State bits = encode_state(s0, w);
                std::vector<std::uint8_t> flat(mp.reg_names.size(), 0);
                for (size_t r = 0; r < mp.reg_names.size(); ++r)
                    flat[r] = bits.get(mp.reg_names[r]).convert_to<std::uint8_t>();
                run_minus_interned(mp, flat, cfg.limits.bit_fuel);
                State bits1 = bits;
                for (size_t r = 0; r < mp.reg_names.size(); ++r)
                    bits1.set(mp.reg_names[r], Nat(int(flat[r])));
                if (auto fv = flag_violation(bits1))
                    note("impminus", i, *fv);
                else {
                    State decoded = decode_state(bits1);
                    if (decoded.get(ret) != expected)
                        note("impminus", i, decoded.get(ret).str() + " != " + expected.str());
                    else if (!state_eq_on(w_out->state, decoded, vars(*st.impw)))
                        note("impminus", i, "decoded state disagrees with IMP^W run");
                }
            } catch (const Error& e) {
                note("impminus", i, e.what());
            }
        }
    }
    return rep;
}

inline std::vector<DiffReport> difftest_program(const Program& p, const DiffConfig& cfg,
                                                const std::vector<std::string>& only = {}) {
    Pipeline clean = build_pipeline(p);
    Pipeline mut = build_mutated_pipeline(p, cfg.mutation, clean);
    std::vector<DiffReport> out;
    for (const FunDef& f : p.funs) {
        if (f.is_template()) continue;
        if (!only.empty() && std::find(only.begin(), only.end(), f.name) == only.end())
            continue;
        out.push_back(difftest_function(p, mut, f.name, cfg));
    }
    return out;
}

// ------------------------------------------------- bit-level chain checking ----

// One blasted program reused across many runs at a fixed width.
struct ChainBatch {
    unsigned width;
    MinusProg mp;
    std::set<std::string> compare; // non-scratch base registers

    ChainBatch(const Cmd& impw, unsigned w, BlastOptions opts = {})
        : width(w), mp(blast_program_flat(*impw, w, opts)) {
        for (const auto& name : mp.reg_names)
            if (auto br = detail::split_bit_reg(name); br && !detail::is_scratch(br->first))
                compare.insert(br->first);
    }

    struct Result {
        bool ok = false;
        std::uint64_t bit_steps = 0;
        size_t size = 0;
        std::string why;
    };

    // expect: the IMP^W outcome this run has to reproduce bit-for-bit.
    Result run(const State& s0, const State& expect, std::uint64_t bit_fuel) const {
        Result res;
        res.size = mp.nodes.size();
        State bits = encode_state(s0, width);
        std::vector<std::uint8_t> flat(mp.reg_names.size(), 0);
        for (size_t r = 0; r < mp.reg_names.size(); ++r)
            flat[r] = bits.get(mp.reg_names[r]).convert_to<std::uint8_t>();
        res.bit_steps = run_minus_interned(mp, flat, bit_fuel);
        State bits1 = bits;
        for (size_t r = 0; r < mp.reg_names.size(); ++r)
            bits1.set(mp.reg_names[r], Nat(int(flat[r])));
        if (auto fv = flag_violation(bits1)) {
            res.why = *fv;
            return res;
        }
        State decoded = decode_state(bits1);
        if (!state_eq_on(expect, decoded, compare)) {
            for (const auto& r : compare)
                if (expect.get(r) != decoded.get(r)) {
                    res.why = r + ": " + decoded.get(r).str() + " != " + expect.get(r).str();
                    break;
                }
            return res;
        }
        res.ok = true;
        return res;
    }
};

// Single-shot variant: pick the width from the run itself.
inline ChainBatch::Result chain_case(const Cmd& impw, const State& s0, const CostModel& cm,
                                     const DiffLimits& lim, unsigned width = 0,
                                     BlastOptions opts = {}) {
    ExecOutcome out = run_impw(*impw, s0, cm, lim.imp_fuel);
    unsigned w = width ? width : required_width(*impw, s0, out.steps);
    ChainBatch batch(impw, w, opts);
    return batch.run(s0, out.state, lim.bit_fuel);
}

// ----------------------------------------------------- space-bound checking ----

struct SpaceCheck {
    bool ok = false;
    unsigned w = 0;          // bits of the largest constant in program/state
    std::uint64_t steps = 0;
    Nat maxval;              // largest register value reached at the end
    Nat bound;               // 2^(w+steps)
};

// After n steps from a state whose values and constants fit in w bits, no
// register can exceed 2^(w+n): a step at most doubles the largest value.
inline SpaceCheck space_bound_check(const Cmd& p, const State& s, const CostModel& cm,
                                    std::uint64_t fuel) {
    ExecOutcome out = run_impw(*p, s, cm, fuel);
    Nat m = maxconst(*p);
    if (Nat ms = maxconst(s); ms > m) m = ms;
    SpaceCheck sc;
    sc.w = std::max<unsigned>(1, bit_length(m));
    sc.steps = out.steps;
    sc.maxval = maxconst(out.state);
    sc.bound = Nat(1) << (sc.w + out.steps);
    sc.ok = sc.maxval < sc.bound;
    return sc;
}

// ------------------------------------------------------------ flagged bridge ----

struct BridgeCheck {
    bool ok = false;
    std::uint64_t direct_steps = 0, composed_steps = 0;
    size_t segments = 0;
    std::string why;
};

// Running with the recursion flag and resuming from the stopped state, as
// many times as needed, must reproduce the direct run exactly: same final
// state, same total cost. Holds because generated programs only reach
// RECURSE in terminal position.
inline BridgeCheck flagged_bridge_check(const Cmd& p, const State& s, const CostModel& cm,
                                        std::uint64_t fuel) {
    BridgeCheck bc;
    ExecOutcome direct;
    try {
        direct = run_imptc(*p, s, cm, fuel);
    } catch (const Error& e) {
        bc.why = std::string("direct run failed: ") + e.what();
        return bc;
    }
    bc.direct_steps = direct.steps;
    State cur = s;
    while (true) {
        FlaggedOutcome seg = run_flagged(*p, cur, cm, fuel);
        bc.composed_steps += seg.steps;
        bc.segments++;
        cur = seg.state;
        if (!seg.flag) break;
        if (bc.composed_steps > direct.steps) {
            bc.why = "composed run overshot the direct step count";
            return bc;
        }
    }
    if (bc.composed_steps != direct.steps)
        bc.why = "step totals differ";
    else if (!state_eq(cur, direct.state))
        bc.why = "final states differ";
    else
        bc.ok = true;
    return bc;
}

// ------------------------------------------------------------ blow-up bench ----

struct BlowupReport {
    std::string function;
    size_t impw_size = 0;
    std::uint64_t impw_steps = 0;
    std::vector<unsigned> widths;
    std::vector<size_t> minus_sizes;
    std::vector<std::uint64_t> minus_steps;
    double c_size = 0, c_steps = 0;         // fits  y ~ c * width * x
    double resid_size = 0, resid_steps = 0; // max |y - cx|/(cx)
    long long d2_size = 0, d2_steps = 0;    // second differences, equal spacing

    bool linear() const { return d2_size == 0 && d2_steps == 0; }

    nlohmann::json to_json() const {
        return {{"function", function},   {"impw_size", impw_size},
                {"impw_steps", impw_steps}, {"widths", widths},
                {"minus_sizes", minus_sizes}, {"minus_steps", minus_steps},
                {"c_size", c_size},       {"c_steps", c_steps},
                {"resid_size", resid_size}, {"resid_steps", resid_steps},
                {"d2_size", d2_size},     {"d2_steps", d2_steps}};
    }
};

namespace detail {

inline void fit_origin(const std::vector<double>& xs, const std::vector<double>& ys, double& c,
                       double& resid) {
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += xs[i] * ys[i];
        sxx += xs[i] * xs[i];
    }
    c = sxx > 0 ? sxy / sxx : 0;
    resid = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double pred = c * xs[i];
        if (pred > 0) resid = std::max(resid, std::abs(ys[i] - pred) / pred);
    }
}

} // namespace detail

// Runs one fixed input at three equally spaced widths (all at least the
// required width, so every run takes the same branches) and reports how bit
// program size and bit step count scale.
inline BlowupReport bench_blowup(const Cmd& impw, const std::string& fname, const State& s0,
                                 const CostModel& cm, const DiffLimits& lim,
                                 unsigned spread = 8) {
    BlowupReport br;
    br.function = fname;
    br.impw_size = command_size(*impw);
    ExecOutcome out = run_impw(*impw, s0, cm, lim.imp_fuel);
    br.impw_steps = out.steps;
    unsigned w0 = required_width(*impw, s0, out.steps);
    br.widths = {w0, w0 + spread, w0 + 2 * spread};
    for (unsigned w : br.widths) {
        ChainBatch batch(impw, w);
        auto res = batch.run(s0, out.state, lim.bit_fuel);
        if (!res.ok) throw Error("blow-up bench: chain broke at width " + std::to_string(w) +
                                 (res.why.empty() ? "" : ": " + res.why));
        br.minus_sizes.push_back(res.size);
        br.minus_steps.push_back(res.bit_steps);
    }
    std::vector<double> xs, ys, xt, yt;
    for (size_t i = 0; i < br.widths.size(); ++i) {
        xs.push_back(double(br.widths[i]) * double(br.impw_size));
        ys.push_back(double(br.minus_sizes[i]));
        xt.push_back(double(br.widths[i]) * double(br.impw_steps));
        yt.push_back(double(br.minus_steps[i]));
    }
    detail::fit_origin(xs, ys, br.c_size, br.resid_size);
    detail::fit_origin(xt, yt, br.c_steps, br.resid_steps);
    auto d2 = [](auto y0, auto y1, auto y2) {
        return (long long)(y2 - y1) - (long long)(y1 - y0);
    };
    br.d2_size = d2(br.minus_sizes[0], br.minus_sizes[1], br.minus_sizes[2]);
    br.d2_steps = d2(br.minus_steps[0], br.minus_steps[1], br.minus_steps[2]);
    return br;
}

// Stage sizes for one function, for blow-up bookkeeping across the pipeline.
struct StageSizes {
    std::string function;
    size_t nat = 0, imptc = 0, imptc_norm = 0, impwc = 0, impw = 0;

    nlohmann::json to_json() const {
        return {{"function", function}, {"nat", nat},   {"imptc", imptc},
                {"imptc_norm", imptc_norm}, {"impwc", impwc}, {"impw", impw}};
    }
};

inline StageSizes stage_sizes(const Pipeline& pl, const std::string& fname) {
    const FunStages& st = pl.at(fname);
    StageSizes z;
    z.function = fname;
    z.nat = detail::nat_term_size(*st.nat.body);
    z.imptc = command_size(*st.imptc);
    z.imptc_norm = command_size(*st.imptc_norm);
    z.impwc = command_size(*st.impwc);
    z.impw = command_size(*st.impw);
    return z;
}

} // namespace rcc
