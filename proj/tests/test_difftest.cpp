// The differential harness itself: clean runs are mismatch-free, every
// seeded mutation is caught, and the auxiliary checkers (bit chain, space
// bound, flagged bridge, blow-up bench) behave on known programs.

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rcc;
using testutil::load_sample;

namespace {

size_t total_mismatches(const std::vector<DiffReport>& reps) {
    size_t n = 0;
    for (const auto& r : reps) n += r.total_mismatches();
    return n;
}

} // namespace

TEST_CASE("mutation names round-trip", "[difftest]") {
    for (Mutation m : {Mutation::none, Mutation::natify_flip_if, Mutation::selector_off_by_one,
                       Mutation::tailelim_drop_reset, Mutation::inliner_alias,
                       Mutation::adder_carry_swap}) {
        auto back = mutation_from_name(mutation_name(m));
        REQUIRE(back.has_value());
        REQUIRE(*back == m);
    }
    REQUIRE_FALSE(mutation_from_name("frobnicate").has_value());
}

TEST_CASE("clean differential runs have no mismatches", "[difftest]") {
    DiffConfig cfg;
    cfg.cases = 25;
    cfg.seed = 5;

    Program sp = load_sample("scalar.rcc");
    DiffConfig scfg = cfg;
    scfg.bits = true; // scalar functions are cheap enough to take to bits
    scfg.bit_cases = 2;
    auto sreps = difftest_program(sp, scfg);
    REQUIRE(sreps.size() == 3);
    for (const auto& r : sreps) {
        INFO(r.function);
        REQUIRE(r.total_mismatches() == 0);
        REQUIRE(r.cases == 25);
        REQUIRE(r.stages.at("natify").cases == 25);
        REQUIRE(r.stages.at("impw").cases == 25);
        REQUIRE(r.stages.at("impminus").cases == 2);
    }

    Program lp = load_sample("lists.rcc");
    auto lreps = difftest_program(lp, cfg); // registers only; values blow up fast
    REQUIRE(lreps.size() == 7);
    REQUIRE(total_mismatches(lreps) == 0);

    Program shp = load_sample("shapes.rcc");
    REQUIRE(total_mismatches(difftest_program(shp, cfg)) == 0);

    // Reports serialize with the expected keys.
    auto j = sreps[0].to_json();
    REQUIRE(j.contains("function"));
    REQUIRE(j.contains("stages"));
    REQUIRE(j["mismatches"].get<size_t>() == 0);
}

TEST_CASE("flipped If arms are caught", "[difftest]") {
    Program p = load_sample("lists.rcc");
    DiffConfig cfg;
    cfg.cases = 40;
    cfg.seed = 9;
    cfg.mutation = Mutation::natify_flip_if;
    auto reps = difftest_program(p, cfg, {"count"});
    REQUIRE(reps.size() == 1);
    REQUIRE(reps[0].total_mismatches() > 0);
    REQUIRE(reps[0].stages.at("natify").mismatches > 0);
}

TEST_CASE("off-by-one selectors are caught", "[difftest]") {
    Program p = load_sample("lists.rcc");
    DiffConfig cfg;
    cfg.cases = 40;
    cfg.seed = 11;
    cfg.mutation = Mutation::selector_off_by_one;
    auto reps = difftest_program(p, cfg, {"count"});
    REQUIRE(reps[0].total_mismatches() > 0);
}

TEST_CASE("a driver loop that never clears its counter is caught", "[difftest]") {
    Program p = load_sample("scalar.rcc");
    DiffConfig cfg;
    cfg.cases = 5;
    cfg.seed = 13;
    cfg.mutation = Mutation::tailelim_drop_reset;
    cfg.limits.imp_fuel = 200'000; // the spin is detected by fuel, keep it short
    auto reps = difftest_program(p, cfg, {"countdown"});
    REQUIRE(reps[0].total_mismatches() > 0);
    // IMP^TC is upstream of the fault and stays clean.
    REQUIRE(reps[0].stages.at("imptc").mismatches == 0);
    REQUIRE(reps[0].stages.at("impwc").mismatches > 0);
    REQUIRE(reps[0].stages.at("impw").mismatches > 0);

    // The mutation really edits the loop: the clean and mutated IMP^WC differ.
    Pipeline clean = build_pipeline(p);
    Pipeline mut = build_mutated_pipeline(p, Mutation::tailelim_drop_reset, clean);
    REQUIRE_FALSE(command_eq(*clean.at("countdown").impwc, *mut.at("countdown").impwc));
}

TEST_CASE("a non-injective inliner is caught", "[difftest]") {
    Program p = load_sample("scalar.rcc");
    DiffConfig cfg;
    cfg.cases = 20;
    cfg.seed = 17;
    cfg.mutation = Mutation::inliner_alias;
    auto reps = difftest_program(p, cfg, {"countdown"});
    REQUIRE(reps[0].applicable);
    REQUIRE(reps[0].total_mismatches() > 0);
    // Upstream of the inliner everything still agrees.
    REQUIRE(reps[0].stages.at("imptc").mismatches == 0);
    REQUIRE(reps[0].stages.at("impwc").mismatches == 0);
    REQUIRE(reps[0].stages.at("impw").mismatches > 0);

    Pipeline clean = build_pipeline(p);
    Pipeline mut = build_mutated_pipeline(p, Mutation::inliner_alias, clean);
    auto vs = vars(*mut.at("countdown").impw);
    REQUIRE(vs.count("call0::all") == 1);
    REQUIRE(vs.count("call0::eq.d1") == 0); // collapsed away
}

TEST_CASE("swapped adder wiring is caught at the bit stage", "[difftest]") {
    Program p = load_sample("scalar.rcc");
    DiffConfig cfg;
    cfg.cases = 8;
    cfg.seed = 19;
    cfg.bits = true;
    cfg.bit_cases = 0; // descend on every case
    cfg.mutation = Mutation::adder_carry_swap;
    // A broken decrement can keep the driver loop alive; cut the spin early.
    cfg.limits.bit_fuel = 20'000'000;
    auto reps = difftest_program(p, cfg, {"countdown"});
    REQUIRE(reps[0].stages.at("impminus").mismatches > 0);
    // The registers above the blast are untouched by this mutation.
    REQUIRE(reps[0].stages.at("impw").mismatches == 0);

    // And deterministically, without sampling: countdown(2, 1) through a
    // miswired blast cannot reproduce the IMP^W run.
    Pipeline pl = build_pipeline(p);
    BlastOptions swapped;
    swapped.swap_carry_wiring = true;
    DiffLimits lim;
    lim.bit_fuel = 20'000'000;
    bool detected = false;
    try {
        auto res = chain_case(pl.at("countdown").impw, entry_state("countdown", {Nat(2), Nat(1)}),
                              CostModel::unit(), lim, 0, swapped);
        detected = !res.ok;
    } catch (const FuelError&) {
        detected = true; // a spin is just as much of a detection
    }
    REQUIRE(detected);
}

TEST_CASE("the bit chain reproduces IMP^W runs exactly", "[difftest]") {
    Program p = load_sample("scalar.rcc");
    Pipeline pl = build_pipeline(p);
    const Cmd& impw = pl.at("countdown").impw;
    DiffLimits lim;

    State s0 = entry_state("countdown", {Nat(2), Nat(1)});
    ExecOutcome out = run_impw(*impw, s0, CostModel::unit(), lim.imp_fuel);
    REQUIRE(out.state.get(result_reg("countdown")) == 3);

    unsigned w = required_width(*impw, s0, out.steps);
    ChainBatch batch(impw, w);
    auto res = batch.run(s0, out.state, lim.bit_fuel);
    INFO(res.why);
    REQUIRE(res.ok);
    REQUIRE(res.bit_steps > out.steps); // each step costs many bit steps
    REQUIRE(res.size > 0);

    // The one-call convenience wrapper agrees.
    auto res2 = chain_case(impw, s0, CostModel::unit(), lim);
    REQUIRE(res2.ok);

    // A width too small for the values wraps and is reported.
    State s1 = entry_state("countdown", {Nat(7), Nat(1)});
    ExecOutcome out1 = run_impw(*impw, s1, CostModel::unit(), lim.imp_fuel);
    ChainBatch tight(impw, 3);
    auto bad = tight.run(s1, out1.state, lim.bit_fuel);
    REQUIRE_FALSE(bad.ok);
    REQUIRE_FALSE(bad.why.empty());
}

TEST_CASE("space bounds hold on random programs", "[difftest]") {
    Rng rng(61);
    ProgProfile prof;
    for (int it = 0; it < 30; ++it) {
        Cmd p = random_impw(rng, prof);
        State s0 = random_imp_state(rng, prof);
        SpaceCheck sc = space_bound_check(p, s0, CostModel::unit(), 10'000'000);
        REQUIRE(sc.ok);
        REQUIRE(sc.bound == Nat(1) << (sc.w + sc.steps));
    }
}

TEST_CASE("the flagged bridge composes on random recursive programs", "[difftest]") {
    Rng rng(67);
    ProgProfile prof;
    for (int it = 0; it < 30; ++it) {
        Cmd p = random_imptc(rng, prof);
        State s0 = random_imp_state(rng, prof);
        BridgeCheck bc = flagged_bridge_check(p, s0, CostModel::unit(), 10'000'000);
        INFO(bc.why);
        REQUIRE(bc.ok);
        REQUIRE(bc.segments >= 1);
        REQUIRE(bc.composed_steps == bc.direct_steps);
    }
}

TEST_CASE("the blow-up bench sees exact linearity in the width", "[difftest]") {
    Program p = load_sample("scalar.rcc");
    Pipeline pl = build_pipeline(p);
    DiffLimits lim;
    State s0 = entry_state("countdown", {Nat(2), Nat(3)});
    BlowupReport br = bench_blowup(pl.at("countdown").impw, "countdown", s0,
                                   CostModel::unit(), lim);
    REQUIRE(br.widths.size() == 3);
    REQUIRE(br.widths[1] - br.widths[0] == 8);
    REQUIRE(br.linear());
    REQUIRE(br.c_size > 0);
    REQUIRE(br.c_steps > 0);
    REQUIRE(br.resid_size <= 0.5);
    REQUIRE(br.resid_steps <= 0.5);
    REQUIRE(br.to_json().contains("minus_steps"));
}

TEST_CASE("stage sizes are recorded for every stage", "[difftest]") {
    Program p = load_sample("lists.rcc");
    Pipeline pl = build_pipeline(p);
    StageSizes z = stage_sizes(pl, "count");
    REQUIRE(z.nat > 0);
    REQUIRE(z.imptc > 0);
    REQUIRE(z.impwc > z.imptc_norm); // driver loop adds commands
    REQUIRE(z.impw > z.impwc);       // inlining adds copies
    REQUIRE(z.function == "count");
}
