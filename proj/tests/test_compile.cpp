// Register compilation: the primitive library, the NatTerm -> IMP^TC
// compiler, sequence normalization, recursion elimination, call inlining,
// and the staged pipeline that chains them.

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rcc;
using testutil::load_sample;

namespace {

const std::uint64_t kFuel = 50'000'000;

Nat run_prim(const FuncRegistry& reg, const std::string& f, const std::vector<Nat>& args) {
    const CompiledFun& cf = reg.at(f);
    REQUIRE(cf.arity == args.size());
    State s = entry_state(f, args);
    ExecOutcome o = run_impw(*cf.prog, s, CostModel::unit(), kFuel);
    return o.state.get(result_reg(f));
}

// seq(r := r - 1, if r then recurse else t := 1)
Cmd countdown_tc() {
    return c_seq(c_assign("r", ax_sub(atom_reg("r"), atom_const(1))),
                 c_if("r", c_recurse(), c_assign("t", ax_const(Nat(1)))));
}

bool normalized_shape(const Command& c) {
    switch (c.kind) {
    case Command::K::Seq:
        if (c.a->kind == Command::K::Seq || c.a->kind == Command::K::If) return false;
        return normalized_shape(*c.a) && normalized_shape(*c.b);
    case Command::K::If:
        return normalized_shape(*c.a) && normalized_shape(*c.b);
    case Command::K::While:
        return normalized_shape(*c.a);
    default:
        return true; // Call callees are separate programs, not inspected
    }
}

} // namespace

TEST_CASE("the primitive library follows the calling convention", "[compile]") {
    FuncRegistry reg = stdlib_primitives();
    for (const char* f : {"add", "sub", "eq", "suc", "fst", "snd"}) {
        INFO(f);
        REQUIRE(wellformed(*reg.at(f).prog, Lang::impw));
    }

    REQUIRE(run_prim(reg, "add", {Nat(3), Nat(4)}) == 7);
    REQUIRE(run_prim(reg, "sub", {Nat(9), Nat(5)}) == 4);
    REQUIRE(run_prim(reg, "sub", {Nat(5), Nat(9)}) == 0);
    REQUIRE(run_prim(reg, "suc", {Nat(6)}) == 7);
    REQUIRE(run_prim(reg, "eq", {Nat(4), Nat(4)}) == 1);
    REQUIRE(run_prim(reg, "eq", {Nat(4), Nat(5)}) == 0);
    REQUIRE(run_prim(reg, "eq", {Nat(0), Nat(0)}) == 1);

    // pair(1,2) = 8.
    REQUIRE(run_prim(reg, "fst", {Nat(8)}) == 1);
    REQUIRE(run_prim(reg, "snd", {Nat(8)}) == 2);
    REQUIRE(run_prim(reg, "fst", {Nat(0)}) == 0);
    REQUIRE(run_prim(reg, "snd", {Nat(0)}) == 0);
    for (std::uint64_t n = 0; n <= 30; ++n) {
        REQUIRE(run_prim(reg, "fst", {Nat(n)}) == cantor_fst(Nat(n)));
        REQUIRE(run_prim(reg, "snd", {Nat(n)}) == cantor_snd(Nat(n)));
    }
}

TEST_CASE("compiled countdown runs under run_imptc", "[compile]") {
    Program p = load_sample("scalar.rcc");
    NatFunDef d = natify_fun(p, *p.find_fun("countdown"));
    FuncRegistry reg = stdlib_primitives();
    Cmd tc = compile(d, reg);
    REQUIRE(wellformed(*tc, Lang::imptc));

    State s = entry_state("countdown", {Nat(3), Nat(4)});
    ExecOutcome o = run_imptc(*tc, s, CostModel::unit(), kFuel);
    REQUIRE(o.state.get(result_reg("countdown")) == 7);

    // Arguments are staged through scratch before the recursing copy, so the
    // old values never clobber the new ones.
    for (std::uint64_t n = 0; n <= 5; ++n) {
        State s2 = entry_state("countdown", {Nat(n), Nat(10)});
        REQUIRE(run_imptc(*tc, s2, CostModel::unit(), kFuel).state.get("countdown.ret") ==
                n + 10);
    }
}

TEST_CASE("let-bound values compile to scratch registers", "[compile]") {
    // f(x) = let a = x + 1 in a + a
    NatFunDef d{"f", 1,
                nt_let(nt_call("add", {nt_arg(0), nt_num(1)}),
                       nt_call("add", {nt_bound(0), nt_bound(0)}))};
    FuncRegistry reg = stdlib_primitives();
    Cmd tc = compile(d, reg);
    State s = entry_state("f", {Nat(5)});
    REQUIRE(run_imptc(*tc, s, CostModel::unit(), kFuel).state.get("f.ret") == 12);
}

TEST_CASE("compile rejects malformed definitions", "[compile]") {
    FuncRegistry reg = stdlib_primitives();
    // Unknown callee.
    NatFunDef bad1{"f", 1, nt_call("mystery", {nt_arg(0)})};
    REQUIRE_THROWS_AS(compile(bad1, reg), Error);
    // Tail-call arity mismatch.
    NatFunDef bad2{"f", 2, nt_tailcall({nt_arg(0)})};
    REQUIRE_THROWS_AS(compile(bad2, reg), Error);
    // Argument index out of range.
    NatFunDef bad3{"f", 1, nt_arg(3)};
    REQUIRE_THROWS_AS(compile(bad3, reg), Error);
    // TailCall buried in an argument.
    NatFunDef bad4{"f", 1, nt_call("suc", {nt_tailcall({nt_arg(0)})})};
    REQUIRE_THROWS_AS(compile(bad4, reg), Error);
}

TEST_CASE("normalize_seq preserves steps and states exactly", "[compile]") {
    Rng rng(23);
    ProgProfile prof;
    for (int it = 0; it < 40; ++it) {
        Cmd p = random_imptc(rng, prof);
        Cmd q = normalize_seq(p);
        REQUIRE(normalized_shape(*q));
        State s0 = random_imp_state(rng, prof);
        ExecOutcome a = run_imptc(*p, s0, CostModel::unit(), kFuel);
        ExecOutcome b = run_imptc(*q, s0, CostModel::unit(), kFuel);
        REQUIRE(a.steps == b.steps);
        REQUIRE(state_eq(a.state, b.state));

        // And under a skewed cost model, since the rewrites only re-bracket.
        CostModel cm;
        cm.seq = 3;
        cm.if_ = 5;
        cm.assign = 2;
        cm.recurse = 11;
        ExecOutcome c = run_imptc(*p, s0, cm, kFuel);
        ExecOutcome d = run_imptc(*q, s0, cm, kFuel);
        REQUIRE(c.steps == d.steps);
        REQUIRE(state_eq(c.state, d.state));
    }
}

TEST_CASE("normalize_seq is idempotent", "[compile]") {
    Rng rng(29);
    ProgProfile prof;
    for (int it = 0; it < 20; ++it) {
        Cmd q = normalize_seq(random_imptc(rng, prof));
        REQUIRE(command_eq(*q, *normalize_seq(q)));
    }
}

TEST_CASE("eliminate_recursion builds the driver loop", "[compile]") {
    Cmd got = eliminate_recursion(c_recurse());
    Cmd expected = c_seq(
        c_assign("%cnt", ax_const(Nat(1))),
        c_while("%cnt", c_seq(c_assign("%cnt", ax_const(Nat(0))),
                              c_assign("%cnt", ax_const(Nat(1))))));
    REQUIRE(command_eq(*got, *expected));
    REQUIRE(wellformed(*got, Lang::impwc));
}

TEST_CASE("eliminate_recursion agrees with run_imptc", "[compile]") {
    Cmd tc = countdown_tc();
    Cmd wc = eliminate_recursion(tc);
    for (std::uint64_t r = 0; r <= 6; ++r) {
        State s0;
        s0.set("r", Nat(r));
        ExecOutcome direct = run_imptc(*tc, s0, CostModel::unit(), kFuel);
        ExecOutcome looped = run_impwc(*wc, s0, CostModel::unit(), kFuel);
        // The loop bookkeeping costs extra steps but computes the same thing.
        REQUIRE(state_eq_on(direct.state, looped.state, frame_vars(*tc)));
    }

    Rng rng(31);
    ProgProfile prof;
    for (int it = 0; it < 40; ++it) {
        Cmd p = normalize_seq(random_imptc(rng, prof));
        Cmd q = eliminate_recursion(p);
        State s0 = random_imp_state(rng, prof);
        ExecOutcome direct = run_imptc(*p, s0, CostModel::unit(), kFuel);
        ExecOutcome looped = run_impwc(*q, s0, CostModel::unit(), kFuel);
        REQUIRE(state_eq_on(direct.state, looped.state, frame_vars(*p)));
    }
}

TEST_CASE("eliminate_recursion guards its counter register", "[compile]") {
    Cmd clash = c_seq(c_assign("%cnt", ax_const(Nat(3))), c_recurse());
    REQUIRE_THROWS_AS(eliminate_recursion(clash), Error);

    // A callee may use %cnt freely: it runs on a private state copy.
    Cmd callee = c_seq(c_assign("%cnt", ax_const(Nat(1))),
                       c_while("%cnt", c_assign("%cnt", ax_const(Nat(0)))));
    Cmd ok = c_seq(c_call(callee, "out"), c_recurse());
    REQUIRE_NOTHROW(eliminate_recursion(ok));
}

TEST_CASE("inline_calls replaces calls by namespaced copies", "[compile]") {
    Cmd callee = c_seq(c_assign("t", ax_const(Nat(9))),
                       c_assign("r", ax_add(atom_reg("x"), atom_reg("t"))));
    Cmd p = c_seq(c_assign("x", ax_const(Nat(4))),
                  c_seq(c_call(callee, "r"), c_call(callee, "r2")));
    Cmd q = inline_calls(p);
    REQUIRE(wellformed(*q, Lang::impw));

    auto vs = vars(*q);
    REQUIRE(vs.count("call0::r") == 1);
    REQUIRE(vs.count("call1::r2") == 1);
    REQUIRE(vs.count("call0::t") == 1);

    State s0;
    ExecOutcome a = run_impwc(*p, s0, CostModel::unit(), kFuel);
    ExecOutcome b = run_impw(*q, s0, CostModel::unit(), kFuel);
    // Same answers on the caller's frame; the copies add their own registers.
    REQUIRE(state_eq_on(a.state, b.state, frame_vars(*p)));
    REQUIRE(a.state.get("r") == 13);
    REQUIRE(a.state.get("t") == 0); // caller's t untouched by the call

    // A shared counter keeps prefixes of separately inlined programs apart.
    std::uint64_t ctr = 0;
    Cmd q1 = inline_calls(c_call(callee, "r"), ctr);
    Cmd q2 = inline_calls(c_call(callee, "r"), ctr);
    REQUIRE(vars(*q1).count("call0::r") == 1);
    REQUIRE(vars(*q2).count("call1::r") == 1);
    REQUIRE(ctr == 2);
}

TEST_CASE("inline_calls rejects nested calls in callees", "[compile]") {
    Cmd inner = c_call(c_assign("r", ax_const(Nat(1))), "r");
    Cmd p = c_call(inner, "r");
    REQUIRE_THROWS_AS(inline_calls(p), Error);
}

TEST_CASE("injective renaming runs in lockstep", "[compile]") {
    Rng rng(37);
    ProgProfile prof;
    RegMap suffix = [](const std::string& r) { return r + "'"; };
    for (int it = 0; it < 25; ++it) {
        Cmd p = random_impw(rng, prof);
        Cmd q = rename_registers(p, suffix);
        State s0 = random_imp_state(rng, prof);
        State s0r;
        for (const auto& [r, v] : s0.m) s0r.set(suffix(r), v);
        ExecOutcome a = run_impw(*p, s0, CostModel::unit(), kFuel);
        ExecOutcome b = run_impw(*q, s0r, CostModel::unit(), kFuel);
        REQUIRE(a.steps == b.steps);
        for (const auto& r : vars(*p)) REQUIRE(a.state.get(r) == b.state.get(suffix(r)));
    }
}

TEST_CASE("the pipeline lowers whole programs stage by stage", "[compile]") {
    Program p = load_sample("lists.rcc");
    Pipeline pl = build_pipeline(p);

    REQUIRE(pl.order.size() == 9);
    REQUIRE(pl.registry.count("count") == 1);
    REQUIRE(pl.registry.at("count").arity == 3);

    const FunStages& st = pl.at("count");
    REQUIRE(wellformed(*st.imptc, Lang::imptc));
    REQUIRE(wellformed(*st.imptc_norm, Lang::imptc));
    REQUIRE(normalized_shape(*st.imptc_norm));
    REQUIRE(wellformed(*st.impwc, Lang::impwc));
    REQUIRE(wellformed(*st.impw, Lang::impw));

    TypeRef lt = testutil::list_nat();
    // Keep the list tiny: selector loops on the register machine walk the
    // whole triangle below the encoded value, so step counts grow with
    // sqrt(code) and a three-element list already blows the fuel budget.
    Nat xs = natify(p, lt, *testutil::nat_list({1, 1}));
    State s0 = entry_state("count", {Nat(1), xs, Nat(0)});
    std::string ret = result_reg("count");

    REQUIRE(run_imptc(*st.imptc_norm, s0, CostModel::unit(), kFuel).state.get(ret) == 2);
    REQUIRE(run_impwc(*st.impwc, s0, CostModel::unit(), kFuel).state.get(ret) == 2);
    REQUIRE(run_impw(*st.impw, s0, CostModel::unit(), kFuel).state.get(ret) == 2);
}

TEST_CASE("all stages agree across a grid of countdown inputs", "[compile]") {
    Program p = load_sample("scalar.rcc");
    Pipeline pl = build_pipeline(p);
    const FunStages& st = pl.at("countdown");
    std::string ret = result_reg("countdown");
    for (std::uint64_t n = 0; n <= 4; ++n) {
        for (std::uint64_t acc = 0; acc <= 2; ++acc) {
            State s0 = entry_state("countdown", {Nat(n), Nat(acc)});
            Nat want = Nat(n + acc);
            REQUIRE(run_imptc(*st.imptc_norm, s0, CostModel::unit(), kFuel).state.get(ret) ==
                    want);
            REQUIRE(run_impwc(*st.impwc, s0, CostModel::unit(), kFuel).state.get(ret) == want);
            REQUIRE(run_impw(*st.impw, s0, CostModel::unit(), kFuel).state.get(ret) == want);
        }
    }
}

TEST_CASE("functions that build lists work on the register machine", "[compile]") {
    Program p = load_sample("lists.rcc");
    Pipeline pl = build_pipeline(p);
    TypeRef lt = testutil::list_nat();

    Nat in = natify(p, lt, *testutil::nat_list({1, 2}));
    Nat want = natify(p, lt, *testutil::nat_list({2, 1}));
    State s0 = entry_state("reverse", {in});
    ExecOutcome o = run_impw(*pl.at("reverse").impw, s0, CostModel::unit(), kFuel);
    REQUIRE(o.state.get(result_reg("reverse")) == want);
    REQUIRE(o.state.get(result_reg("reverse")) == 82618);
}
