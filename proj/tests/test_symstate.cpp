// Symbolic states: normalization rules, agreement with concrete evaluation,
// and symbolic execution of straight-line code.

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rcc;

namespace {

// A random symbolic value over one base state, depth-bounded.
SymPtr random_sym(Rng& rng, const SymStatePtr& s, int depth) {
    if (depth == 0 || rng.percent(40)) {
        if (rng.percent(50)) return sym_lit(Nat(rng.u64(0, 9)));
        return sym_read(s, "r" + std::to_string(rng.u64(0, 3)));
    }
    SymPtr a = random_sym(rng, s, depth - 1);
    SymPtr b = random_sym(rng, s, depth - 1);
    return rng.percent(50) ? sym_add(a, b) : sym_sub(a, b);
}

SymStatePtr random_sym_state(Rng& rng, int writes) {
    SymStatePtr s = sym_base("s0");
    for (int i = 0; i < writes; ++i)
        s = sym_update(s, "r" + std::to_string(rng.u64(0, 3)), random_sym(rng, s, 2));
    return s;
}

State some_base() {
    State b;
    b.set("r0", Nat(3));
    b.set("r1", Nat(0));
    b.set("r2", Nat(7));
    b.set("r3", Nat(1));
    return b;
}

bool is_normal(const SymValue& v) {
    switch (v.kind) {
    case SymValue::K::Lit:
        return true;
    case SymValue::K::Read:
        return v.st->updates.empty();
    case SymValue::K::Add:
    case SymValue::K::Sub:
        if (v.a->kind == SymValue::K::Lit && v.b->kind == SymValue::K::Lit) return false;
        return is_normal(*v.a) && is_normal(*v.b);
    }
    return false;
}

} // namespace

TEST_CASE("constant folding and read resolution", "[symstate]") {
    REQUIRE(normalize_sym(sym_add(sym_lit(Nat(2)), sym_lit(Nat(3))))->lit == 5);
    REQUIRE(normalize_sym(sym_sub(sym_lit(Nat(2)), sym_lit(Nat(3))))->lit == 0); // monus

    SymStatePtr s = sym_update(sym_base("s0"), "x", sym_lit(Nat(4)));
    SymPtr r = normalize_sym(sym_read(s, "x"));
    REQUIRE(r->kind == SymValue::K::Lit);
    REQUIRE(r->lit == 4);

    // Reads of untouched registers survive as reads of the bare base.
    SymPtr q = normalize_sym(sym_read(s, "y"));
    REQUIRE(q->kind == SymValue::K::Read);
    REQUIRE(q->st->updates.empty());
    REQUIRE(show_sym(*q) == "s0(y)");

    // The *last* write wins.
    SymStatePtr s2 = sym_update(s, "x", sym_lit(Nat(9)));
    REQUIRE(normalize_sym(sym_read(s2, "x"))->lit == 9);

    // Nested arithmetic folds all the way down.
    SymPtr nested = sym_add(sym_sub(sym_lit(Nat(9)), sym_lit(Nat(4))), sym_lit(Nat(1)));
    REQUIRE(normalize_sym(nested)->lit == 6);
}

TEST_CASE("normal states: one sorted update per register", "[symstate]") {
    SymStatePtr s = sym_base("s0");
    s = sym_update(s, "z", sym_lit(Nat(1)));
    s = sym_update(s, "a", sym_add(sym_lit(Nat(1)), sym_lit(Nat(2))));
    s = sym_update(s, "z", sym_lit(Nat(5)));
    SymStatePtr n = normalize_sym_state(s);
    REQUIRE(n->updates.size() == 2);
    REQUIRE(n->updates[0].first == "a");
    REQUIRE(n->updates[0].second->lit == 3);
    REQUIRE(n->updates[1].first == "z");
    REQUIRE(n->updates[1].second->lit == 5);
    REQUIRE(show_sym_state(*n) == "s0[a := 3][z := 5]");
}

TEST_CASE("normalization preserves meaning", "[symstate]") {
    Rng rng(53);
    State base = some_base();
    for (int it = 0; it < 300; ++it) {
        SymStatePtr st = random_sym_state(rng, static_cast<int>(rng.u64(0, 4)));
        SymPtr v = random_sym(rng, st, 3);
        SymPtr n = normalize_sym(v);
        REQUIRE(eval_sym(*n, base) == eval_sym(*v, base));
        REQUIRE(is_normal(*n));

        SymStatePtr ns = normalize_sym_state(st);
        REQUIRE(state_eq(eval_sym_state(*ns, base), eval_sym_state(*st, base)));
        for (const auto& [reg, val] : ns->updates) REQUIRE(is_normal(*val));
        // Normalization is a fixed point.
        REQUIRE(eval_sym(*normalize_sym(n), base) == eval_sym(*n, base));
    }
}

TEST_CASE("sym_exec mirrors run_impw on straight-line code", "[symstate]") {
    Cmd p = seq_chain({
        c_assign("x", ax_add(atom_reg("r0"), atom_const(2))),
        c_assign("y", ax_sub(atom_reg("x"), atom_reg("r1"))),
        c_assign("x", ax_add(atom_reg("x"), atom_reg("x"))),
    });
    SymStatePtr sym = sym_exec(p, sym_base("s0"));
    State base = some_base();
    State symed = eval_sym_state(*normalize_sym_state(sym), base);
    ExecOutcome o = run_impw(*p, base, CostModel::unit(), 1'000'000);
    REQUIRE(state_eq(symed, o.state));
    REQUIRE(symed.get("x") == 10);
    REQUIRE(symed.get("y") == 5);
}

TEST_CASE("sym_exec agrees with run_impw on random straight-line programs", "[symstate]") {
    Rng rng(59);
    ProgProfile prof;
    State base = some_base();
    for (int it = 0; it < 100; ++it) {
        std::vector<Cmd> cs;
        unsigned n = static_cast<unsigned>(rng.u64(1, 8));
        for (unsigned i = 0; i < n; ++i)
            cs.push_back(c_assign("r" + std::to_string(rng.u64(0, 3)),
                                  random_aexp(rng, prof)));
        Cmd p = seq_chain(std::move(cs));
        SymStatePtr sym = normalize_sym_state(sym_exec(p, sym_base("s0")));
        ExecOutcome o = run_impw(*p, base, CostModel::unit(), 1'000'000);
        REQUIRE(state_eq(eval_sym_state(*sym, base), o.state));
    }
}

TEST_CASE("sym_exec rejects branching code", "[symstate]") {
    Cmd p = c_if("x", c_assign("y", ax_const(Nat(1))), c_assign("y", ax_const(Nat(2))));
    REQUIRE_THROWS_AS(sym_exec(p, sym_base("s0")), Error);
    REQUIRE_THROWS_AS(sym_exec(c_while("x", c_assign("y", ax_const(Nat(1)))), sym_base("s0")),
                      Error);
}
