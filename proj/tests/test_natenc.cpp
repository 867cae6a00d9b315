// Cantor pairing, constructor encodings, selectors, and the lowered case
// cascade. The numeric oracles below were worked out by hand from
// pair(a,b) = (a+b)(a+b+1)/2 + b.

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace rcc;
using testutil::nat_list;

TEST_CASE("cantor_pair hits the hand-computed table", "[natenc]") {
    REQUIRE(cantor_pair(0, 0) == 0);
    REQUIRE(cantor_pair(1, 0) == 1);
    REQUIRE(cantor_pair(0, 1) == 2);
    REQUIRE(cantor_pair(2, 0) == 3);
    REQUIRE(cantor_pair(1, 1) == 4);
    REQUIRE(cantor_pair(0, 2) == 5);
    REQUIRE(cantor_pair(2, 1) == 7);
    REQUIRE(cantor_pair(1, 2) == 8);
    REQUIRE(cantor_pair(5, 1) == 22);
    REQUIRE(cantor_pair(2, 22) == 322);
    REQUIRE(cantor_pair(1, 7) == 43);
    REQUIRE(cantor_pair(2, 43) == 1078);
    REQUIRE(cantor_pair(2, 5) == 33);
}

TEST_CASE("cantor pairing is a bijection on an exhaustive prefix", "[natenc]") {
    std::set<Nat> seen;
    for (std::uint64_t a = 0; a <= 40; ++a) {
        for (std::uint64_t b = 0; b <= 40; ++b) {
            Nat n = cantor_pair(a, b);
            auto [x, y] = cantor_unpair(n);
            REQUIRE(x == a);
            REQUIRE(y == b);
            REQUIRE(seen.insert(n).second); // injective
        }
    }
    // Inverse direction: every number below the diagonal is some pair.
    for (std::uint64_t n = 0; n <= 860; ++n) {
        auto [a, b] = cantor_unpair(Nat(n));
        REQUIRE(cantor_pair(a, b) == n);
    }
}

TEST_CASE("cantor pairing stays exact past 64 bits", "[natenc]") {
    Nat big = Nat(1) << 100;
    auto [a, b] = cantor_unpair(cantor_pair(big, big + 12345));
    REQUIRE(a == big);
    REQUIRE(b == big + 12345);
}

TEST_CASE("list encodings match their frozen values", "[natenc]") {
    Program p = testutil::load_sample("lists.rcc");
    TypeRef lt = testutil::list_nat();

    REQUIRE(natify(p, lt, *nat_list({})) == 1);       // pair(1,0)
    REQUIRE(natify(p, lt, *nat_list({1})) == 25);     // pair(2, pair(1,1))
    REQUIRE(natify(p, lt, *nat_list({2})) == 52);     // pair(2, pair(2,1))
    REQUIRE(natify(p, lt, *nat_list({5})) == 322);    // pair(2, pair(5,1))
    REQUIRE(natify(p, lt, *nat_list({2, 1})) == 82618);    // pair(2, pair(2,25)), pair(2,25)=403
    REQUIRE(natify(p, lt, *nat_list({2, 2})) == 1186567);  // pair(2, pair(2,52)), pair(2,52)=1537
    // Deeper lists blow up fast; check against the pairing formula instead of
    // a literal.
    REQUIRE(natify(p, lt, *nat_list({1, 2, 1})) ==
            cantor_pair(2, cantor_pair(1, Nat(82618))));
}

TEST_CASE("tree and option encodings match their frozen values", "[natenc]") {
    Program p = testutil::load_sample("shapes.rcc");
    TypeRef tt{"Tree", {}};
    TypeRef ot{"Option", {TypeRef::nat()}};

    REQUIRE(natify(p, tt, *testutil::leaf()) == 1);
    // Node Leaf 2 Leaf: nest = pair(1, pair(2, 1)) = pair(1,7) = 43.
    REQUIRE(natify(p, tt, *testutil::node(testutil::leaf(), 2, testutil::leaf())) == 1078);
    REQUIRE(natify(p, ot, *conv("Option", "None", 0, {})) == 1);
    REQUIRE(natify(p, ot, *conv("Option", "Some", 1, {natv(Nat(5))})) == 33);

    // Instantiated payload: Some [1] at type Option (List Nat).
    TypeRef olt{"Option", {testutil::list_nat()}};
    REQUIRE(natify(p, olt, *conv("Option", "Some", 1, {nat_list({1})})) ==
            cantor_pair(2, 25));
}

TEST_CASE("natify rejects type/value mismatches", "[natenc]") {
    Program p = testutil::load_sample("lists.rcc");
    REQUIRE_THROWS_AS(natify(p, testutil::list_nat(), *natv(Nat(5))), EncodingError);
    REQUIRE_THROWS_AS(natify(p, TypeRef::nat(), *nat_list({1})), EncodingError);
    REQUIRE_THROWS_AS(natify(p, TypeRef{"Missing", {}}, *nat_list({1})), EncodingError);
}

TEST_CASE("encode_ctor checks index and arity", "[natenc]") {
    EncodedAdt e;
    e.name = "List";
    e.ctor_names = {"Nil", "Cons"};
    e.arities = {0, 2};
    REQUIRE(encode_ctor(e, 0, {}) == 1);
    REQUIRE(encode_ctor(e, 1, {Nat(5), Nat(1)}) == 322);
    REQUIRE_THROWS_AS(encode_ctor(e, 2, {}), EncodingError);
    REQUIRE_THROWS_AS(encode_ctor(e, 1, {Nat(5)}), EncodingError);
    REQUIRE_THROWS_AS(encode_ctor(e, 0, {Nat(5)}), EncodingError);
}

TEST_CASE("selectors read back constructor arguments", "[natenc]") {
    // Cons 5 Nil = 322: component 1 is the head, component 2 the tail.
    REQUIRE(selector(2, 1, Nat(322)) == 5);
    REQUIRE(selector(2, 2, Nat(322)) == 1);
    // Node Leaf 2 Leaf = 1078, arity 3.
    REQUIRE(selector(3, 1, Nat(1078)) == 1);
    REQUIRE(selector(3, 2, Nat(1078)) == 2);
    REQUIRE(selector(3, 3, Nat(1078)) == 1);
    REQUIRE_THROWS_AS(selector(2, 0, Nat(322)), EncodingError);
    REQUIRE_THROWS_AS(selector(2, 3, Nat(322)), EncodingError);
}

TEST_CASE("selector inverts encode_ctor across arities", "[natenc]") {
    EncodedAdt e;
    e.name = "T";
    e.ctor_names = {"A", "B", "C"};
    e.arities = {1, 2, 3};
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        for (size_t ci = 0; ci < 3; ++ci) {
            size_t a = e.arities[ci];
            std::vector<Nat> args;
            for (size_t j = 0; j < a; ++j) args.emplace_back(rng() % 1000);
            Nat x = encode_ctor(e, ci, args);
            REQUIRE(cantor_fst(x) == e.tag(ci));
            for (size_t j = 1; j <= a; ++j) REQUIRE(selector(a, j, x) == args[j - 1]);
        }
    }
}

TEST_CASE("denatify inverts natify on random values", "[natenc]") {
    Program lp = testutil::load_sample("lists.rcc");
    Program sp = testutil::load_sample("shapes.rcc");
    TypeRef lt = testutil::list_nat();
    TypeRef tt{"Tree", {}};
    TypeRef olt{"Option", {testutil::list_nat()}};

    std::vector<ValuePtr> vals = {
        nat_list({}),
        nat_list({0}),
        nat_list({3, 1, 4}),
        nat_list({9, 9, 9, 9}),
    };
    for (const auto& v : vals) {
        Nat n = natify(lp, lt, *v);
        REQUIRE(value_eq(*denatify(lp, lt, n), *v));
        REQUIRE(value_eq(*denatify(lp, lt, n, true), *v));
    }

    auto tr = testutil::node(testutil::node(testutil::leaf(), 3, testutil::leaf()), 1,
                             testutil::leaf());
    REQUIRE(value_eq(*denatify(sp, tt, natify(sp, tt, *tr)), *tr));

    auto some = conv("Option", "Some", 1, {nat_list({4, 2})});
    REQUIRE(value_eq(*denatify(sp, olt, natify(sp, olt, *some)), *some));
}

TEST_CASE("lenient decoding clamps wild tags to the last constructor", "[natenc]") {
    Program p = testutil::load_sample("lists.rcc");
    TypeRef lt = testutil::list_nat();

    Nat wild = cantor_pair(3, cantor_pair(4, 1)); // tag 3 on a two-ctor type
    REQUIRE_THROWS_AS(denatify(p, lt, wild), EncodingError);
    ValuePtr v = denatify(p, lt, wild, true);
    REQUIRE(value_eq(*v, *nat_list({4}))); // Cons 4 Nil

    // 0 = pair(0,0): strict rejects the tag; lenient decodes Cons whose tail
    // component is 0 again, so the guard has to cut the cycle.
    REQUIRE_THROWS_AS(denatify(p, lt, Nat(0)), EncodingError);
    REQUIRE_THROWS_AS(denatify(p, lt, Nat(0), true), EncodingError);
}

TEST_CASE("lower_case_shape builds the expected cascade", "[natenc]") {
    EncodedAdt list;
    list.name = "List";
    list.ctor_names = {"Nil", "Cons"};
    list.arities = {0, 2};

    auto a0 = [] { return nt_arg(0); };
    NatTermPtr expected = nt_if(
        nt_call("eq", {nt_call("fst", {a0()}), nt_num(Nat(1))}), nt_call("arm1", {}),
        nt_call("arm2", {nt_call("fst", {nt_call("snd", {a0()})}),
                         nt_call("snd", {nt_call("snd", {a0()})})}));
    REQUIRE(nat_term_eq(*lower_case_shape(list), *expected));

    // A single-constructor type needs no test at all.
    EncodedAdt box;
    box.name = "Box";
    box.ctor_names = {"Box"};
    box.arities = {1};
    REQUIRE(nat_term_eq(*lower_case_shape(box), *nt_call("arm1", {nt_call("snd", {a0()})})));
}

TEST_CASE("the lowered cascade dispatches like denatify", "[natenc]") {
    EncodedAdt list;
    list.name = "List";
    list.ctor_names = {"Nil", "Cons"};
    list.arities = {0, 2};

    NatProgram np;
    np.defs.push_back({"arm1", 0, nt_num(Nat(100))});
    np.defs.push_back({"arm2", 2, nt_call("add", {nt_arg(0), nt_arg(1)})});
    np.defs.push_back({"disp", 1, lower_case_shape(list)});

    REQUIRE(eval_nat(np, "disp", {Nat(1)}) == 100);    // Nil
    REQUIRE(eval_nat(np, "disp", {Nat(322)}) == 6);    // Cons 5 Nil -> 5 + code(Nil)
    // Out-of-range tag falls into the untested final arm, matching lenient
    // denatify (Cons 4 Nil).
    REQUIRE(eval_nat(np, "disp", {cantor_pair(3, cantor_pair(4, 1))}) == 5);
}
