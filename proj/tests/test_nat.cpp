#include "rcc/nat.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using rcc::Nat;

TEST_CASE("monus clamps at zero") {
    CHECK(rcc::monus(Nat(7), Nat(3)) == 4);
    CHECK(rcc::monus(Nat(3), Nat(7)) == 0);
    CHECK(rcc::monus(Nat(3), Nat(3)) == 0);
    CHECK(rcc::monus(Nat(0), Nat(0)) == 0);
}

TEST_CASE("triangle_root on small values") {
    // T(0)=0 T(1)=1 T(2)=3 T(3)=6 T(4)=10
    unsigned expect[] = {0, 1, 1, 2, 2, 2, 3, 3, 3, 3, 4};
    for (unsigned n = 0; n <= 10; ++n) CHECK(rcc::triangle_root(Nat(n)) == expect[n]);
}

TEST_CASE("triangle_root brackets its input") {
    std::mt19937_64 rng(20240817);
    for (int i = 0; i < 500; ++i) {
        Nat n = Nat(rng());
        if (i % 3 == 0) n = n * Nat(rng()) + Nat(rng() % 1000); // push past 64 bits
        Nat t = rcc::triangle_root(n);
        CHECK(t * (t + 1) / 2 <= n);
        CHECK((t + 1) * (t + 2) / 2 > n);
    }
}

TEST_CASE("bit_length") {
    CHECK(rcc::bit_length(Nat(0)) == 0);
    CHECK(rcc::bit_length(Nat(1)) == 1);
    CHECK(rcc::bit_length(Nat(2)) == 2);
    CHECK(rcc::bit_length(Nat(3)) == 2);
    CHECK(rcc::bit_length(Nat(4)) == 3);
    CHECK(rcc::bit_length(Nat(255)) == 8);
    CHECK(rcc::bit_length(Nat(256)) == 9);
    CHECK(rcc::bit_length(Nat(1) << 100) == 101);
}

TEST_CASE("nat_bit extracts binary digits") {
    Nat n(0b101101);
    bool bits[] = {true, false, true, true, false, true, false};
    for (unsigned i = 0; i < 7; ++i) CHECK(rcc::nat_bit(n, i) == bits[i]);
}

TEST_CASE("parse_nat") {
    CHECK(rcc::parse_nat("0") == 0);
    CHECK(rcc::parse_nat("12345678901234567890123456789") ==
          Nat("12345678901234567890123456789"));
    CHECK_THROWS(rcc::parse_nat(""));
    CHECK_THROWS(rcc::parse_nat("12x"));
    CHECK_THROWS(rcc::parse_nat("-3"));
}

TEST_CASE("u64 round trips") {
    CHECK(rcc::fits_u64(Nat(0)));
    CHECK(rcc::fits_u64((Nat(1) << 64) - 1));
    CHECK_FALSE(rcc::fits_u64(Nat(1) << 64));
    CHECK(rcc::to_u64(Nat(99)) == 99);
}
