#include "doctest.h"

#include "acirc/field.hpp"
#include "acirc/rng.hpp"

using namespace acirc;

TEST_CASE("prime field basics") {
    Field f7 = Field::prime(7);
    CHECK(f7.characteristic() == 7);
    CHECK(f7.element(10) == f7.element(3));
    CHECK(f7.element(3) + f7.element(5) == f7.element(1));
    CHECK(f7.element(2).inv() == f7.element(4));
    CHECK((-f7.element(3)) == f7.element(4));
    CHECK_THROWS_WITH_AS(Field::prime(6), doctest::Contains("NotPrime"), Error);
}

TEST_CASE("rationals canonical form") {
    Field q = Field::rationals();
    CHECK(q.characteristic() == 0);
    Fe half = q.element(mpz_class(3), mpz_class(6));
    CHECK(half == q.element(mpz_class(1), mpz_class(2)));
    CHECK(half.str() == "1/2");
    CHECK(q.element(mpz_class(1), mpz_class(2)) + q.element(mpz_class(1), mpz_class(3)) ==
          q.element(mpz_class(5), mpz_class(6)));
    CHECK(q.parse_literal("-4/8").str() == "-1/2");
    CHECK_THROWS_AS(q.element(1) / q.zero(), Error);
}

TEST_CASE("literals over prime fields") {
    Field f7 = Field::prime(7);
    CHECK(f7.parse_literal("1/2") == f7.element(4)); // 2*4 = 1 mod 7
    CHECK_THROWS_WITH_AS(f7.parse_literal("1/7"), doctest::Contains("RationalOverPrimeField"), Error);
    CHECK_THROWS_AS(f7.parse_literal("abc"), Error);
}

TEST_CASE("half exists except in characteristic two") {
    CHECK(Field::prime(7).half() == Field::prime(7).element(4));
    CHECK_THROWS_WITH_AS(Field::prime(2).half(), doctest::Contains("CharacteristicTwo"), Error);
}

TEST_CASE("field mismatch is detected") {
    CHECK_THROWS_WITH_AS(Field::prime(7).element(1) + Field::prime(11).element(1),
                         doctest::Contains("FieldMismatch"), Error);
}

TEST_CASE("field axioms on random triples") {
    for (auto spec : {FieldSpec{FieldKind::PrimeField, 101}, FieldSpec{FieldKind::Rationals, 0}}) {
        Field f = Field::make(spec);
        Rng rng(42);
        for (int i = 0; i < 1000; ++i) {
            auto draw = [&] {
                long n = static_cast<long>(rng.below(201)) - 100;
                if (f.is_prime_field()) return f.element(n);
                long d = static_cast<long>(rng.below(20)) + 1;
                return f.element(mpz_class(n), mpz_class(d));
            };
            Fe a = draw(), b = draw(), c = draw();
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * b == b * a);
            CHECK(a + b == b + a);
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) CHECK(a * a.inv() == f.one());
        }
    }
}

TEST_CASE("characteristic consistency") {
    for (std::uint64_t p : {2ull, 7ull, 101ull}) {
        Field f = Field::prime(p);
        Fe acc = f.zero();
        for (std::uint64_t i = 0; i < p; ++i) acc = acc + f.one();
        CHECK(acc.is_zero());
    }
}

TEST_CASE("large prime moduli") {
    std::uint64_t m61 = (1ull << 61) - 1;
    Field f = Field::prime(m61); // Mersenne prime, exercises the MR path
    CHECK(f.element(2).pow(61) == f.one()); // 2^61 - 1 = 0 mod p
    CHECK(is_prime_u64(2147483647ull));
    CHECK(!is_prime_u64((1ull << 32) + 1)); // 641 divides it
}

TEST_CASE("canonicalization is idempotent") {
    Field q = Field::rationals();
    for (long num : {6L, -6L, 0L, 9L})
        for (long den : {4L, -4L, 3L}) {
            Fe x = q.element(mpz_class(num), mpz_class(den));
            Fe y = q.parse_literal(x.str()); // normalize again via the parser
            CHECK(x == y);
            CHECK(x.str() == y.str());
            CHECK(x.rational().get_den() > 0);
        }
}
