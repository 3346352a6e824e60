#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include "oddham/fp.hpp"

using namespace oddham;
using boost::multiprecision::cpp_int;

// Independent big-integer binomial oracle (Pascal's triangle over Z).
static cpp_int binom_exact(unsigned a, unsigned b) {
    if (b > a) return 0;
    std::vector<cpp_int> row(a + 1, 0);
    row[0] = 1;
    for (unsigned i = 1; i <= a; ++i)
        for (unsigned j = i; j > 0; --j) row[j] += row[j - 1];
    return row[b];
}

TEST_CASE("binomials mod p match the big-integer oracle") {
    for (std::uint32_t p : {5u, 7u, 11u}) {
        PrimeField F(p);
        unsigned limit = 2 * p * p;
        for (unsigned a = 0; a <= limit; ++a)
            for (unsigned b = 0; b <= a; ++b) {
                Scalar expect = static_cast<Scalar>(binom_exact(a, b) % p);
                CAPTURE(p, a, b);
                REQUIRE(binom_mod_p(a, b, F) == expect);
            }
    }
}

TEST_CASE("binomial special values") {
    PrimeField F5(5);
    CHECK(binom_mod_p(2, 1, F5) == 2);
    CHECK(binom_mod_p(5, 1, F5) == 0);  // base-5 digits (1,0) vs (0,1)
    CHECK(binom_mod_p(7, 3, F5) == 0);  // C(7,3) = 35
    PrimeField F7(7);
    CHECK(binom_mod_p(7, 1, F7) == 0);
    CHECK(binom_mod_p(2, 1, F7) == 2);
}

TEST_CASE("field arithmetic basics") {
    PrimeField F(7);
    CHECK(F.add(5, 4) == 2);
    CHECK(F.sub(2, 5) == 4);
    CHECK(F.mul(3, 5) == 1);
    CHECK(F.inv(3) == 5);
    CHECK(F.pow(3, 6) == 1);
    CHECK(F.neg(0) == 0);
    CHECK(F.reduce(-9) == 5);
    for (Scalar a = 1; a < 7; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
}

TEST_CASE("capacity guard rejects unsupported primes") {
    CHECK_THROWS_AS(PrimeField(4), CapacityError);
    CHECK_THROWS_AS(PrimeField(3), CapacityError);
    if (!env_flag("ODDHAM_UNLOCK_NP")) CHECK_THROWS_AS(PrimeField(13), CapacityError);
}
