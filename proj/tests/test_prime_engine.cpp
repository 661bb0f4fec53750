#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmzv/prime_engine.hpp"
#include "oracles.hpp"

#include <random>

using namespace fmzv;

TEST_CASE("sieve_primes matches trial division") {
    CHECK(sieve_primes(1, 10) == std::vector<u64>{2, 3, 5, 7});
    CHECK(sieve_primes(10, 20) == std::vector<u64>{11, 13, 17, 19});
    CHECK(sieve_primes(24, 28).empty());
    CHECK(sieve_primes(2, 2) == std::vector<u64>{2});
    CHECK(sieve_primes(20, 10).empty());

    std::vector<u64> expected;
    for (u64 n = 0; n <= 20000; ++n)
        if (oracle::trial_prime(n)) expected.push_back(n);
    CHECK(sieve_primes(0, 20000) == expected);

    // a window straddling several sieve segments
    const u64 lo = 999'000, hi = 1'600'000;
    auto primes = sieve_primes(lo, hi);
    REQUIRE(!primes.empty());
    CHECK(primes.front() == 999'007);
    for (std::size_t i = 0; i < primes.size(); i += 997) CHECK(oracle::trial_prime(primes[i]));
    CHECK(std::is_sorted(primes.begin(), primes.end()));
    CHECK(primes.size() == 42'694);
}

TEST_CASE("PrimeRange overload") {
    PrimeRange r(1, 30, 7);
    CHECK(r.lo == 2);
    CHECK(sieve_primes(r) == sieve_primes(2, 30));
}

TEST_CASE("pow_mod") {
    CHECK(pow_mod(Residue(2, 7), 3).value == 1);
    CHECK(pow_mod(Residue(5, 11), 0).value == 1);
    CHECK(pow_mod(Residue(3, 5), 4).value == 1);
    for (u64 p : sieve_primes(3, 400))
        for (u64 a = 1; a < p; ++a) REQUIRE(pow_mod(a, p - 1, p) == 1);
    // wide moduli take the 128-bit path
    const u64 big = 18446744073709551557ull; // largest 64-bit prime
    CHECK(pow_mod(2, big - 1, big) == 1);
}

TEST_CASE("mod_inv") {
    CHECK(mod_inv(Residue(3, 7)).value == 5);
    CHECK(mod_inv(Residue(1, 101)).value == 1);
    CHECK(mod_inv(Residue(4, 7)).value == 2);
    for (u64 p : sieve_primes(3, 2000))
        for (u64 a = 1; a < p; a += 1 + p / 50) REQUIRE(mul_mod(inv_mod(a, p), a, p) == 1);
    CHECK_THROWS_AS(mod_inv(Residue(0, 7)), Error);
    try {
        inv_mod(14, 7);
        FAIL("expected ZeroInverse");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroInverse);
    }
}

TEST_CASE("batch_inv") {
    std::vector<u64> v{1, 2, 3, 4};
    CHECK(batch_inv(v, 5) == std::vector<u64>{1, 3, 2, 4});
    std::vector<u64> w{1, 2, 3, 4, 5, 6};
    CHECK(batch_inv(w, 7) == std::vector<u64>{1, 4, 5, 2, 3, 6});
    std::vector<u64> single{9};
    CHECK(batch_inv(single, 11).front() == inv_mod(9, 11));
    CHECK(batch_inv(std::vector<u64>{}, 11).empty());

    std::vector<Residue> rs{Residue(3, 7), Residue(4, 7)};
    auto out = batch_inv(std::span<const Residue>(rs));
    CHECK(out[0].value == 5);
    CHECK(out[1].value == 2);

    std::vector<u64> bad{1, 2, 0, 4};
    try {
        batch_inv(bad, 5);
        FAIL("expected ZeroInverse");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroInverse);
        REQUIRE(e.position().has_value());
        CHECK(*e.position() == 2);
    }
}

TEST_CASE("batch_inv agrees with the extended-gcd oracle on random input") {
    std::mt19937_64 rng(20240611);
    auto primes = sieve_primes(3, 1'000'000);
    for (int round = 0; round < 100; ++round) {
        const u64 p = primes[rng() % primes.size()];
        std::vector<u64> v(100);
        for (auto& x : v) x = 1 + rng() % (p - 1);
        auto inv = batch_inv(v, p);
        for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(inv[i] == oracle::egcd_inv(v[i], p));
    }
}

TEST_CASE("pow_mod_p2") {
    auto r = pow_mod_p2(2, 4, 3);
    CHECK(r.value == 7);
    CHECK(r.modulus() == 9);
    CHECK(pow_mod_p2(2, 4, 5).value == 16);
    CHECK(pow_mod_p2(2, 1092, 1093).value == 1);
    CHECK(pow_mod_p2(2, 3510, 3511).value == 1);
    CHECK(pow_mod_p2(3, 1092, 1093).value != 1);
    try {
        pow_mod_p2(10, 4, 5);
        FAIL("expected SharedFactor");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SharedFactor);
    }
    for (u64 p : sieve_primes(3, 3000))
        for (u64 N : {2ull, 3ull, 7ull, 10ull}) {
            if (N % p == 0) continue;
            const auto v = pow_mod_p2(N, p - 1, p).value;
            REQUIRE(v == oracle::slow_pow_p2(N, p - 1, p));
            REQUIRE(v % p == 1);
        }
}

TEST_CASE("is_prime and gcd") {
    for (u64 n = 0; n < 5000; ++n) REQUIRE(is_prime(n) == oracle::trial_prime(n));
    CHECK(is_prime(18446744073709551557ull));
    CHECK_FALSE(is_prime(3215031751ull)); // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(gcd(12, 18) == 6);
    CHECK(gcd(0, 5) == 5);
}

TEST_CASE("Residue") {
    Residue r(17, 7);
    CHECK(r.value == 3);
    CHECK(Residue::from_signed(-1, 7).value == 6);
    CHECK(Residue::from_signed(-14, 7).value == 0);
}
