#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmzv/harmonic_sums.hpp"
#include "oracles.hpp"

using namespace fmzv;

TEST_CASE("Index basics") {
    Index k{1, 2, 3};
    CHECK(k.weight() == 6);
    CHECK(k.depth() == 3);
    CHECK(k.reversed() == Index{3, 2, 1});
    CHECK(k.slice(1, 3) == Index{2, 3});
    CHECK(Index::parse("1,2,3") == k);
    CHECK(Index::parse(" 4 , 5") == Index{4, 5});
    CHECK(Index::parse("").empty());
    CHECK(Index::parse("()").empty());
    CHECK(Index::parse("empty").empty());
    CHECK(Index{}.weight() == 0);
    CHECK_THROWS_AS(Index::parse("1,0"), Error);
    CHECK_THROWS_AS(Index::parse("1,x"), Error);
    CHECK(indices_of_weight(3).size() == 4);
    CHECK(indices_of_weight(5).size() == 16);
    CHECK(indices_of_weight(0).size() == 1);
}

TEST_CASE("ColorMap") {
    auto c = ColorMap::bracket(12, 1, 2);
    CHECK(c.units() == std::vector<unsigned>{1, 5, 7, 11});
    CHECK(*c.at(1) == std::vector<unsigned>{10});
    CHECK(*c.at(5) == std::vector<unsigned>{2});
    CHECK(*c.at_prime(13) == std::vector<unsigned>{10});
    CHECK_THROWS_AS(c.at_prime(3), Error);
    CHECK_THROWS_AS(c.set(1, std::vector<unsigned>{1, 2}), Error);
    ColorMap box(5, 2);
    CHECK(box.all_box());
    CHECK(units_mod(1) == std::vector<unsigned>{0});
    CHECK(ColorMap::bracket(1, 2, 0) < ColorMap::bracket(2, 2, 0));
}

TEST_CASE("s_pk examples") {
    CHECK(s_pk(0, 2, 1, 5).value == 4);
    CHECK(s_pk(1, 3, 1, 7).value == 0);
    CHECK(s_pk(2, 3, 1, 7).value == 2);
    try {
        s_pk(0, 14, 1, 7);
        FAIL("expected LevelSharesFactor");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::LevelSharesFactor);
    }
}

TEST_CASE("s_pk agrees with direct enumeration") {
    for (u64 p : sieve_primes(3, 400))
        for (unsigned N = 1; N <= 12; ++N) {
            if (N % p == 0) continue;
            for (unsigned j = 0; j < N; ++j)
                for (unsigned k = 1; k <= 3; ++k) {
                    u64 want = 0;
                    for (u64 m = 1; m < p; ++m) {
                        // jp/N < m < (j+1)p/N in integers
                        if (m * N > j * p && m * N < (j + 1) * p) {
                            u64 t = 1;
                            for (unsigned e = 0; e < k; ++e) t = t * oracle::fermat_inv(m, p) % p;
                            want = (want + t) % p;
                        }
                    }
                    REQUIRE(s_pk(j, N, k, p).value == want);
                }
        }
}

TEST_CASE("zeta_p examples") {
    for (u64 p : sieve_primes(3, 200)) CHECK(zeta_p(Index{1}, p).value == 0);
    CHECK(zeta_p(Index{1, 1}, 5).value == 0);
    CHECK(zeta_p(Index{1, 2}, 7).value == 3);
    CHECK(zeta_p(Index{2, 1}, 7).value == 4);
    CHECK(zeta_p(Index{}, 11).value == 1);
}

TEST_CASE("prefix-sum evaluation equals brute-force enumeration (p <= 50, depth <= 3)") {
    for (u64 p : sieve_primes(3, 50)) {
        PrimeContext ctx(p);
        for (unsigned w = 1; w <= 7; ++w)
            for (const auto& k : indices_of_weight(w)) {
                if (k.depth() > 3) continue;
                REQUIRE(zeta_p(ctx, k) == oracle::brute_zeta(k.parts(), p));
            }
    }
}

TEST_CASE("colored sums") {
    CHECK(zeta_p_colored(Index{}, 4, {}, 7).value == 1);
    CHECK(zeta_p_colored(Index{3}, 12, {10}, 13).value == 12);
    CHECK(zeta_p_colormap(Index{3}, ColorMap::bracket(12, 1, 2), 13).value == 12);
    CHECK(zeta_p_colormap(Index{1}, ColorMap::bracket(2, 1, 0), 5).value == 2);
    CHECK(zeta_p_colormap(Index{1, 2}, ColorMap(3, 2), 7).value == 0);
    CHECK(zeta_p_colormap(Index{}, ColorMap::bracket(3, 0, 1), 7).value == 1);
    for (u64 p : {5ull, 7ull, 13ull})
        CHECK(zeta_p_colormap(Index{1, 2}, ColorMap::bracket(1, 2, 0), p) == zeta_p(Index{1, 2}, p));
    CHECK_THROWS_AS(zeta_p_colored(Index{1, 2}, 3, {1}, 7), Error);
    try {
        zeta_p_colored(Index{1}, 6, {1}, 3);
        FAIL("expected LevelSharesFactor");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::LevelSharesFactor);
    }
}

TEST_CASE("colored sums agree with brute force and partition the full sum") {
    for (u64 p : sieve_primes(5, 47)) {
        PrimeContext ctx(p);
        for (unsigned N : {2u, 3u, 4u}) {
            if (N % p == 0) continue;
            for (const auto& k : {Index{1}, Index{2, 1}, Index{1, 1, 2}}) {
                const std::size_t r = k.depth();
                u64 total = 0;
                std::vector<unsigned> alpha(r, 0);
                while (true) {
                    const u64 v = zeta_p_colored(ctx, k, N, alpha);
                    REQUIRE(v == oracle::brute_nested(k.parts(), p, 1, p - 1, &alpha, N));
                    total = (total + v) % p;
                    std::size_t i = 0;
                    while (i < r && ++alpha[i] == N) alpha[i++] = 0;
                    if (i == r) break;
                }
                REQUIRE(total == zeta_p(ctx, k));
            }
        }
    }
}

TEST_CASE("interval sums and the j-sum lemma") {
    CHECK(interval_sum(Index{1}, 2, 0, 5).value == 4);
    CHECK(interval_sum(Index{}, 3, 1, 7).value == 1);
    CHECK(interval_sum(Index{1}, 2, 0, 5).value == 2 * zeta_p_colored(Index{1}, 2, {0}, 5).value % 5);
    for (u64 p : sieve_primes(3, 200))
        for (unsigned N : {2u, 3u, 5u}) {
            if (N % p == 0) continue;
            PrimeContext ctx(p);
            for (unsigned j = 0; j < N; ++j)
                for (const auto& k : {Index{1}, Index{2}, Index{1, 2}, Index{2, 1, 1}}) {
                    auto [first, last] = interval_bounds(j, N, p);
                    REQUIRE(interval_sum(ctx, k, N, j) == oracle::brute_nested(k.parts(), p, first, last));
                    const u64 rhs = ctx.mul(ctx.pow(N, k.weight()),
                                            zeta_p_colormap(ctx, k, ColorMap::bracket(N, k.depth(), j)));
                    REQUIRE(interval_sum(ctx, k, N, j) == rhs);
                }
        }
}

TEST_CASE("interval bounds exclude the fractional endpoints") {
    auto b = interval_bounds(1, 3, 7); // 7/3 < m < 14/3
    CHECK(b.first == 3);
    CHECK(b.last == 4);
    auto e = interval_bounds(0, 4, 3); // 0 < m < 3/4: empty
    CHECK(e.first > e.last);
}

TEST_CASE("inverse power tables") {
    PrimeContext ctx(101);
    const auto& inv = ctx.inverses();
    for (u64 m = 1; m < 101; ++m) REQUIRE(inv[m] * m % 101 == 1);
    const auto& p3 = ctx.inverse_powers(3);
    const auto& p5 = ctx.inverse_powers(5);
    for (u64 m = 1; m < 101; ++m) {
        REQUIRE(p3[m] == pow_mod(inv[m], 3, 101));
        REQUIRE(p5[m] == pow_mod(inv[m], 5, 101));
    }
    const auto& pre = ctx.inverse_power_prefix(2);
    CHECK(pre[100] == zeta_p(ctx, Index{2}));
}
