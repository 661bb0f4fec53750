#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmzv/bernoulli_lab.hpp"
#include "oracles.hpp"

using namespace fmzv;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("exact Bernoulli numbers match the Akiyama-Tanigawa oracle") {
    const auto& b = bernoulli_exact(60);
    const auto ref = oracle::akiyama_tanigawa(60);
    for (unsigned n = 0; n <= 60; ++n) REQUIRE(b[n] == ref[n]);
    CHECK(b[1] == mpq_class(1, 2));
    CHECK(b[12] == mpq_class(-691, 2730));
    CHECK(b[4] == mpq_class(-1, 30));
}

TEST_CASE("bernoulli_mod_p examples") {
    CHECK(bernoulli_mod_p(4, 7).value == 3);
    CHECK(bernoulli_mod_p(10, 13).value == 5);
    CHECK(code_of([] { bernoulli_mod_p(6, 7); }) == Errc::PoleAtVonStaudtClausen);
    CHECK(code_of([] { bernoulli_mod_p(3, 7); }) == Errc::InvalidArgument);
    CHECK(code_of([] { bernoulli_mod_p(4, 3); }) == Errc::InvalidArgument);
}

TEST_CASE("half-sum, series, exact and Voronoi agree for p <= 200") {
    for (u64 p : sieve_primes(5, 200)) {
        PrimeContext ctx(p);
        const auto table = bernoulli_series_table(p);
        for (unsigned n = 2; n + 3 <= p; n += 2) {
            const u64 exact = bernoulli_exact_mod(n, p);
            REQUIRE(exact == oracle::rational_mod(oracle::akiyama_tanigawa(n)[n], p));
            REQUIRE(table.at(n) == exact);
            REQUIRE(bernoulli_mod_p(ctx, n, BernoulliMethod::Voronoi) == exact);
            const unsigned k = static_cast<unsigned>(p - n);
            if (!half_sum_degenerate(p, k)) REQUIRE(bernoulli_half_sum(ctx, k) == exact);
        }
    }
}

TEST_CASE("Kummer reduction for indices beyond p-3") {
    for (u64 p : {7ull, 11ull, 13ull, 31ull}) {
        PrimeContext ctx(p);
        for (unsigned n = 2; n <= 80; n += 2) {
            if (n % (p - 1) == 0) continue;
            REQUIRE(bernoulli_mod_p(ctx, n) == bernoulli_exact_mod(n, p));
        }
    }
}

TEST_CASE("half-sum degeneracy falls back") {
    // 2^(k-1) = 1 mod p: p = 31, k = 11 (2^10 = 1024 = 1 mod 31)
    CHECK(half_sum_degenerate(31, 11));
    PrimeContext ctx(31);
    CHECK(code_of([&] { bernoulli_half_sum(ctx, 11); }) == Errc::InvalidArgument);
    CHECK(bernoulli_mod_p(ctx, 20) == bernoulli_exact_mod(20, 31));
    // above the series cap the Voronoi route takes over
    CHECK(bernoulli_mod_p(ctx, 20, BernoulliMethod::Auto, 7) == bernoulli_exact_mod(20, 31));
}

TEST_CASE("series cap") {
    CHECK(code_of([] { bernoulli_series_table(3001); }) == Errc::ScanCapExceeded);
    CHECK(bernoulli_series_table(2999).max_index == 2996);
}

TEST_CASE("frak Z") {
    CHECK(frak_z(3, 7).value == 1);
    CHECK(frak_z(3, 13).value == 6);
    for (u64 p : sieve_primes(7, 300))
        for (unsigned k = 2; k + 2 <= p && k <= 12; k += 2) REQUIRE(frak_z(k, p).value == 0);
    CHECK(code_of([] { frak_z(6, 7); }) == Errc::InvalidArgument);
    CHECK(code_of([] { frak_z(1, 7); }) == Errc::InvalidArgument);
}

TEST_CASE("regularity and irregular pairs") {
    CHECK(is_regular(7));
    CHECK_FALSE(is_regular(37));
    CHECK_FALSE(is_regular(691));
    CHECK(irregularity_index(7).index() == 0);
    const auto i37 = irregularity_index(37);
    REQUIRE(i37.index() == 1);
    CHECK(i37.pairs[0].n == 32);
    CHECK(i37.pairs[0].confirmations >= 2);
    CHECK(irregularity_index(157).index() == 2);
    const auto i157 = irregularity_index(157);
    CHECK(i157.pairs[0].n == 62);
    CHECK(i157.pairs[1].n == 110);
    for (u64 p : sieve_primes(5, 200)) {
        const bool scan = irregularity_index(p).index() == 0;
        bool exact = true;
        for (unsigned n = 2; n + 3 <= p; n += 2) exact = exact && bernoulli_exact_mod(n, p) != 0;
        REQUIRE(scan == exact);
    }
}

TEST_CASE("eth_p") {
    CHECK(eth_p(7) == 3);
    CHECK(eth_p(16843) == 5);
    PrimeContext ctx(16843);
    CHECK(bernoulli_half_sum(ctx, 3) == 0);
    CHECK(bernoulli_half_sum(ctx, 5) != 0);
    CHECK(code_of([] { eth_p(3); }) == Errc::InvalidArgument);
}

TEST_CASE("eth bound") {
    auto b11 = check_eth_bound(11);
    CHECK(b11.eth == 3);
    CHECK(b11.case_bound == 3);
    CHECK(b11.ok());
    auto b13 = check_eth_bound(13);
    CHECK(b13.case_bound == 5);
    CHECK(b13.ok());
    auto b37 = check_eth_bound(37);
    CHECK(b37.irregularity == 1);
    CHECK(b37.eth <= 5);
    CHECK(b37.ok());
}

TEST_CASE("half-index rows") {
    PrimeContext c7(7), c11(11), c13(13);
    auto r7 = half_index_row(c7);
    CHECK(r7.p_mod_4 == 3);
    CHECK_FALSE(r7.vanishes);
    auto r11 = half_index_row(c11);
    CHECK_FALSE(r11.vanishes);
    CHECK(bernoulli_mod_p(6, 11).value == inv_mod(9, 11));
    auto r13 = half_index_row(c13);
    CHECK(r13.p_mod_4 == 1);
    const auto rep = half_index_scan(PrimeRange(5, 5000));
    CHECK(rep.ok());
}

TEST_CASE("VHZ") {
    CHECK(evaluate_at(vhz_check(1, 2), 7).verdict == Verdict::Pass);
    CHECK(evaluate_at(vhz_check(1, 2), 7).lhs == 3);
    CHECK(evaluate_at(vhz_check(2, 1), 7).lhs == 4);
    CHECK(evaluate_at(vhz_check(2, 1), 7).rhs == 4);
    CHECK(evaluate_at(vhz_check(1, 1), 3).verdict == Verdict::Skip);
    CHECK(evaluate_at(vhz_check(1, 1), 5).verdict == Verdict::Pass);
    for (unsigned k1 = 1; k1 <= 4; ++k1)
        for (unsigned k2 = 1; k2 <= 4; ++k2) {
            auto r = verify_vhz(k1, k2, PrimeRange(2, 600));
            CHECK_MESSAGE(r.ok(), r.id);
            for (const auto& s : r.skipped) CHECK(s.p <= k1 + k2 + 2);
        }
}

TEST_CASE("level-12 displays and their power-sum congruences") {
    CHECK(evaluate_at(level12_check(3), 13).verdict == Verdict::Pass);
    // 2 * zeta^{[2]}_12(3) at p = 13: only m = 10 qualifies, 2/10^3 = 11
    CHECK(2 * zeta_p_colormap(Index{3}, ColorMap::bracket(12, 1, 2), 13).value % 13 == 11);
    // brute-force color sums at p = 7, k = 3
    for (unsigned j : {2u, 3u}) {
        u64 s = 0;
        const u64 want = (12 - j * 7 % 12) % 12;
        for (u64 m = 1; m < 7; ++m)
            if (m % 12 == want) s = (s + pow_mod(oracle::fermat_inv(m, 7), 3, 7)) % 7;
        CHECK(zeta_p_colormap(Index{3}, ColorMap::bracket(12, 1, j), 7).value == s);
    }
    CHECK(evaluate_at(level12_check(3), 7).verdict == Verdict::Pass);
    CHECK(evaluate_at(level12_check(5), 13).verdict == Verdict::Pass);
    for (unsigned k : {3u, 5u, 7u, 9u}) CHECK(verify_level12(k, PrimeRange(2, 2000)).ok());
    for (unsigned n = 1; n <= 8; ++n) CHECK(verify_vandiver_power_sums(n, PrimeRange(2, 2000)).ok());
    CHECK(evaluate_at(vandiver_check(1), 11).verdict == Verdict::Pass);
    CHECK(evaluate_at(vandiver_check(2), 13).verdict == Verdict::Pass);
    CHECK(evaluate_at(vandiver_check(3), 7).verdict == Verdict::Skip);
}

TEST_CASE("nonzero witness by weight") {
    auto w3 = nonzero_witness_weight(3, 100);
    REQUIRE(w3);
    CHECK(w3->p == 7);
    CHECK(w3->value == 1);
    auto w6 = nonzero_witness_weight(6, 100);
    REQUIRE(w6);
    CHECK(w6->p == 7);
    CHECK(w6->parts == std::vector<unsigned>{3, 3});
    CHECK(code_of([] { nonzero_witness_weight(4, 100); }) == Errc::InvalidWeight);
    CHECK_FALSE(nonzero_witness_weight(9, 10).has_value());
}
