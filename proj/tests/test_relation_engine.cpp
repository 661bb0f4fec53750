#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmzv/bernoulli_lab.hpp"
#include "fmzv/catalogue.hpp"
#include "fmzv/relation_engine.hpp"
#include "oracles.hpp"

#include <random>

using namespace fmzv;

namespace {

u64 eval_sum(PrimeContext& ctx, const FormalSum& s) {
    const auto e = evaluate(ctx, ProductSum(s));
    REQUIRE(e.value.has_value());
    return *e.value;
}

u64 eval_term(PrimeContext& ctx, const ColoredTerm& t) {
    const u64 c = *rational_mod(t.coeff, ctx.p());
    return ctx.mul(c, zeta_p_colormap(ctx, t.index, t.color));
}

ColorMap random_color(std::mt19937& rng, unsigned N, unsigned arity) {
    ColorMap c(N, arity);
    for (unsigned alpha : c.units()) {
        if (rng() % 5 == 0) continue; // box
        std::vector<unsigned> t(arity);
        for (auto& v : t) v = rng() % N;
        c.set(alpha, t);
    }
    return c;
}

ColoredTerm random_term(std::mt19937& rng, unsigned N, unsigned max_depth) {
    const unsigned depth = 1 + rng() % max_depth;
    std::vector<unsigned> parts(depth);
    for (auto& v : parts) v = 1 + rng() % 3;
    return ColoredTerm(Rational(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3), Index(parts),
                       random_color(rng, N, depth));
}

// number of quasi-shuffles of depths r and s
u64 delannoy(unsigned r, unsigned s) {
    if (r == 0 || s == 0) return 1;
    return delannoy(r - 1, s) + delannoy(r, s - 1) + delannoy(r - 1, s - 1);
}

} // namespace

TEST_CASE("rationals") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("+2/4") == Rational(1, 2));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK(*rational_mod(Rational(1, 2), 7) == 4);
    CHECK(*rational_mod(Rational(-1, 2), 7) == 3);
    CHECK_FALSE(rational_mod(Rational(1, 14), 7).has_value());
}

TEST_CASE("FormalSum is canonical") {
    FormalSum s(1);
    s.add(plain_term(Index{2, 1}, 3));
    s.add(plain_term(Index{1, 2}, 1));
    s.add(plain_term(Index{2, 1}, -3));
    REQUIRE(s.terms().size() == 1);
    CHECK(s.terms()[0].index == Index{1, 2});
    FormalSum t(1, {plain_term(Index{1, 2})});
    CHECK(s == t);
    CHECK((s - t).empty());
    CHECK_THROWS_AS(s.add(bracket_term(Index{1}, 2, 0)), Error);
    CHECK_THROWS_AS(ColoredTerm(1, Index{1, 2}, ColorMap(2, 1)), Error);
}

TEST_CASE("stuffle at level 1") {
    const auto s = stuffle_product(plain_term(Index{1}), plain_term(Index{1}));
    const FormalSum want(1, {plain_term(Index{1, 1}, 2), plain_term(Index{2})});
    CHECK(s == want);
    PrimeContext ctx(5);
    CHECK(eval_sum(ctx, s) == 0);
    // number of quasi-shuffle words equals the Delannoy number
    for (unsigned r = 1; r <= 3; ++r)
        for (unsigned q = 1; q <= 3; ++q) {
            std::vector<unsigned> a(r, 1), b(q, 2);
            const auto prod = stuffle_product(plain_term(Index(a)), plain_term(Index(b)));
            Rational total = 0;
            for (const auto& t : prod.terms()) total += t.coeff;
            CHECK(total == Rational(static_cast<long>(delannoy(r, q))));
        }
}

TEST_CASE("stuffle reproduces the five-term depth (2,1) expansion") {
    // f, g at level 5 chosen so that every merge pattern shows up
    const unsigned N = 5;
    ColorMap f(N, 2), g(N, 1);
    f.set(1, std::vector<unsigned>{1, 2});
    g.set(1, std::vector<unsigned>{1});
    f.set(2, std::vector<unsigned>{3, 4});
    g.set(2, std::vector<unsigned>{4});
    f.set(3, std::vector<unsigned>{0, 0}); // g(3) is box
    g.set(4, std::vector<unsigned>{2});    // f(4) is box
    const ColoredTerm a(1, Index{1, 2}, f), b(1, Index{3}, g);
    const auto s = stuffle_product(a, b);
    REQUIRE(s.terms().size() == 5);
    auto find = [&](const Index& k) -> const ColorMap& {
        for (const auto& t : s.terms())
            if (t.index == k) return t.color;
        FAIL("missing index " << k.to_string());
        return s.terms()[0].color;
    };
    // h1: (l, k1, k2), h2: (k1, l, k2), h3: (k1, k2, l)
    CHECK(*find(Index{3, 1, 2}).at(1) == std::vector<unsigned>{1, 1, 2});
    CHECK(*find(Index{1, 3, 2}).at(2) == std::vector<unsigned>{3, 4, 4});
    CHECK(*find(Index{1, 2, 3}).at(1) == std::vector<unsigned>{1, 2, 1});
    // h4: (k1 + l, k2) needs f_1 = g; h5: (k1, k2 + l) needs f_2 = g
    CHECK(*find(Index{4, 2}).at(1) == std::vector<unsigned>{1, 2});
    CHECK_FALSE(find(Index{4, 2}).at(2).has_value());
    CHECK(*find(Index{1, 5}).at(2) == std::vector<unsigned>{3, 4});
    CHECK_FALSE(find(Index{1, 5}).at(1).has_value());
    for (const auto& t : s.terms()) {
        CHECK_FALSE(t.color.at(3).has_value());
        CHECK_FALSE(t.color.at(4).has_value());
    }
}

TEST_CASE("stuffle is commutative and associative") {
    std::mt19937 rng(7);
    for (int round = 0; round < 40; ++round) {
        const unsigned N = 1 + rng() % 4;
        const auto a = random_term(rng, N, 3), b = random_term(rng, N, 2), c = random_term(rng, N, 2);
        CHECK(stuffle_product(a, b) == stuffle_product(b, a));
        const FormalSum A(N, {a}), B(N, {b}), C(N, {c});
        CHECK(stuffle_product(stuffle_product(A, B), C) == stuffle_product(A, stuffle_product(B, C)));
    }
    CHECK_THROWS_AS(stuffle_product(bracket_term(Index{1}, 2, 0), bracket_term(Index{1}, 3, 0)), Error);
}

TEST_CASE("stuffle is a homomorphism for per-prime evaluation") {
    std::mt19937 rng(11);
    for (int round = 0; round < 60; ++round) {
        const unsigned N = 1 + rng() % 4;
        const auto a = random_term(rng, N, 3), b = random_term(rng, N, 3);
        const auto prod = stuffle_product(a, b);
        for (u64 p : sieve_primes(5, 80)) {
            if (N % p == 0) continue;
            PrimeContext ctx(p);
            if (!rational_mod(a.coeff, p) || !rational_mod(b.coeff, p)) continue;
            const auto e = evaluate(ctx, ProductSum(prod));
            if (!e.value) {
                REQUIRE(p <= prod.max_weight() + 2);
                continue;
            }
            REQUIRE(*e.value == ctx.mul(eval_term(ctx, a), eval_term(ctx, b)));
        }
    }
}

TEST_CASE("reversal") {
    const auto r = reverse_transform(plain_term(Index{1, 2}));
    CHECK(r.sign == -1);
    CHECK(r.term.index == Index{2, 1});
    CHECK(zeta_p(Index{1, 2}, 7).value == (7 - zeta_p(Index{2, 1}, 7).value) % 7);
    const auto e = reverse_transform(ColoredTerm(1, Index{}, ColorMap::constant(3, {})));
    CHECK(e.sign == 1);
    CHECK(e.term.index.empty());
    // [1] at level 3 reverses to alpha -> alpha + alpha = 2 alpha
    const auto rb = reverse_transform(bracket_term(Index{1}, 3, 1));
    CHECK(*rb.term.color.at(1) == std::vector<unsigned>{2});
    CHECK(*rb.term.color.at(2) == std::vector<unsigned>{1});
    for (u64 p : sieve_primes(5, 100)) {
        PrimeContext ctx(p);
        const u64 lhs = zeta_p_colormap(ctx, Index{1}, ColorMap::bracket(3, 1, 1));
        const u64 rhs = ctx.neg(zeta_p_colormap(ctx, Index{1}, rb.term.color));
        REQUIRE(lhs == rhs);
    }
    std::mt19937 rng(3);
    for (int round = 0; round < 50; ++round) {
        const auto t = random_term(rng, 1 + rng() % 6, 4);
        const auto once = reverse_transform(t);
        const auto twice = reverse_transform(once.term);
        CHECK(twice.term == t);
        CHECK(once.sign * twice.sign == 1);
    }
}

TEST_CASE("level lifts") {
    const auto lifted = lift_level(bracket_term(Index{1, 2}, 2, 1), 6);
    CHECK(lifted.level() == 6);
    CHECK(lifted.terms().size() == 9);
    CHECK_THROWS_AS(lift_level(bracket_term(Index{1}, 4, 1), 6), Error);
    const auto id = levels_identity(ColoredTerm(1, Index{1}, ColorMap::constant(2, {0})), 4);
    CHECK(verify_formal_identity(id, PrimeRange(5, 1000)).ok());
}

TEST_CASE("decomposition and KMY split") {
    const auto d1 = decompose_level_N(Index{1, 2}, 1);
    CHECK(d1.terms.size() == 1);
    const auto d2 = decompose_level_N(Index{1}, 2);
    REQUIRE(d2.terms.size() == 2);
    CHECK(d2.terms[0].coeff == 2);
    {
        PrimeContext ctx(5);
        const auto v = evaluate(ctx, d2);
        REQUIRE(v.value);
        CHECK(*v.value == 0);
        CHECK(zeta_p_colormap(ctx, Index{1}, ColorMap::bracket(2, 1, 0)) == 2);
        CHECK(zeta_p_colormap(ctx, Index{1}, ColorMap::bracket(2, 1, 1)) == 3);
    }
    // number of cut tuples: C(r + N - 1, N - 1)
    CHECK(decompose_level_N(Index{1, 2, 3}, 3).terms.size() == 10);
    CHECK(kmy_level2_split(Index{}).terms.size() == 1);
    CHECK(kmy_level2_split(Index{1, 2}).terms.size() == 3);
    CHECK(verify_formal_identity(decompose_identity(Index{1, 2}, 3), PrimeRange(2, 1000)).ok());
    CHECK(verify_formal_identity(kmy_identity(Index{1, 2}), PrimeRange(2, 1000)).ok());
    CHECK(verify_formal_identity(kmy_identity(Index{1}), PrimeRange(2, 200)).ok());
}

TEST_CASE("expanding products") {
    ProductSum ps;
    ps.terms.push_back({1, {ZetaAtom{Index{1}, ColorMap::bracket(1, 1, 0)}, ZetaAtom{Index{1}, ColorMap::bracket(1, 1, 0)}}});
    CHECK(expand(ps) == stuffle_product(plain_term(Index{1}), plain_term(Index{1})));
    const auto mixed = expand(decompose_level_N(Index{2, 1}, 2));
    CHECK(mixed.level() == 2);
    for (u64 p : sieve_primes(7, 200)) {
        PrimeContext ctx(p);
        REQUIRE(eval_sum(ctx, mixed) == zeta_p(ctx, Index{2, 1}));
    }
    ProductSum with_log;
    with_log.terms.push_back({1, {LogAtom{2}}});
    CHECK_THROWS_AS(expand(with_log), Error);
}

TEST_CASE("evaluation skips") {
    PrimeContext c3(3), c7(7);
    const ProductSum half(FormalSum(1, {plain_term(Index{1}, Rational(1, 7))}));
    CHECK(evaluate(c7, half).skip_reason == skip::kDenominator);
    CHECK(evaluate(c3, ProductSum(bracket_term(Index{1}, 6, 1))).skip_reason == skip::kLevelFactor);
    CHECK(evaluate(c7, ProductSum(plain_term(Index{2, 3}))).skip_reason == skip::kWeightBound);
}

TEST_CASE("j-sum lemma") {
    CHECK(evaluate_at(jsum_check(Index{1}, 2, 0), 5).lhs == 4);
    CHECK(evaluate_at(jsum_check(Index{1}, 2, 0), 5).rhs == 4);
    CHECK(verify_lemma_jsum(Index{2}, 3, 1, PrimeRange(5, 1000)).ok());
    const auto e = evaluate_at(jsum_check(Index{}, 4, 3), 7);
    CHECK(e.lhs == 1);
    CHECK(e.rhs == 1);
}

TEST_CASE("built-in catalogue") {
    const auto& cat = builtin_catalogue();
    CHECK(cat.size() >= 10);
    for (const auto& id : cat) CHECK_MESSAGE(verify_formal_identity(id, PrimeRange(2, 2000)).ok(), id.id);
    const auto r = verify_formal_identity(find_identity(cat, "example-relation"), PrimeRange(2, 100));
    for (const auto& s : r.skipped) CHECK(s.p <= 8);
    CHECK_THROWS_AS(find_identity(cat, "nope"), Error);
}

TEST_CASE("catalogue parsing") {
    const auto doc = nlohmann::json::parse(R"({
      "schema": "fmzv-identities/1",
      "identities": [
        {"id": "wrong", "level": 1, "lhs": [{"index": "1,2"}], "rhs": [{"factors": [{"frakz": 3}]}]},
        {"id": "table", "level": 3,
         "lhs": [{"index": [1], "color": {"1": [1], "2": "box"}}],
         "rhs": [{"coeff": 1, "index": "1", "color": {"1": [1]}}]}
      ]})");
    const auto cat = parse_catalogue(doc);
    REQUIRE(cat.size() == 2);
    const auto wrong = verify_formal_identity(cat[0], PrimeRange(2, 50));
    CHECK_FALSE(wrong.ok());
    REQUIRE(!wrong.failed.empty());
    CHECK(wrong.failed[0].p == 7);
    CHECK(wrong.failed[0].lhs == 3);
    CHECK(wrong.failed[0].rhs == 1);
    CHECK(verify_formal_identity(cat[1], PrimeRange(2, 200)).ok());
    CHECK_THROWS_AS(parse_catalogue(nlohmann::json::parse(R"({"schema": "other", "identities": []})")), Error);
    CHECK_THROWS_AS(parse_color(nlohmann::json("bracket:x"), 3, 1), Error);
    CHECK_THROWS_AS(parse_color(nlohmann::json("bracket:4"), 3, 1), Error);
}
