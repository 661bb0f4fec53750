#include "fmzv/bernoulli_lab.hpp"

#include <mutex>
#include <string>

namespace fmzv {

const char* method_name(BernoulliMethod m) noexcept {
    switch (m) {
    case BernoulliMethod::Auto: return "auto";
    case BernoulliMethod::HalfSum: return "half-sum";
    case BernoulliMethod::Series: return "series";
    case BernoulliMethod::Exact: return "exact-rational";
    case BernoulliMethod::Voronoi: return "voronoi";
    }
    return "?";
}

u64 BernoulliTable::at(unsigned n) const {
    if (n % 2 != 0 || n > max_index) {
        throw Error(Errc::InvalidArgument, "B_" + std::to_string(n) + " not in table for p = " + std::to_string(p));
    }
    return values[n / 2];
}

// ---- exact ---------------------------------------------------------------

const std::vector<mpq_class>& bernoulli_exact(unsigned n_max) {
    static std::mutex mu;
    static std::vector<mpq_class> table{mpq_class(1)};
    std::lock_guard lock(mu);
    // B_n = -1/(n+1) sum_{j<n} C(n+1, j) B_j, with B_1 = -1/2 during the recurrence
    while (table.size() <= n_max) {
        const unsigned n = static_cast<unsigned>(table.size());
        if (n >= 3 && n % 2 == 1) {
            table.emplace_back(0);
            continue;
        }
        mpz_class binom = 1; // C(n+1, 0)
        mpq_class acc = 0;
        for (unsigned j = 0; j < n; ++j) {
            mpq_class bj = (j == 1) ? mpq_class(-1, 2) : table[j];
            acc += bj * binom;
            binom = binom * (n + 1 - j) / (j + 1);
        }
        mpq_class b = -acc / (n + 1);
        b.canonicalize();
        table.push_back(b);
    }
    // table[1] is stored as +1/2
    if (table.size() > 1 && table[1] != mpq_class(1, 2)) table[1] = mpq_class(1, 2);
    return table;
}

namespace {

u64 mpz_mod(const mpz_class& z, u64 p) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(p));
    return r.get_ui();
}

void require_bernoulli_args(unsigned n, u64 p) {
    if (p < 5) throw Error(Errc::InvalidArgument, "Bernoulli numbers mod p need p >= 5");
    if (n < 2 || n % 2 != 0) throw Error(Errc::InvalidArgument, "B_n mod p is only offered for even n >= 2");
    if (n % (p - 1) == 0) {
        throw Error(Errc::PoleAtVonStaudtClausen,
                    "p - 1 = " + std::to_string(p - 1) + " divides n = " + std::to_string(n));
    }
}

} // namespace

u64 bernoulli_exact_mod(unsigned n, u64 p) {
    require_bernoulli_args(n, p);
    if (n > kExactMaxIndex) throw Error(Errc::ScanCapExceeded, "exact Bernoulli numbers are limited to n <= 200");
    const mpq_class& b = bernoulli_exact(n)[n];
    const u64 num = mpz_mod(b.get_num(), p);
    const u64 den = mpz_mod(b.get_den(), p);
    return mul_mod(num, inv_mod(den, p), p);
}

// ---- half-sum ------------------------------------------------------------

bool half_sum_degenerate(u64 p, unsigned k) { return pow_mod(2, k - 1, p) == 1; }

u64 bernoulli_half_sum(PrimeContext& ctx, unsigned k) {
    const u64 p = ctx.p();
    if (p < 5 || k < 3 || k % 2 == 0 || k > p - 2) {
        throw Error(Errc::InvalidArgument, "half-sum formula needs odd 3 <= k <= p-2, p >= 5");
    }
    if (half_sum_degenerate(p, k)) {
        throw Error(Errc::InvalidArgument, "p divides 2^(k-1) - 1; half-sum formula degenerates");
    }
    const u64 s = ctx.inverse_power_prefix(k)[(p - 1) / 2];
    const u64 denom = ctx.sub(ctx.pow(2, k), 2);
    return ctx.mul(ctx.mul(ctx.neg(k % p), s), ctx.inv(denom));
}

// ---- series --------------------------------------------------------------

BernoulliTable bernoulli_series_table(u64 p, u64 cap) {
    if (p < 5) throw Error(Errc::InvalidArgument, "series table needs p >= 5");
    if (p > cap) {
        throw Error(Errc::ScanCapExceeded, "series inversion capped at p <= " + std::to_string(cap));
    }
    if (p >= (u64{1} << 31)) throw Error(Errc::InvalidArgument, "series inversion needs p < 2^31");
    // (t/2) coth(t/2) = cosh(t/2) / (sinh(t/2) / (t/2)) = sum B_{2n} t^{2n} / (2n)!
    // In x = t^2: numerator c_n = 4^-n / (2n)!, denominator a_n = 4^-n / (2n+1)!.
    const u64 n_max = (p - 3) / 2;
    std::vector<u64> fact(2 * n_max + 2);
    fact[0] = 1;
    for (u64 i = 1; i < fact.size(); ++i) fact[i] = mul_mod(fact[i - 1], i, p);
    std::vector<u64> inv_fact = batch_inv(std::span<const u64>(fact), p);
    const u64 inv4 = inv_mod(4, p);

    std::vector<u64> a(n_max + 1), c(n_max + 1), d(n_max + 1);
    u64 q = 1;
    for (u64 n = 0; n <= n_max; ++n) {
        c[n] = mul_mod(q, inv_fact[2 * n], p);
        a[n] = mul_mod(q, inv_fact[2 * n + 1], p);
        q = mul_mod(q, inv4, p);
    }
    constexpr u64 kFlush = u64{1} << 62;
    for (u64 n = 0; n <= n_max; ++n) {
        u64 acc = 0;
        for (u64 i = 1; i <= n; ++i) {
            acc += a[i] * d[n - i];
            if (acc >= kFlush) acc %= p;
        }
        d[n] = sub_mod(c[n], acc % p, p);
    }

    BernoulliTable t;
    t.p = p;
    t.method = BernoulliMethod::Series;
    t.max_index = static_cast<unsigned>(2 * n_max);
    t.values.resize(n_max + 1);
    for (u64 n = 0; n <= n_max; ++n) t.values[n] = mul_mod(d[n], fact[2 * n], p);
    return t;
}

// ---- Voronoi -------------------------------------------------------------

u64 bernoulli_voronoi(PrimeContext& ctx, unsigned n, u64 a) {
    const u64 p = ctx.p();
    require_bernoulli_args(n, p);
    const u64 an = ctx.pow(a % p, n);
    if (a % p == 0 || an == 1) throw Error(Errc::InvalidArgument, "Voronoi base must satisfy a^n != 1 mod p");
    // (a^n - 1) B_n / n = a^{n-1} sum_{j=1}^{p-1} j^{n-1} floor(j a / p)
    u64 s = 0;
    const u64 e = (n - 1) % (p - 1);
    for (u64 j = 1; j < p; ++j) {
        const u64 fl = (j * a / p) % p;
        if (fl == 0) continue;
        s = ctx.add(s, ctx.mul(ctx.pow(j, e), fl));
    }
    const u64 rhs = ctx.mul(ctx.pow(a % p, n - 1), s);
    return ctx.mul(ctx.mul(rhs, n % p), ctx.inv(ctx.sub(an, 1)));
}

namespace {

u64 voronoi_auto(PrimeContext& ctx, unsigned n) {
    for (u64 a = 3; a < ctx.p(); ++a)
        if (ctx.pow(a, n) != 1) return bernoulli_voronoi(ctx, n, a);
    throw Error(Errc::InvalidArgument, "no Voronoi base available");
}

} // namespace

// ---- dispatch ------------------------------------------------------------

u64 bernoulli_mod_p(PrimeContext& ctx, unsigned n, BernoulliMethod method, u64 cap) {
    const u64 p = ctx.p();
    require_bernoulli_args(n, p);
    if (n > p - 3) {
        // Kummer: B_n / n = B_m / m (mod p) for n = m (mod p-1)
        if (n % p == 0) return 0;
        const unsigned m = static_cast<unsigned>(n % (p - 1));
        const u64 bm = bernoulli_mod_p(ctx, m, method, cap);
        return ctx.mul(ctx.mul(bm, n % p), ctx.inv(m));
    }
    const unsigned k = static_cast<unsigned>(p - n);
    switch (method) {
    case BernoulliMethod::HalfSum: return bernoulli_half_sum(ctx, k);
    case BernoulliMethod::Series: return bernoulli_series_table(p, cap).at(n);
    case BernoulliMethod::Exact: return bernoulli_exact_mod(n, p);
    case BernoulliMethod::Voronoi: return voronoi_auto(ctx, n);
    case BernoulliMethod::Auto: break;
    }
    if (!half_sum_degenerate(p, k)) return bernoulli_half_sum(ctx, k);
    if (p <= cap) return bernoulli_series_table(p, cap).at(n);
    return voronoi_auto(ctx, n);
}

Residue bernoulli_mod_p(unsigned n, u64 p) {
    PrimeContext ctx(p);
    return Residue(bernoulli_mod_p(ctx, n), p);
}

u64 frak_z(PrimeContext& ctx, unsigned k) {
    const u64 p = ctx.p();
    if (p < 5 || k < 2 || k > p - 2) {
        throw Error(Errc::InvalidArgument, "frak Z(k) at p needs p >= 5 and 2 <= k <= p-2");
    }
    if (k % 2 == 0) return 0; // B_{p-k} with p-k odd and >= 3
    return ctx.mul(bernoulli_mod_p(ctx, static_cast<unsigned>(p - k)), ctx.inv(k));
}

Residue frak_z(unsigned k, u64 p) {
    PrimeContext ctx(p);
    return Residue(frak_z(ctx, k), p);
}

// ---- irregularity --------------------------------------------------------

Irregularity irregularity_index(u64 p, u64 cap) {
    Irregularity out;
    out.p = p;
    if (p < 5) return out;
    const BernoulliTable t = bernoulli_series_table(p, cap);
    PrimeContext ctx(p);
    for (unsigned n = 2; n + 3 <= p; n += 2) {
        if (t.at(n) != 0) continue;
        IrregularPair pair{p, n, 1};
        const unsigned k = static_cast<unsigned>(p - n);
        u64 second;
        if (!half_sum_degenerate(p, k)) {
            second = bernoulli_half_sum(ctx, k);
        } else if (n <= kExactMaxIndex) {
            second = bernoulli_exact_mod(n, p);
        } else {
            second = voronoi_auto(ctx, n);
        }
        if (second != 0) {
            throw Error(Errc::MethodDisagreement, "methods disagree on B_" + std::to_string(n) + " mod " +
                                                   std::to_string(p));
        }
        pair.confirmations = 2;
        out.pairs.push_back(pair);
    }
    return out;
}

bool is_regular(u64 p, u64 cap) {
    if (p < 5) throw Error(Errc::InvalidArgument, "regularity is defined here for p >= 5");
    return irregularity_index(p, cap).index() == 0;
}

unsigned eth_p(PrimeContext& ctx) {
    const u64 p = ctx.p();
    if (p < 5) throw Error(Errc::InvalidArgument, "eth_p needs p >= 5");
    for (unsigned k = 3; k + 2 <= p; k += 2) {
        if (bernoulli_mod_p(ctx, static_cast<unsigned>(p - k)) != 0) return k;
    }
    throw Error(Errc::ScanExhausted, "every B_{p-k}, odd 3 <= k <= p-2, vanishes mod " + std::to_string(p));
}

unsigned eth_p(u64 p) {
    PrimeContext ctx(p);
    return eth_p(ctx);
}

EthBound check_eth_bound(u64 p, u64 cap) {
    if (p < 11) throw Error(Errc::InvalidArgument, "the eth_p case bound is stated for p >= 11");
    EthBound b;
    b.p = p;
    b.eth = eth_p(p);
    b.irregularity = irregularity_index(p, cap).index();
    b.case_bound = static_cast<unsigned>(p % 4 == 1 ? (p - 3) / 2 : (p - 5) / 2);
    b.trivial_ok = b.eth <= 2 * b.irregularity + 3;
    b.case_ok = b.eth <= b.case_bound;
    return b;
}

HalfIndexRow half_index_row(PrimeContext& ctx) {
    const u64 p = ctx.p();
    if (p < 5) throw Error(Errc::InvalidArgument, "half-index scan needs p >= 5");
    HalfIndexRow row{p, static_cast<unsigned>(p % 4), false};
    const unsigned n = static_cast<unsigned>(p % 4 == 3 ? (p + 1) / 2 : (p - 1) / 2);
    row.vanishes = bernoulli_mod_p(ctx, n) == 0;
    return row;
}

std::optional<WeightWitness> nonzero_witness_weight(unsigned k, u64 bound) {
    if (k == 1 || k == 2 || k == 4 || k == 0) {
        throw Error(Errc::InvalidWeight, "weight " + std::to_string(k) + " spans only zero");
    }
    std::vector<std::vector<unsigned>> splits;
    if (k % 2 == 1) {
        splits.push_back({k});
    } else {
        for (unsigned k1 = 3; k1 <= k / 2; k1 += 2) splits.push_back({k1, k - k1});
    }
    for (u64 p : sieve_primes(5, bound)) {
        PrimeContext ctx(p);
        for (const auto& parts : splits) {
            unsigned top = 0;
            for (unsigned part : parts) top = std::max(top, part);
            if (p <= top + 2) continue;
            u64 v = 1;
            for (unsigned part : parts) v = ctx.mul(v, frak_z(ctx, part));
            if (v != 0) return WeightWitness{p, parts, v};
        }
    }
    return std::nullopt;
}

// ---- checks --------------------------------------------------------------

namespace {

u64 binomial_mod(unsigned n, unsigned r, PrimeContext& ctx) {
    u64 num = 1, den = 1;
    for (unsigned i = 0; i < r; ++i) {
        num = ctx.mul(num, (n - i) % ctx.p());
        den = ctx.mul(den, (i + 1) % ctx.p());
    }
    return ctx.mul(num, ctx.inv(den));
}

} // namespace

Check vhz_check(unsigned k1, unsigned k2) {
    if (k1 == 0 || k2 == 0) throw Error(Errc::InvalidArgument, "VHZ needs k1, k2 >= 1");
    Check c;
    c.id = "vhz(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
    c.declared_skips = {skip::kWeightBound};
    c.eval = [k1, k2](PrimeContext& ctx) {
        const u64 p = ctx.p();
        const unsigned k = k1 + k2;
        if (p <= k + 2) return PrimeOutcome::skipped(p, skip::kWeightBound);
        const u64 lhs = zeta_p(ctx, Index{k1, k2});
        u64 rhs = ctx.mul(binomial_mod(k, k1, ctx), frak_z(ctx, k));
        if (k2 % 2 == 1) rhs = ctx.neg(rhs);
        return PrimeOutcome::compare(p, lhs, rhs);
    };
    return c;
}

Check level12_check(unsigned k) {
    if (k < 3 || k % 2 == 0) throw Error(Errc::InvalidArgument, "level-12 identities need odd k >= 3");
    Check c;
    c.id = "level12(k=" + std::to_string(k) + ")";
    c.declared_skips = {skip::kLevelFactor, skip::kWeightBound};
    const ColorMap two = ColorMap::bracket(12, 1, 2);
    const ColorMap three = ColorMap::bracket(12, 1, 3);
    c.eval = [k, two, three](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2 || p == 3) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        if (p <= k + 2) return PrimeOutcome::skipped(p, skip::kWeightBound);
        const Index idx{k};
        const u64 z = frak_z(ctx, k);
        auto ipow = [&](u64 a) { return ctx.inv(ctx.pow(a, k)); };
        const u64 lhs2 = ctx.mul(2, zeta_p_colormap(ctx, idx, two));
        const u64 rhs2 = ctx.mul(ctx.sub(ctx.add(ctx.sub(ctx.sub(ipow(2), ipow(3)), ipow(4)), ipow(12)), 0), z);
        const u64 lhs3 = ctx.mul(2, zeta_p_colormap(ctx, idx, three));
        const u64 rhs3 = ctx.mul(ctx.add(ctx.sub(ctx.sub(ipow(3), ipow(4)), ipow(6)), ipow(12)), z);
        if (lhs2 != rhs2) return PrimeOutcome::compare(p, lhs2, rhs2);
        return PrimeOutcome::compare(p, lhs3, rhs3);
    };
    return c;
}

Check vandiver_check(unsigned n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "power-sum congruences need n >= 1");
    Check c;
    c.id = "vandiver(n=" + std::to_string(n) + ")";
    c.declared_skips = {skip::kSmallPrime, skip::kVonStaudt, skip::kDenominator};
    c.eval = [n](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        if ((2 * u64{n}) % (p - 1) == 0) return PrimeOutcome::skipped(p, skip::kVonStaudt);
        if ((4 * u64{n}) % p == 0) return PrimeOutcome::skipped(p, skip::kDenominator);
        // a^{p-2n} for possibly negative p-2n, via Fermat
        const std::int64_t e_signed = static_cast<std::int64_t>(p) - 2 * static_cast<std::int64_t>(n);
        const u64 e = static_cast<u64>(((e_signed % static_cast<std::int64_t>(p - 1)) + static_cast<std::int64_t>(p - 1)) %
                                       static_cast<std::int64_t>(p - 1));
        auto pw = [&](u64 a) { return ctx.pow(a, e); };
        const u64 coeff = ctx.mul(bernoulli_mod_p(ctx, 2 * n), ctx.inv((4 * u64{n}) % p));
        const u64 lhs1 = ctx.mul(ctx.sub(ctx.sub(ctx.add(pw(3), pw(4)), pw(6)), 1), coeff);
        const u64 lhs2 = ctx.mul(ctx.sub(ctx.sub(ctx.add(pw(2), pw(3)), pw(4)), 1), coeff);
        const u64 odd_e = (2 * u64{n} - 1) % (p - 1);
        auto power_sum = [&](unsigned j) {
            auto [first, last] = interval_bounds(j, 12, p);
            u64 s = 0;
            for (u64 m = first; m <= last; ++m) s = ctx.add(s, ctx.pow(m, odd_e));
            return s;
        };
        const u64 rhs1 = power_sum(2); // p/6 < m < p/4
        const u64 rhs2 = power_sum(3); // p/4 < m < p/3
        if (lhs1 != rhs1) return PrimeOutcome::compare(p, lhs1, rhs1);
        return PrimeOutcome::compare(p, lhs2, rhs2);
    };
    return c;
}

Check half_index_check() {
    Check c;
    c.id = "half-index";
    c.declared_skips = {skip::kSmallPrime};
    c.columns = {"p", "p_mod_4", "vanishes"};
    c.eval = [](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        const HalfIndexRow row = half_index_row(ctx);
        // only the p = 3 mod 4 branch is a theorem; p = 1 mod 4 is observational
        PrimeOutcome o = (row.p_mod_4 == 3 && row.vanishes) ? PrimeOutcome::compare(p, 0, 1) : PrimeOutcome::pass(p);
        o.rows.push_back({static_cast<std::int64_t>(p), row.p_mod_4, row.vanishes ? 1 : 0});
        return o;
    };
    return c;
}

Check eth_check() {
    Check c;
    c.id = "eth";
    c.declared_skips = {skip::kSmallPrime};
    c.columns = {"p", "eth"};
    c.eval = [](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        try {
            PrimeOutcome o = PrimeOutcome::pass(p);
            o.rows.push_back({static_cast<std::int64_t>(p), eth_p(ctx)});
            return o;
        } catch (const Error& e) {
            if (e.code() != Errc::ScanExhausted) throw;
            return PrimeOutcome::compare(p, 0, 1);
        }
    };
    return c;
}

Check eth_bound_check(u64 cap) {
    Check c;
    c.id = "eth-bound";
    c.declared_skips = {skip::kSmallPrime, skip::kSeriesCap};
    c.columns = {"p", "eth", "irregularity", "case_bound"};
    c.eval = [cap](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 11) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        if (p > cap) return PrimeOutcome::skipped(p, skip::kSeriesCap);
        const EthBound b = check_eth_bound(p, cap);
        // witness: eth against the tighter of the two bounds
        const u64 bound = std::min<u64>(b.case_bound, 2 * b.irregularity + 3);
        PrimeOutcome o = b.ok() ? PrimeOutcome::pass(p) : PrimeOutcome::compare(p, b.eth, bound);
        o.rows.push_back({static_cast<std::int64_t>(p), b.eth, static_cast<std::int64_t>(b.irregularity), b.case_bound});
        return o;
    };
    return c;
}

Check irregular_pairs_check(u64 cap) {
    Check c;
    c.id = "irregular-pairs";
    c.declared_skips = {skip::kSmallPrime, skip::kSeriesCap};
    c.columns = {"p", "n"};
    c.eval = [cap](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        if (p > cap) return PrimeOutcome::skipped(p, skip::kSeriesCap);
        PrimeOutcome o = PrimeOutcome::pass(p);
        for (const auto& pair : irregularity_index(p, cap).pairs)
            o.rows.push_back({static_cast<std::int64_t>(p), pair.n});
        return o;
    };
    return c;
}

CongruenceReport verify_vhz(unsigned k1, unsigned k2, const PrimeRange& range, const RunOptions& opt) {
    return run_check(vhz_check(k1, k2), range, opt);
}

CongruenceReport verify_level12(unsigned k, const PrimeRange& range, const RunOptions& opt) {
    return run_check(level12_check(k), range, opt);
}

CongruenceReport verify_vandiver_power_sums(unsigned n, const PrimeRange& range, const RunOptions& opt) {
    return run_check(vandiver_check(n), range, opt);
}

CongruenceReport half_index_scan(const PrimeRange& range, const RunOptions& opt) {
    return run_check(half_index_check(), range, opt);
}

} // namespace fmzv
