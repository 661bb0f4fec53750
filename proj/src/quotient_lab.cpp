#include "fmzv/quotient_lab.hpp"

#include <cmath>
#include <string>

namespace fmzv {

u64 fermat_quotient_value(u64 N, u64 p) {
    const SquareResidue r = pow_mod_p2(N, p - 1, p);
    // r.value = 1 + p q (mod p^2)
    return ((r.value + r.modulus() - 1) % r.modulus()) / p;
}

Residue fermat_quotient(u64 N, u64 p) { return Residue(fermat_quotient_value(N, p), p); }

QuotientRecord quotient_record(u64 N, u64 p) { return QuotientRecord{p, N, fermat_quotient(N, p)}; }

bool is_wieferich_base(u64 N, u64 p) { return pow_mod_p2(N, p - 1, p).value == 1; }

u64 ell_p(u64 p) {
    if (p < 3 || p % 2 == 0) throw Error(Errc::InvalidArgument, "ell_p is defined here for odd primes");
    for (u64 N = 2; N < p; ++N) {
        if (fermat_quotient_value(N, p) != 0) return N;
    }
    throw Error(Errc::ScanExhausted, "q_p(N) = 0 for every 2 <= N < p at p = " + std::to_string(p));
}

double lenstra_bound(u64 p) {
    const double l = std::log(static_cast<double>(p));
    return 4.0 * l * l;
}

LenstraRow check_lenstra_bound(u64 p) {
    LenstraRow row;
    row.p = p;
    row.bound = lenstra_bound(p);
    try {
        row.ell = ell_p(p);
    } catch (const Error& e) {
        if (e.code() != Errc::ScanExhausted) throw;
        row.ell = p;
    }
    row.below_p = row.ell < p;
    row.within_bound = static_cast<double>(row.ell) <= row.bound;
    return row;
}

std::vector<u64> wieferich_intersection(u64 M, const PrimeRange& range) {
    if (M < 2) throw Error(Errc::InvalidArgument, "intersection needs M >= 2");
    std::vector<u64> out;
    for (u64 p : sieve_primes(range)) {
        if (p < 3) continue;
        if (ell_p(p) > M) out.push_back(p);
    }
    return out;
}

std::vector<u64> wieferich_members(u64 N, const PrimeRange& range) {
    std::vector<u64> out;
    for (u64 p : sieve_primes(range)) {
        if (N % p == 0) continue;
        if (is_wieferich_base(N, p)) out.push_back(p);
    }
    return out;
}

namespace {

u64 bracket_zeta1(PrimeContext& ctx, unsigned N, unsigned j) {
    return zeta_p_colormap(ctx, Index{1}, ColorMap::bracket(N, 1, j));
}

} // namespace

std::optional<LevelWitness> nonzero_witness_level(unsigned N, unsigned k, u64 bound) {
    if (N < 2) throw Error(Errc::InvalidArgument, "level witness needs N >= 2");
    if (k == 0) throw Error(Errc::InvalidWeight, "weight must be positive");
    for (u64 p : sieve_primes(3, bound)) {
        if (N % p == 0) continue;
        const u64 q = fermat_quotient_value(N, p);
        if (q == 0) continue;
        PrimeContext ctx(p);
        for (unsigned j = 1; j < N; ++j) {
            const u64 v = bracket_zeta1(ctx, N, j);
            if (v != 0) return LevelWitness{p, q, j, v, ctx.pow(v, k)};
        }
        throw Error(Errc::MethodDisagreement, "q_p(N) != 0 but every zeta^[j](1) vanishes at p = " + std::to_string(p));
    }
    return std::nullopt;
}

// ---- checks --------------------------------------------------------------

namespace {

std::string with_n(const char* name, u64 N) { return std::string(name) + "(N=" + std::to_string(N) + ")"; }

std::int64_t as_row(u64 v) { return static_cast<std::int64_t>(v); }

} // namespace

Check eisenstein_check() {
    Check c;
    c.id = "eisenstein";
    c.declared_skips = {skip::kEvenPrime};
    c.eval = [](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        const u64 lhs = ctx.mul(2, fermat_quotient_value(2, p));
        const u64 rhs = ctx.neg(s_pk(ctx, 0, 2, 1));
        return PrimeOutcome::compare(p, lhs, rhs);
    };
    return c;
}

Check sdi_check(unsigned N) {
    if (N == 0) throw Error(Errc::InvalidArgument, "SDI needs N >= 1");
    Check c;
    c.id = with_n("sdi", N);
    c.declared_skips = {skip::kEvenPrime, skip::kLevelFactor};
    c.eval = [N](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        if (N % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        const u64 lhs = ctx.mul((N + 1) % p, fermat_quotient_value(2, p));
        u64 s = 0;
        for (unsigned j = 0; 2 * j < N; ++j) s = ctx.add(s, s_pk(ctx, 2 * j, 2 * N, 1));
        return PrimeOutcome::compare(p, lhs, ctx.neg(s));
    };
    return c;
}

Check lerch_check(unsigned N) {
    if (N < 2) throw Error(Errc::InvalidArgument, "Lerch needs N >= 2");
    Check c;
    c.id = with_n("lerch", N);
    c.declared_skips = {skip::kEvenPrime, skip::kLevelFactor};
    c.eval = [N](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        if (N % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        const u64 lhs = ctx.mul(N % p, fermat_quotient_value(N, p));
        u64 rhs = 0;
        for (unsigned j = 1; j < N; ++j) rhs = ctx.add(rhs, ctx.mul(j % p, s_pk(ctx, j, N, 1)));
        return PrimeOutcome::compare(p, lhs, rhs);
    };
    return c;
}

Check a_sdi_check(unsigned N) {
    if (N == 0) throw Error(Errc::InvalidArgument, "A-SDI needs N >= 1");
    Check c;
    c.id = with_n("a-sdi", N);
    c.declared_skips = {skip::kEvenPrime, skip::kLevelFactor, skip::kDenominator};
    c.eval = [N](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        if (N % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        if ((N + 1) % p == 0) return PrimeOutcome::skipped(p, skip::kDenominator);
        const u64 lhs = fermat_quotient_value(2, p);
        u64 s = 0;
        for (unsigned j = 0; 2 * j < N; ++j) s = ctx.add(s, bracket_zeta1(ctx, 2 * N, 2 * j));
        const u64 coeff = ctx.mul((2 * u64{N}) % p, ctx.inv((N + 1) % p));
        return PrimeOutcome::compare(p, lhs, ctx.neg(ctx.mul(coeff, s)));
    };
    return c;
}

Check lerch_log_check(unsigned N) {
    if (N < 2) throw Error(Errc::InvalidArgument, "Lerch log form needs N >= 2");
    Check c;
    c.id = with_n("lerch-log", N);
    c.declared_skips = {skip::kEvenPrime, skip::kLevelFactor};
    c.eval = [N](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        if (N % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        const u64 lhs = fermat_quotient_value(N, p);
        u64 rhs = 0;
        for (unsigned j = 1; j < N; ++j) rhs = ctx.add(rhs, ctx.mul(j % p, bracket_zeta1(ctx, N, j)));
        return PrimeOutcome::compare(p, lhs, rhs);
    };
    return c;
}

Check log_additivity_check(u64 N, u64 M) {
    if (N == 0 || M == 0) throw Error(Errc::InvalidArgument, "bases must be positive");
    Check c;
    c.id = "log-additivity(N=" + std::to_string(N) + ",M=" + std::to_string(M) + ")";
    c.declared_skips = {skip::kEvenPrime, skip::kBaseFactor};
    c.eval = [N, M](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        if (N % p == 0 || M % p == 0) return PrimeOutcome::skipped(p, skip::kBaseFactor);
        const u64 nm = mul_mod(N % (p * p), M % (p * p), p * p);
        const u64 lhs = fermat_quotient_value(nm, p);
        const u64 rhs = ctx.add(fermat_quotient_value(N, p), fermat_quotient_value(M, p));
        return PrimeOutcome::compare(p, lhs, rhs);
    };
    return c;
}

Check wieferich_check(u64 base) {
    if (base < 2) throw Error(Errc::InvalidArgument, "Wieferich base must be >= 2");
    Check c;
    c.id = "wieferich(base=" + std::to_string(base) + ")";
    c.declared_skips = {skip::kBaseFactor};
    c.columns = {"base", "p"};
    c.eval = [base](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (base % p == 0) return PrimeOutcome::skipped(p, skip::kBaseFactor);
        const bool member = is_wieferich_base(base, p);
        // q_p(N) = 0 mod p and p^2 | N^{p-1} - 1 are computed independently
        const bool q_zero = fermat_quotient_value(base, p) == 0;
        PrimeOutcome o = PrimeOutcome::compare(p, member ? 1 : 0, q_zero ? 1 : 0);
        if (member) o.rows.push_back({as_row(base), as_row(p)});
        return o;
    };
    return c;
}

Check ell_check() {
    Check c;
    c.id = "ell";
    c.declared_skips = {skip::kEvenPrime};
    c.columns = {"p", "ell_p"};
    c.eval = [](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        const LenstraRow row = check_lenstra_bound(p);
        PrimeOutcome o = row.below_p ? PrimeOutcome::pass(p) : PrimeOutcome::compare(p, row.ell, p - 1);
        o.rows.push_back({as_row(p), as_row(row.ell)});
        return o;
    };
    return c;
}

Check lenstra_check() {
    Check c;
    c.id = "lenstra";
    c.declared_skips = {skip::kEvenPrime};
    c.columns = {"p", "ell_p", "bound_floor"};
    c.eval = [](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        const LenstraRow row = check_lenstra_bound(p);
        const u64 floor_bound = static_cast<u64>(std::floor(row.bound));
        PrimeOutcome o = row.ok() ? PrimeOutcome::pass(p)
                                  : PrimeOutcome::compare(p, row.ell, std::min<u64>(floor_bound, p - 1));
        o.rows.push_back({as_row(p), as_row(row.ell), as_row(floor_bound)});
        return o;
    };
    return c;
}

Check intersection_check(u64 M) {
    if (M < 2) throw Error(Errc::InvalidArgument, "intersection needs M >= 2");
    Check c;
    c.id = "intersection(M=" + std::to_string(M) + ")";
    c.declared_skips = {skip::kEvenPrime};
    c.columns = {"p", "ell_p"};
    c.eval = [M](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        const u64 ell = ell_p(p);
        PrimeOutcome o = PrimeOutcome::pass(p);
        if (ell > M) {
            // ell_p > M must mean p lies in every W(N), N <= M
            for (u64 N = 2; N <= M; ++N) {
                if (N % p != 0 && !is_wieferich_base(N, p)) return PrimeOutcome::compare(p, ell, N);
            }
            o.rows.push_back({as_row(p), as_row(ell)});
        }
        return o;
    };
    return c;
}

CongruenceReport verify_eisenstein(const PrimeRange& range, const RunOptions& opt) {
    return run_check(eisenstein_check(), range, opt);
}
CongruenceReport verify_sdi(unsigned N, const PrimeRange& range, const RunOptions& opt) {
    return run_check(sdi_check(N), range, opt);
}
CongruenceReport verify_lerch(unsigned N, const PrimeRange& range, const RunOptions& opt) {
    return run_check(lerch_check(N), range, opt);
}
CongruenceReport verify_a_sdi(unsigned N, const PrimeRange& range, const RunOptions& opt) {
    return run_check(a_sdi_check(N), range, opt);
}
CongruenceReport verify_lerch_log_form(unsigned N, const PrimeRange& range, const RunOptions& opt) {
    return run_check(lerch_log_check(N), range, opt);
}
CongruenceReport verify_log_additivity(u64 N, u64 M, const PrimeRange& range, const RunOptions& opt) {
    return run_check(log_additivity_check(N, M), range, opt);
}

} // namespace fmzv
