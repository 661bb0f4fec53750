#pragma once

// Fermat quotients q_p(N) = (N^{p-1} - 1)/p mod p, the harmonic-sum
// identities they satisfy, Wieferich sets and the statistic ell_p.

#include "fmzv/driver.hpp"
#include "fmzv/harmonic_sums.hpp"
#include "fmzv/report.hpp"

#include <optional>
#include <vector>

namespace fmzv {

struct QuotientRecord {
    u64 p = 0;
    u64 N = 0;
    Residue q{0, 2};
};

/// q_p(N) mod p via N^{p-1} mod p^2. Throws SharedFactor if p | N.
u64 fermat_quotient_value(u64 N, u64 p);
Residue fermat_quotient(u64 N, u64 p);
QuotientRecord quotient_record(u64 N, u64 p);

/// p^2 | N^{p-1} - 1. Throws SharedFactor if p | N.
bool is_wieferich_base(u64 N, u64 p);

/// Least N >= 2 with q_p(N) != 0 mod p, for odd p. Throws ScanExhausted if N reaches p.
u64 ell_p(u64 p);

/// 4 (ln p)^2
double lenstra_bound(u64 p);

struct LenstraRow {
    u64 p = 0;
    u64 ell = 0;
    double bound = 0;
    bool below_p = false;
    bool within_bound = false;
    bool ok() const noexcept { return below_p && within_bound; }
};
LenstraRow check_lenstra_bound(u64 p);

/// Primes of the range in W(2) and ... and W(M), found by bucketing ell_p.
std::vector<u64> wieferich_intersection(u64 M, const PrimeRange& range);

/// Members of W(N) in the range, by direct mod-p^2 exponentiation.
std::vector<u64> wieferich_members(u64 N, const PrimeRange& range);

struct LevelWitness {
    u64 p = 0;
    u64 q = 0;     // q_p(N) mod p
    unsigned j = 0; // least j with zeta^{[j]}_{p,N}(1) != 0
    u64 value = 0;  // zeta^{[j]}_{p,N}(1)
    u64 power = 0;  // value^k
};

/// Least odd prime p <= bound, p not dividing N, with q_p(N) != 0.
std::optional<LevelWitness> nonzero_witness_level(unsigned N, unsigned k, u64 bound);

// ---- per-prime checks ----------------------------------------------------

Check eisenstein_check();
Check sdi_check(unsigned N);
Check lerch_check(unsigned N);
Check a_sdi_check(unsigned N);
Check lerch_log_check(unsigned N);
Check log_additivity_check(u64 N, u64 M);
Check wieferich_check(u64 base);
Check ell_check();
Check lenstra_check();
Check intersection_check(u64 M);

CongruenceReport verify_eisenstein(const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_sdi(unsigned N, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_lerch(unsigned N, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_a_sdi(unsigned N, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_lerch_log_form(unsigned N, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_log_additivity(u64 N, u64 M, const PrimeRange& range, const RunOptions& opt = {});

} // namespace fmzv
