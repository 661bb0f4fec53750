#pragma once

// Bernoulli numbers modulo p and the congruences built on them.
//
// Convention: B_n is defined by t e^t / (e^t - 1) = sum B_n t^n / n!, so
// B_1 = +1/2. Every congruence in this module only touches even indices,
// where this agrees with the t / (e^t - 1) convention.
//
// Three independent routes to B_n mod p:
//   half-sum  B_{p-k} = -k / (2^k - 2) * sum_{m=1}^{(p-1)/2} m^{-k}   (odd k >= 3)
//   series    invert (e^t - 1)/t, or rather its even part, mod p: all B_n, n <= p-3
//   exact     rational recurrence with GMP, reduced mod p (n <= 200)
// The half-sum route is O(p) and serves the scans; the series route is
// O(p^2) and capped; the exact route is the ground truth for small p.

#include "fmzv/driver.hpp"
#include "fmzv/harmonic_sums.hpp"
#include "fmzv/report.hpp"

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace fmzv {

inline constexpr u64 kSeriesCap = 3000;
inline constexpr unsigned kExactMaxIndex = 200;

enum class BernoulliMethod { Auto, HalfSum, Series, Exact, Voronoi };

const char* method_name(BernoulliMethod m) noexcept;

/// Residues B_n mod p for even n, all produced by one method.
struct BernoulliTable {
    u64 p = 0;
    BernoulliMethod method = BernoulliMethod::Series;
    /// values[n / 2] = B_n mod p for n = 0, 2, 4, ..., max_index.
    std::vector<u64> values;
    unsigned max_index = 0;

    u64 at(unsigned n) const;
};

/// Exact B_0..B_n_max (B_1 = +1/2). Cached; safe to call concurrently.
const std::vector<mpq_class>& bernoulli_exact(unsigned n_max);

/// B_n mod p from the exact rational value. Throws PoleAtVonStaudtClausen.
u64 bernoulli_exact_mod(unsigned n, u64 p);

/// B_{p-k} mod p by the half-sum formula. Throws InvalidArgument when k is
/// even or out of [3, p-2], or when p | 2^{k-1} - 1.
u64 bernoulli_half_sum(PrimeContext& ctx, unsigned k);
bool half_sum_degenerate(u64 p, unsigned k);

/// B_n for even n <= p-3 via one series inversion. Throws ScanCapExceeded above `cap`.
BernoulliTable bernoulli_series_table(u64 p, u64 cap = kSeriesCap);

/// B_n mod p by the Voronoi congruence with base a (a^n != 1 mod p required).
u64 bernoulli_voronoi(PrimeContext& ctx, unsigned n, u64 a);

/// B_n mod p for even n >= 2, p >= 5 with p-1 not dividing n. Indices n >= p-1
/// are reduced with Kummer's congruence B_n/n = B_m/m, m = n mod (p-1).
u64 bernoulli_mod_p(PrimeContext& ctx, unsigned n, BernoulliMethod method = BernoulliMethod::Auto,
                    u64 cap = kSeriesCap);
Residue bernoulli_mod_p(unsigned n, u64 p);

/// frak Z(k) at p: B_{p-k} / k mod p, for 2 <= k <= p-2 and p >= 5.
u64 frak_z(PrimeContext& ctx, unsigned k);
Residue frak_z(unsigned k, u64 p);

struct IrregularPair {
    u64 p = 0;
    unsigned n = 0;
    /// Number of independent methods that confirmed p | B_n.
    unsigned confirmations = 0;
    friend bool operator==(const IrregularPair& a, const IrregularPair& b) { return a.p == b.p && a.n == b.n; }
};

struct Irregularity {
    u64 p = 0;
    std::vector<IrregularPair> pairs;
    std::size_t index() const noexcept { return pairs.size(); }
};

/// i(p) and the irregular pairs of p (series scan, cross-checked per pair).
Irregularity irregularity_index(u64 p, u64 cap = kSeriesCap);
bool is_regular(u64 p, u64 cap = kSeriesCap);

/// Least odd k >= 3 with B_{p-k} != 0 mod p. Throws ScanExhausted.
unsigned eth_p(PrimeContext& ctx);
unsigned eth_p(u64 p);

struct EthBound {
    u64 p = 0;
    unsigned eth = 0;
    std::size_t irregularity = 0;
    unsigned case_bound = 0;
    bool trivial_ok = false; // eth <= 2 i(p) + 3
    bool case_ok = false;    // eth <= (p-3)/2 or (p-5)/2 by p mod 4
    bool ok() const noexcept { return trivial_ok && case_ok; }
};

EthBound check_eth_bound(u64 p, u64 cap = kSeriesCap);

struct HalfIndexRow {
    u64 p = 0;
    unsigned p_mod_4 = 0;
    bool vanishes = false;
};

/// B_{(p+1)/2} for p = 3 mod 4, B_{(p-1)/2} for p = 1 mod 4.
HalfIndexRow half_index_row(PrimeContext& ctx);

struct WeightWitness {
    u64 p = 0;
    std::vector<unsigned> parts; // (k) or (k1, k2)
    u64 value = 0;               // product of frak Z(parts) at p
};

/// Smallest prime p <= bound with a nonvanishing product of frak Z values
/// of total weight k. Throws InvalidWeight for k in {1, 2, 4}.
std::optional<WeightWitness> nonzero_witness_weight(unsigned k, u64 bound);

// ---- per-prime checks ----------------------------------------------------

Check vhz_check(unsigned k1, unsigned k2);
Check level12_check(unsigned k);
Check vandiver_check(unsigned n);
Check half_index_check();
Check eth_check();
Check eth_bound_check(u64 cap = kSeriesCap);
Check irregular_pairs_check(u64 cap = kSeriesCap);

CongruenceReport verify_vhz(unsigned k1, unsigned k2, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_level12(unsigned k, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport verify_vandiver_power_sums(unsigned n, const PrimeRange& range, const RunOptions& opt = {});
CongruenceReport half_index_scan(const PrimeRange& range, const RunOptions& opt = {});

} // namespace fmzv
