#include "fmzv/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fmzv {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::SharedFactor: return "SharedFactor";
    case Errc::LevelSharesFactor: return "LevelSharesFactor";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::PoleAtVonStaudtClausen: return "PoleAtVonStaudtClausen";
    case Errc::ScanExhausted: return "ScanExhausted";
    case Errc::ScanCapExceeded: return "ScanCapExceeded";
    case Errc::InvalidWeight: return "InvalidWeight";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::LevelMismatch: return "LevelMismatch";
    case Errc::EmptyRange: return "EmptyRange";
    case Errc::CheckpointMismatch: return "CheckpointMismatch";
    case Errc::MethodDisagreement: return "MethodDisagreement";
    }
    return "Unknown";
}

Residue Residue::from_signed(std::int64_t v, u64 m) {
    std::int64_t r = v % static_cast<std::int64_t>(m);
    if (r < 0) r += static_cast<std::int64_t>(m);
    return Residue(static_cast<u64>(r), m);
}

PrimeRange::PrimeRange(u64 lo_, u64 hi_, u64 chunk_) : lo(std::max<u64>(lo_, 2)), hi(hi_), chunk(chunk_) {
    if (chunk == 0) throw Error(Errc::InvalidArgument, "prime range chunk must be positive");
}

u64 gcd(u64 a, u64 b) noexcept {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 pow_mod(u64 base, u64 e, u64 m) noexcept {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (e > 0) {
        if (e & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return result;
}

Residue pow_mod(Residue a, u64 e) noexcept { return Residue(pow_mod(a.value, e, a.modulus), a.modulus); }

u64 inv_mod(u64 a, u64 m) {
    a %= m;
    if (a == 0) throw Error(Errc::ZeroInverse, "0 has no inverse mod " + std::to_string(m));
    // signed 128-bit so that coefficients never overflow for 64-bit moduli
    __int128 r0 = m, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        __int128 q = r0 / r1;
        __int128 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) {
        throw Error(Errc::ZeroInverse, std::to_string(a) + " is not invertible mod " + std::to_string(m));
    }
    s0 %= static_cast<__int128>(m);
    if (s0 < 0) s0 += m;
    return static_cast<u64>(s0);
}

Residue mod_inv(Residue a) { return Residue(inv_mod(a.value, a.modulus), a.modulus); }

std::vector<u64> batch_inv(std::span<const u64> values, u64 m) {
    const std::size_t n = values.size();
    std::vector<u64> out(n);
    if (n == 0) return out;
    // out[i] holds the prefix product v_0 * ... * v_{i-1} until the back-sweep
    u64 acc = 1;
    for (std::size_t i = 0; i < n; ++i) {
        u64 v = values[i] % m;
        if (v == 0) throw Error(Errc::ZeroInverse, "batch entry reduces to 0 mod " + std::to_string(m), i);
        out[i] = acc;
        acc = mul_mod(acc, v, m);
    }
    u64 inv = inv_mod(acc, m);
    for (std::size_t i = n; i-- > 0;) {
        u64 v = values[i] % m;
        out[i] = mul_mod(out[i], inv, m);
        inv = mul_mod(inv, v, m);
    }
    return out;
}

std::vector<Residue> batch_inv(std::span<const Residue> values) {
    std::vector<Residue> out;
    if (values.empty()) return out;
    const u64 m = values.front().modulus;
    std::vector<u64> raw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].modulus != m) {
            throw Error(Errc::InvalidArgument, "batch_inv needs a single shared modulus", i);
        }
        raw[i] = values[i].value;
    }
    auto inv = batch_inv(std::span<const u64>(raw), m);
    out.reserve(inv.size());
    for (u64 v : inv) out.emplace_back(v, m);
    return out;
}

SquareResidue pow_mod_p2(u64 N, u64 e, u64 p) {
    if (p < 2 || p >= (u64{1} << 32)) {
        throw Error(Errc::InvalidArgument, "mod-p^2 arithmetic needs 2 <= p < 2^32");
    }
    if (N % p == 0) {
        throw Error(Errc::SharedFactor, std::to_string(p) + " divides base " + std::to_string(N));
    }
    const u64 m = p * p;
    return SquareResidue{pow_mod(N % m, e, m), p};
}

namespace {

std::vector<u64> small_odd_primes(u64 limit) {
    // plain sieve up to sqrt(hi); only odd primes are returned
    std::vector<bool> composite(limit + 1, false);
    std::vector<u64> out;
    for (u64 i = 3; i <= limit; i += 2) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += 2 * i) composite[j] = true;
    }
    return out;
}

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

std::vector<u64> sieve_primes(u64 lo, u64 hi) {
    std::vector<u64> out;
    lo = std::max<u64>(lo, 2);
    if (hi < lo) return out;
    if (lo <= 2) out.push_back(2);

    const auto base = small_odd_primes(isqrt(hi));
    constexpr u64 segment_odds = u64{1} << 18;

    // odd candidates n = 2*idx + 1
    u64 first = std::max<u64>(lo, 3) | 1;
    std::vector<unsigned char> mark(segment_odds);
    for (u64 seg_lo = first; seg_lo <= hi; seg_lo += 2 * segment_odds) {
        const u64 seg_hi = std::min<u64>(hi, seg_lo + 2 * (segment_odds - 1));
        const u64 count = (seg_hi - seg_lo) / 2 + 1;
        std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(count), 0);
        for (u64 q : base) {
            if (q * q > seg_hi) break;
            u64 start = std::max(q * q, (seg_lo + q - 1) / q * q);
            if ((start & 1) == 0) start += q;
            for (u64 n = start; n <= seg_hi; n += 2 * q) mark[(n - seg_lo) / 2] = 1;
        }
        for (u64 i = 0; i < count; ++i) {
            if (!mark[i]) {
                u64 n = seg_lo + 2 * i;
                if (n > 1) out.push_back(n);
            }
        }
        if (seg_hi == hi) break;
    }
    return out;
}

std::vector<u64> sieve_primes(const PrimeRange& range) { return sieve_primes(range.lo, range.hi); }

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % q == 0) return n == q;
    }
    // deterministic Miller-Rabin for 64-bit inputs
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace fmzv
