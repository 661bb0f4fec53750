#pragma once

// Prime enumeration and word-size modular arithmetic.
//
// Residues mod p live in a 64-bit word and products go through unsigned
// __int128, so any modulus below 2^64 works. Squared moduli only come up
// for Fermat quotients and Wieferich checks; they have their own type so a
// value mod p^2 can never be passed where a value mod p is expected.

#include "fmzv/error.hpp"

#include <cstdint>
#include <span>
#include <vector>

#if !defined(__SIZEOF_INT128__)
#error "fmzv requires unsigned __int128 (GCC/Clang)."
#endif

namespace fmzv {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// A value reduced modulo an odd prime (or 2, for completeness).
struct Residue {
    u64 value = 0;
    u64 modulus = 1;

    Residue() = default;
    Residue(u64 v, u64 m) : value(m == 0 ? v : v % m), modulus(m) {}

    static Residue from_signed(std::int64_t v, u64 m);

    friend bool operator==(const Residue&, const Residue&) = default;
};

/// A value modulo p^2 for a prime p, kept together with p itself.
struct SquareResidue {
    u64 value = 0;
    u64 prime = 0;

    u64 modulus() const noexcept { return prime * prime; }
    friend bool operator==(const SquareResidue&, const SquareResidue&) = default;
};

struct PrimeRange {
    u64 lo = 2;
    u64 hi = 2;
    u64 chunk = 1 << 16;

    PrimeRange() = default;
    PrimeRange(u64 lo_, u64 hi_, u64 chunk_ = 1 << 16);

    bool empty() const noexcept { return hi < lo; }
};

// Operands must already be reduced. Moduli below 2^32 keep the product in
// one word; the wide path is for p^2 and other large moduli.
inline u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    if (m <= 0xffffffffu) return a * b % m;
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 add_mod(u64 a, u64 b, u64 m) noexcept {
    u64 s = a + b;
    return (s >= m || s < a) ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) noexcept { return a >= b ? a - b : a + (m - b); }

inline u64 neg_mod(u64 a, u64 m) noexcept { return a == 0 ? 0 : m - a; }

u64 pow_mod(u64 base, u64 e, u64 m) noexcept;
Residue pow_mod(Residue a, u64 e) noexcept;

/// Inverse by extended Euclid. Throws ZeroInverse when gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);
Residue mod_inv(Residue a);

/// Prefix-product inversion: one modular inverse for the whole batch.
/// On a zero entry throws ZeroInverse with `position()` set.
std::vector<u64> batch_inv(std::span<const u64> values, u64 m);
std::vector<Residue> batch_inv(std::span<const Residue> values);

/// N^e mod p^2. Throws SharedFactor when p | N.
SquareResidue pow_mod_p2(u64 N, u64 e, u64 p);

/// Segmented odd-only sieve; memory is O(sqrt(hi) + segment).
std::vector<u64> sieve_primes(const PrimeRange& range);
std::vector<u64> sieve_primes(u64 lo, u64 hi);

bool is_prime(u64 n);

u64 gcd(u64 a, u64 b) noexcept;

} // namespace fmzv
