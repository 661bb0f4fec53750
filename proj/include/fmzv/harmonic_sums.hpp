#pragma once

// Per-prime finite multiple harmonic sums, plain and colored.
//
// Everything here works on one prime at a time through a PrimeContext,
// which owns the inverse table 1/m (m = 1..p-1) and lazily derived tables
// of inverse powers and their prefix sums. A context is meant to live for
// the duration of one worker's task on one prime.

#include "fmzv/prime_engine.hpp"

#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmzv {

/// Index (k_1, ..., k_r) of positive integers. The empty index is legal.
class Index {
public:
    Index() = default;
    Index(std::initializer_list<unsigned> parts);
    explicit Index(std::vector<unsigned> parts);

    /// "1,2,3"; the empty string (or "()" / "empty") is the empty index.
    static Index parse(std::string_view text);

    const std::vector<unsigned>& parts() const noexcept { return parts_; }
    unsigned operator[](std::size_t i) const { return parts_[i]; }
    std::size_t depth() const noexcept { return parts_.size(); }
    unsigned weight() const noexcept { return weight_; }
    bool empty() const noexcept { return parts_.empty(); }

    Index reversed() const;
    /// parts [from, to)
    Index slice(std::size_t from, std::size_t to) const;

    std::string to_string() const;

    friend bool operator==(const Index& a, const Index& b) { return a.parts_ == b.parts_; }
    friend std::strong_ordering operator<=>(const Index& a, const Index& b) { return a.parts_ <=> b.parts_; }

private:
    std::vector<unsigned> parts_;
    unsigned weight_ = 0;
};

/// All indices of a given weight (compositions), in lexicographic order.
std::vector<Index> indices_of_weight(unsigned weight);

/// Residue tuple assigned to one unit; std::nullopt is the box entry.
using ColorEntry = std::optional<std::vector<unsigned>>;

/// A total map from the units of Z/NZ to residue tuples of fixed arity (or box).
class ColorMap {
public:
    ColorMap() : ColorMap(1, 0) {}
    /// Every unit mapped to box.
    ColorMap(unsigned level, unsigned arity);

    /// [j]: alpha -> (-j alpha, ..., -j alpha).
    static ColorMap bracket(unsigned level, unsigned arity, unsigned j);
    /// alpha -> the same tuple for every unit.
    static ColorMap constant(unsigned level, std::vector<unsigned> tuple);

    unsigned level() const noexcept { return level_; }
    unsigned arity() const noexcept { return arity_; }
    const std::vector<unsigned>& units() const noexcept { return units_; }
    const std::vector<ColorEntry>& entries() const noexcept { return entries_; }

    /// Entry at a unit alpha (reduced mod N first). Throws InvalidArgument for non-units.
    const ColorEntry& at(unsigned alpha) const;
    /// Entry selected by a prime: c(p mod N). Throws LevelSharesFactor when p | N.
    const ColorEntry& at_prime(u64 p) const;

    /// Sets an entry; tuple values are reduced mod N. Throws ArityMismatch.
    void set(unsigned alpha, ColorEntry entry);

    bool all_box() const;

    /// Canonical flattening used for ordering: per unit, a 0 marker for box
    /// or 1 followed by the tuple.
    std::vector<unsigned> flattened() const;

    std::string to_string() const;

    friend bool operator==(const ColorMap& a, const ColorMap& b) {
        return a.level_ == b.level_ && a.arity_ == b.arity_ && a.entries_ == b.entries_;
    }
    friend std::strong_ordering operator<=>(const ColorMap& a, const ColorMap& b);

private:
    std::size_t slot(unsigned alpha) const;

    unsigned level_;
    unsigned arity_;
    std::vector<unsigned> units_;
    std::vector<ColorEntry> entries_;
};

std::vector<unsigned> units_mod(unsigned N);

/// Per-prime tables. Not thread-safe; one instance per task.
class PrimeContext {
public:
    /// p must be a prime below 2^32 (not checked).
    explicit PrimeContext(u64 p);

    u64 p() const noexcept { return p_; }

    /// 1/m mod p for 1 <= m < p (index 0 holds 0).
    const std::vector<u64>& inverses();
    /// m^{-k} mod p for 0 <= m < p.
    const std::vector<u64>& inverse_powers(unsigned k);
    /// prefix[m] = sum_{i=1}^{m} i^{-k} mod p, m = 0..p-1.
    const std::vector<u64>& inverse_power_prefix(unsigned k);

    u64 mul(u64 a, u64 b) const noexcept { return a * b % p_; }
    u64 add(u64 a, u64 b) const noexcept { return add_mod(a, b, p_); }
    u64 sub(u64 a, u64 b) const noexcept { return sub_mod(a, b, p_); }
    u64 neg(u64 a) const noexcept { return neg_mod(a, p_); }
    u64 pow(u64 a, u64 e) const noexcept { return pow_mod(a, e, p_); }
    u64 inv(u64 a) const { return inv_mod(a, p_); }
    /// Reduces a signed integer into [0, p).
    u64 reduce(std::int64_t v) const noexcept;

private:
    u64 p_;
    std::vector<u64> inverses_;
    std::map<unsigned, std::vector<u64>> powers_;
    std::map<unsigned, std::vector<u64>> prefixes_;
};

/// Integer bounds of the open interval (jp/N, (j+1)p/N) for p not dividing N.
struct IntervalBounds {
    u64 first;
    u64 last; // inclusive; first > last means empty
};
IntervalBounds interval_bounds(u64 j, u64 N, u64 p);

/// Sum over first <= m_1 < ... < m_r <= last of prod m_i^{-k_i}, optionally
/// with m_i constrained to residues[i] mod N. Runs in O((last-first) * r).
u64 nested_sum(PrimeContext& ctx, const Index& k, u64 first, u64 last,
               const std::vector<unsigned>* residues = nullptr, unsigned N = 1);

/// s_{p,k}(j, N) = sum over jp/N < m < (j+1)p/N of m^{-k}.
u64 s_pk(PrimeContext& ctx, u64 j, u64 N, unsigned k);
Residue s_pk(u64 j, u64 N, unsigned k, u64 p);

/// zeta_p(k) mod p; the empty index gives 1.
u64 zeta_p(PrimeContext& ctx, const Index& k);
Residue zeta_p(const Index& k, u64 p);

/// Colored sum with m_i = alpha_i mod N. Throws LevelSharesFactor, ArityMismatch.
u64 zeta_p_colored(PrimeContext& ctx, const Index& k, unsigned N, const std::vector<unsigned>& alpha);
Residue zeta_p_colored(const Index& k, unsigned N, const std::vector<unsigned>& alpha, u64 p);

/// zeta^{c(p mod N)}_{p,N}(k); box gives 0.
u64 zeta_p_colormap(PrimeContext& ctx, const Index& k, const ColorMap& c);
Residue zeta_p_colormap(const Index& k, const ColorMap& c, u64 p);

/// Nested sum restricted to the interval (jp/N, (j+1)p/N).
u64 interval_sum(PrimeContext& ctx, const Index& k, unsigned N, unsigned j);
Residue interval_sum(const Index& k, unsigned N, unsigned j, u64 p);

} // namespace fmzv
