#pragma once

// Symbolic colored-index algebra and its per-prime evaluation.
//
// A ColoredTerm is q * zeta^c_{N}(k) with q rational. A FormalSum is a
// canonical linear combination of such terms at one level. Products of
// values (including frak Z(k) and log(N) atoms) live in ProductSum; they
// can be evaluated directly or, when they only contain zeta factors,
// expanded into a FormalSum by the stuffle product.

#include "fmzv/driver.hpp"
#include "fmzv/harmonic_sums.hpp"
#include "fmzv/report.hpp"

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fmzv {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

/// q mod p, or nullopt when p divides the denominator.
std::optional<u64> rational_mod(const Rational& q, u64 p);

struct ColoredTerm {
    Rational coeff{1};
    Index index;
    ColorMap color;

    ColoredTerm() = default;
    /// Throws ArityMismatch unless color.arity() == index.depth().
    ColoredTerm(Rational coeff, Index index, ColorMap color);

    unsigned level() const noexcept { return color.level(); }
    std::string to_string() const;

    friend bool operator==(const ColoredTerm& a, const ColoredTerm& b) {
        return a.coeff == b.coeff && a.index == b.index && a.color == b.color;
    }
};

/// Plain zeta(k) at level 1.
ColoredTerm plain_term(const Index& k, Rational coeff = 1);
/// zeta^{[j]}_{N}(k).
ColoredTerm bracket_term(const Index& k, unsigned N, unsigned j, Rational coeff = 1);

class FormalSum {
public:
    explicit FormalSum(unsigned level = 1) : level_(level) {}
    FormalSum(unsigned level, std::vector<ColoredTerm> terms);

    unsigned level() const noexcept { return level_; }
    const std::vector<ColoredTerm>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    /// Adds a term, merging with an equal (index, color) entry. Throws LevelMismatch.
    void add(const ColoredTerm& t);
    FormalSum& operator+=(const FormalSum& other);
    FormalSum scaled(const Rational& q) const;

    unsigned max_weight() const noexcept;
    std::string to_string() const;

    friend bool operator==(const FormalSum& a, const FormalSum& b) {
        return a.level_ == b.level_ && a.terms_ == b.terms_;
    }

private:
    unsigned level_;
    // sorted by (index, color); no zero coefficients
    std::vector<ColoredTerm> terms_;
};

FormalSum operator+(FormalSum a, const FormalSum& b);
FormalSum operator-(const FormalSum& a, const FormalSum& b);

/// Quasi-shuffle of two colored terms at one level. Throws LevelMismatch.
FormalSum stuffle_product(const ColoredTerm& a, const ColoredTerm& b);
FormalSum stuffle_product(const FormalSum& a, const FormalSum& b);

struct SignedTerm {
    int sign = 1;
    ColoredTerm term;
};

/// zeta^c(k) = (-1)^wt zeta^{rev c}(rev k); rev c(alpha) = (alpha - alpha_r, ..., alpha - alpha_1).
SignedTerm reverse_transform(const ColoredTerm& t);

/// Rewrites a level-N term as the sum of its level-M lifts (N | M).
FormalSum lift_level(const ColoredTerm& t, unsigned M);
FormalSum lift_level(const FormalSum& s, unsigned M);

// ---- products ------------------------------------------------------------

struct ZetaAtom {
    Index index;
    ColorMap color;
    friend bool operator==(const ZetaAtom&, const ZetaAtom&) = default;
};
struct FrakZAtom {
    unsigned k = 0;
    friend bool operator==(const FrakZAtom&, const FrakZAtom&) = default;
};
/// log(N) = q_p(N).
struct LogAtom {
    u64 base = 0;
    friend bool operator==(const LogAtom&, const LogAtom&) = default;
};
using Factor = std::variant<ZetaAtom, FrakZAtom, LogAtom>;

struct ProductTerm {
    Rational coeff{1};
    std::vector<Factor> factors; // empty product = 1
    unsigned weight() const;
};

struct ProductSum {
    std::vector<ProductTerm> terms;

    ProductSum() = default;
    ProductSum(const FormalSum& s);
    ProductSum(const ColoredTerm& t);

    unsigned max_weight() const;
    /// lcm of zeta levels; log bases are not included.
    unsigned level() const;
    std::vector<u64> log_bases() const;
    bool zeta_only() const;

    std::string to_string() const;
};

/// Expands zeta-only products into one FormalSum at the lcm level.
/// Throws InvalidArgument when a frak Z or log factor is present.
FormalSum expand(const ProductSum& s);

/// Prop. reversal ii): zeta(k) = N^wt sum over cuts of prod_j zeta^{[j]}_N(block_j).
ProductSum decompose_level_N(const Index& k, unsigned N);

/// zeta(k) = sum_i (-1)^{k_{i+1}+...+k_r} zeta^{(2)}(k_1..k_i) zeta^{(2)}(k_r..k_{i+1}).
ProductSum kmy_level2_split(const Index& k);

// ---- per-prime evaluation ------------------------------------------------

struct Evaluation {
    std::optional<u64> value;
    std::string skip_reason; // set when value is empty
};

/// Evaluates at ctx.p(); skips (never throws) on p | level, p | log base,
/// p = 2 with log factors, p <= weight + 2 and coefficient denominators.
Evaluation evaluate(PrimeContext& ctx, const ProductSum& s);

struct Identity {
    std::string id;
    ProductSum lhs;
    ProductSum rhs;
};

Check identity_check(const Identity& identity);

CongruenceReport verify_formal_identity(const Identity& identity, const PrimeRange& range,
                                        const RunOptions& opt = {});
CongruenceReport verify_formal_identity(const FormalSum& lhs, const FormalSum& rhs, const PrimeRange& range,
                                        const RunOptions& opt = {});

/// interval_sum(k, N, j) against N^wt zeta^{[j]}_{N}(k); skips only p | N.
Check jsum_check(const Index& k, unsigned N, unsigned j);
CongruenceReport verify_lemma_jsum(const Index& k, unsigned N, unsigned j, const PrimeRange& range,
                                   const RunOptions& opt = {});

// ---- identity builders ---------------------------------------------------

Identity reversal_identity(const ColoredTerm& t);
Identity decompose_identity(const Index& k, unsigned N);
Identity kmy_identity(const Index& k);
Identity levels_identity(const ColoredTerm& t, unsigned M);
Identity stuffle_identity(const ColoredTerm& a, const ColoredTerm& b);

} // namespace fmzv
