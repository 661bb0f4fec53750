#pragma once

#include "fmzv/prime_engine.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fmzv {

inline constexpr const char* kToolVersion = "0.3.1";

enum class Verdict { Pass, Fail, Skip };

/// Skip reasons. Checks declare which of these their preconditions produce;
/// anything else is "unexpected" and can be promoted to a failure.
namespace skip {
inline constexpr const char* kEvenPrime = "p=2";
inline constexpr const char* kSmallPrime = "p below identity minimum";
inline constexpr const char* kWeightBound = "p<=weight+2";
inline constexpr const char* kLevelFactor = "p divides level";
inline constexpr const char* kBaseFactor = "p divides base";
inline constexpr const char* kDenominator = "coefficient denominator divisible by p";
inline constexpr const char* kVonStaudt = "p-1 divides Bernoulli index";
inline constexpr const char* kSeriesCap = "p above series cap";
} // namespace skip

using Row = std::vector<std::int64_t>;

struct PrimeOutcome {
    u64 p = 0;
    Verdict verdict = Verdict::Pass;
    u64 lhs = 0;
    u64 rhs = 0;
    std::string reason;
    std::vector<Row> rows;

    static PrimeOutcome pass(u64 p) { return {p, Verdict::Pass, 0, 0, {}, {}}; }
    static PrimeOutcome skipped(u64 p, std::string why) { return {p, Verdict::Skip, 0, 0, std::move(why), {}}; }
    /// Pass or fail depending on lhs == rhs; both sides are kept as witnesses.
    static PrimeOutcome compare(u64 p, u64 lhs, u64 rhs) {
        return {p, lhs == rhs ? Verdict::Pass : Verdict::Fail, lhs, rhs, {}, {}};
    }
};

struct FailedPrime {
    u64 p = 0;
    u64 lhs = 0;
    u64 rhs = 0;
    friend bool operator==(const FailedPrime&, const FailedPrime&) = default;
};

struct SkippedPrime {
    u64 p = 0;
    std::string reason;
    friend bool operator==(const SkippedPrime&, const SkippedPrime&) = default;
};

/// Outcome of one identity or statistic over a prime range. Primes not listed
/// as failed or skipped passed; `passed` counts them.
struct CongruenceReport {
    std::string id;
    u64 lo = 0;
    u64 hi = 0;
    u64 passed = 0;
    std::vector<FailedPrime> failed;
    std::vector<SkippedPrime> skipped;
    std::int64_t elapsed_ms = 0;
    std::string tool_version = kToolVersion;
    std::string spec_hash;
    std::vector<std::string> columns;
    std::vector<Row> rows;

    void add(const PrimeOutcome& o);
    /// Appends results of a later, disjoint sub-range.
    void append(const CongruenceReport& later);

    u64 total() const noexcept { return passed + failed.size() + skipped.size(); }
    bool ok() const noexcept { return failed.empty(); }

    friend bool operator==(const CongruenceReport&, const CongruenceReport&) = default;
};

} // namespace fmzv
