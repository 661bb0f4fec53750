#pragma once

// Parallel per-prime execution with an ordered reduction.
//
// The range is cut into integer chunks of `chunk` consecutive numbers. Worker
// threads claim chunks, sieve them and evaluate every check on every prime,
// keeping results per chunk. The calling thread merges finished chunks
// strictly in range order, so reports do not depend on the thread count or
// on scheduling. With a checkpoint path set, the merged state is written via
// rename-into-place whenever at least `every` primes were merged since the
// previous write, and once more at the end.

#include "fmzv/harmonic_sums.hpp"
#include "fmzv/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fmzv {

struct Check {
    std::string id;
    std::function<PrimeOutcome(PrimeContext&)> eval;
    /// Skip reasons this check's preconditions can produce.
    std::vector<std::string> declared_skips;
    /// Table columns, for checks that emit rows.
    std::vector<std::string> columns;
};

struct RunOptions {
    unsigned threads = 1;
    u64 chunk = 4096;
    bool strict_skips = false;
    std::string checkpoint_path;
    u64 checkpoint_every = 0;
    /// Identifies the job in checkpoints and reports.
    std::string fingerprint;
    /// Test hook: stop (as if killed) once this many primes were merged and checkpointed.
    std::optional<u64> halt_after;
};

/// Thrown by run_checks when `halt_after` triggers.
struct Interrupted : std::runtime_error {
    Interrupted() : std::runtime_error("run interrupted by halt hook") {}
};

unsigned default_thread_count();

/// One report per check, in the order given. Resumes from the checkpoint
/// file when it exists and matches the fingerprint; a mismatching checkpoint
/// throws Error(CheckpointMismatch).
std::vector<CongruenceReport> run_checks(const std::vector<Check>& checks, const PrimeRange& range,
                                         const RunOptions& options = {});

CongruenceReport run_check(const Check& check, const PrimeRange& range, const RunOptions& options = {});

/// Evaluates a check on one prime; p = 2 and other out-of-domain primes are
/// handled by the check itself.
PrimeOutcome evaluate_at(const Check& check, u64 p);

} // namespace fmzv
