#pragma once

// Job specifications for the command-line surface: validation, the mapping
// from (command, target, parameters) to a per-prime Check, and execution.

#include "fmzv/driver.hpp"
#include "fmzv/harmonic_sums.hpp"
#include "fmzv/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fmzv {

struct JobSpec {
    std::string command; // verify | search | stats | compute
    std::string target;
    std::optional<unsigned> N;
    std::vector<unsigned> k;
    std::optional<Index> index;
    std::string color; // "bracket:j" or "table:<file>"
    std::optional<u64> base;
    std::optional<u64> M;
    std::string catalogue;
    std::string identity_id;
    u64 pmin = 2;
    u64 pmax = 0;
    bool strict_skips = false;

    // execution only; not part of the fingerprint
    unsigned threads = 1;
    std::string out;
    std::string format = "json";
    std::string checkpoint;
    u64 every = 0;
    bool reproducible = false;
};

/// Canonical text of the result-determining fields.
std::string canonical_spec(const JobSpec& spec);
/// FNV-1a of canonical_spec (plus catalogue contents when a file is named).
std::string spec_hash(const JobSpec& spec);

/// Targets accepted by a command.
const std::vector<std::string>& targets_of(const std::string& command);

/// Validates the spec and builds its check. Throws Error(InvalidArgument)
/// naming the offending flag.
Check build_check(const JobSpec& spec);

/// Validates and runs a job. Throws Error on invalid specs and Interrupted
/// when the halt hook fires.
CongruenceReport run_job(const JobSpec& spec, std::optional<u64> halt_after = std::nullopt);

/// Serializes in the spec's format.
std::string render(const CongruenceReport& report, const std::string& format);

} // namespace fmzv
