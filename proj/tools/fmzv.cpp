// fmzv: finite multiple zeta values, Bernoulli numbers and Fermat quotients
// modulo primes, verified over prime ranges.
//
//   fmzv <command> <target> [--N n] [--k list] [--index a,b,c]
//        [--color bracket:j|table:file] [--base n] [--M m] [--pmin P] --pmax Q
//        [--threads t] [--out path] [--format json|csv]
//        [--checkpoint path --every n] [--strict-skips] [--reproducible]
//        [--catalogue file] [--id X]
//
// Exit codes: 0 no failures, 1 some prime failed, 2 usage error or
// checkpoint mismatch, 3 internal error.

#include "fmzv/catalogue.hpp"
#include "fmzv/jobs.hpp"
#include "fmzv/report_io.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdlib>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;
constexpr int kExitHalted = 137;

std::vector<unsigned> parse_list(const std::string& text) {
    std::vector<unsigned> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma - start);
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw fmzv::Error(fmzv::Errc::InvalidArgument, "--k: '" + item + "' is not a positive integer");
        }
        out.push_back(static_cast<unsigned>(v));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<std::uint64_t> halt_hook() {
    const char* env = std::getenv("FMZV_TEST_HALT_AFTER");
    if (!env || !*env) return std::nullopt;
    return std::strtoull(env, nullptr, 10);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite multiple zeta values, Bernoulli numbers and Fermat quotients mod p"};
    fmzv::JobSpec spec;
    spec.threads = fmzv::default_thread_count();

    std::string k_list, index_text;
    unsigned n_level = 0;
    std::uint64_t base = 0, m_value = 0;
    bool list_targets = false;

    app.add_option("command", spec.command, "verify | search | stats | compute");
    app.add_option("target", spec.target, "identity, statistic or quantity");
    auto* n_opt = app.add_option("--N", n_level, "level or Lerch/SDI parameter");
    app.add_option("--k", k_list, "comma-separated weight parameters");
    app.add_option("--index", index_text, "index as a,b,c");
    app.add_option("--color", spec.color, "bracket:j or table:<file>");
    auto* base_opt = app.add_option("--base", base, "integer base");
    auto* m_opt = app.add_option("--M", m_value, "second base, lift level or intersection depth");
    app.add_option("--pmin", spec.pmin, "smallest prime considered")->default_val(2);
    app.add_option("--pmax", spec.pmax, "largest prime considered");
    app.add_option("--threads", spec.threads, "worker threads (default FMZV_THREADS or all cores)");
    app.add_option("--out", spec.out, "write the report here instead of stdout");
    app.add_option("--format", spec.format, "json or csv")->default_val("json");
    app.add_option("--checkpoint", spec.checkpoint, "checkpoint file for resumable runs");
    app.add_option("--every", spec.every, "checkpoint interval in primes");
    app.add_flag("--strict-skips", spec.strict_skips, "undeclared skip reasons count as failures");
    app.add_flag("--reproducible", spec.reproducible, "report elapsed_ms as 0");
    app.add_option("--catalogue", spec.catalogue, "identity catalogue file");
    app.add_option("--id", spec.identity_id, "identity id within the catalogue");
    app.add_flag("--list", list_targets, "list commands, targets and built-in identities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (list_targets) {
        for (const char* cmd : {"verify", "search", "stats", "compute"}) {
            fmt::print("{}:", cmd);
            for (const auto& t : fmzv::targets_of(cmd)) fmt::print(" {}", t);
            fmt::print("\n");
        }
        fmt::print("identities:");
        for (const auto& id : fmzv::builtin_catalogue()) fmt::print(" {}", id.id);
        fmt::print("\n");
        return kExitOk;
    }

    try {
        if (spec.command.empty() || spec.target.empty()) {
            throw fmzv::Error(fmzv::Errc::InvalidArgument, "command and target are required (see --help)");
        }
        if (spec.pmax == 0) throw fmzv::Error(fmzv::Errc::InvalidArgument, "--pmax: required");
        if (*n_opt) spec.N = n_level;
        if (*base_opt) spec.base = base;
        if (*m_opt) spec.M = m_value;
        spec.k = parse_list(k_list);
        if (!index_text.empty()) {
            try {
                spec.index = fmzv::Index::parse(index_text);
            } catch (const fmzv::Error& e) {
                throw fmzv::Error(fmzv::Errc::InvalidArgument, std::string("--index: ") + e.what());
            }
        }
        fmzv::build_check(spec);
    } catch (const fmzv::Error& e) {
        fmt::print(stderr, "fmzv: usage error: {}\n", e.what());
        return kExitUsage;
    }

    try {
        const fmzv::CongruenceReport report = fmzv::run_job(spec, halt_hook());
        const std::string text = fmzv::render(report, spec.format);
        if (spec.out.empty()) {
            std::cout << text;
        } else {
            fmzv::write_atomically(spec.out, text);
        }
        fmt::print(stderr, "{}: {} passed, {} failed, {} skipped\n", report.id, report.passed, report.failed.size(),
                   report.skipped.size());
        return report.ok() ? kExitOk : kExitFailures;
    } catch (const fmzv::Interrupted&) {
        fmt::print(stderr, "fmzv: halted by FMZV_TEST_HALT_AFTER\n");
        return kExitHalted;
    } catch (const fmzv::Error& e) {
        if (e.code() == fmzv::Errc::CheckpointMismatch || e.code() == fmzv::Errc::InvalidArgument) {
            fmt::print(stderr, "fmzv: {}\n", e.what());
            return kExitUsage;
        }
        fmt::print(stderr, "fmzv: internal error: {}\n", e.what());
        return kExitInternal;
    } catch (const std::exception& e) {
        fmt::print(stderr, "fmzv: internal error: {}\n", e.what());
        return kExitInternal;
    }
}
