#include "fmzv/driver.hpp"
#include "fmzv/report_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fmzv {

unsigned default_thread_count() {
    if (const char* env = std::getenv("FMZV_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

PrimeOutcome evaluate_at(const Check& check, u64 p) {
    PrimeContext ctx(p);
    PrimeOutcome o = check.eval(ctx);
    o.p = p;
    return o;
}

namespace {

struct ChunkResult {
    std::vector<CongruenceReport> parts;
    u64 primes = 0;
    u64 last_prime = 0;
};

void apply_strict(const Check& check, PrimeOutcome& o) {
    if (o.verdict != Verdict::Skip) return;
    const auto& ok = check.declared_skips;
    if (std::find(ok.begin(), ok.end(), o.reason) == ok.end()) {
        o.verdict = Verdict::Fail;
        o.reason.clear();
    }
}

ChunkResult run_chunk(const std::vector<Check>& checks, u64 lo, u64 hi, bool strict) {
    ChunkResult out;
    out.parts.resize(checks.size());
    for (u64 p : sieve_primes(lo, hi)) {
        PrimeContext ctx(p);
        for (std::size_t c = 0; c < checks.size(); ++c) {
            PrimeOutcome o = checks[c].eval(ctx);
            o.p = p;
            if (strict) apply_strict(checks[c], o);
            out.parts[c].add(o);
        }
        ++out.primes;
        out.last_prime = p;
    }
    return out;
}

struct Checkpoint {
    std::string fingerprint;
    u64 next_lo = 0;
    u64 last_prime = 0;
    std::int64_t elapsed_ms = 0;
    std::vector<CongruenceReport> reports;
};

std::string checkpoint_json(const Checkpoint& cp, u64 lo, u64 hi) {
    nlohmann::json j;
    j["format"] = "fmzv-checkpoint/1";
    j["fingerprint"] = cp.fingerprint;
    j["range"] = {{"lo", lo}, {"hi", hi}};
    j["next_lo"] = cp.next_lo;
    j["last_prime"] = cp.last_prime;
    j["elapsed_ms"] = cp.elapsed_ms;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : cp.reports) j["reports"].push_back(report_to_json(r));
    return j.dump() + "\n";
}

std::optional<Checkpoint> load_checkpoint(const std::string& path, const std::string& fingerprint,
                                          std::size_t expected_reports) {
    if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::CheckpointMismatch, "unreadable checkpoint " + path + ": " + e.what());
    }
    Checkpoint cp;
    cp.fingerprint = j.value("fingerprint", "");
    if (cp.fingerprint != fingerprint) {
        throw Error(Errc::CheckpointMismatch, "checkpoint " + path + " belongs to a different job (fingerprint " +
                                               cp.fingerprint + ", expected " + fingerprint + ")");
    }
    cp.next_lo = j.at("next_lo").get<u64>();
    cp.last_prime = j.at("last_prime").get<u64>();
    cp.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    for (const auto& r : j.at("reports")) cp.reports.push_back(report_from_json(r));
    if (cp.reports.size() != expected_reports) {
        throw Error(Errc::CheckpointMismatch, "checkpoint " + path + " has the wrong number of reports");
    }
    return cp;
}

} // namespace

std::vector<CongruenceReport> run_checks(const std::vector<Check>& checks, const PrimeRange& range,
                                         const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const u64 lo = range.lo, hi = range.hi;
    const u64 chunk = std::max<u64>(1, options.chunk);

    Checkpoint state;
    state.fingerprint = options.fingerprint;
    state.next_lo = lo;
    if (auto cp = load_checkpoint(options.checkpoint_path, options.fingerprint, checks.size())) {
        state = std::move(*cp);
    } else {
        for (const auto& c : checks) {
            CongruenceReport r;
            r.id = c.id;
            r.lo = lo;
            r.hi = hi;
            r.spec_hash = options.fingerprint;
            r.columns = c.columns;
            state.reports.push_back(std::move(r));
        }
    }

    // chunk i covers [start + i*chunk, start + (i+1)*chunk - 1] clipped to hi
    const u64 start = state.next_lo;
    const u64 n_chunks = (hi < start) ? 0 : (hi - start) / chunk + 1;

    std::vector<std::optional<ChunkResult>> done(n_chunks);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<u64> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr worker_error;

    auto worker = [&] {
        while (!stop.load()) {
            const u64 i = next.fetch_add(1);
            if (i >= n_chunks) return;
            const u64 c_lo = start + i * chunk;
            const u64 c_hi = std::min(hi, c_lo + chunk - 1);
            try {
                ChunkResult r = run_chunk(checks, c_lo, c_hi, options.strict_skips);
                std::lock_guard lock(mu);
                done[i] = std::move(r);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!worker_error) worker_error = std::current_exception();
                stop = true;
            }
            cv.notify_all();
        }
    };

    const unsigned n_threads = std::max(1u, options.threads);
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);

    auto elapsed_now = [&] {
        return state.elapsed_ms +
               std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
                   .count();
    };
    auto save = [&] {
        if (options.checkpoint_path.empty()) return;
        Checkpoint snap = state;
        snap.elapsed_ms = elapsed_now();
        write_atomically(options.checkpoint_path, checkpoint_json(snap, lo, hi));
    };

    u64 merged_primes = 0, since_save = 0;
    for (u64 i = 0; i < n_chunks; ++i) {
        ChunkResult r;
        {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return done[i].has_value() || worker_error; });
            if (worker_error && !done[i]) break;
            r = std::move(*done[i]);
            done[i].reset();
        }
        for (std::size_t c = 0; c < checks.size(); ++c) state.reports[c].append(r.parts[c]);
        state.next_lo = std::min(hi, start + i * chunk + chunk - 1) + 1;
        if (r.primes) state.last_prime = r.last_prime;
        merged_primes += r.primes;
        since_save += r.primes;
        if (options.checkpoint_every && since_save >= options.checkpoint_every) {
            save();
            since_save = 0;
        }
        if (options.halt_after && merged_primes >= *options.halt_after && i + 1 < n_chunks) {
            save();
            stop = true;
            pool.clear();
            throw Interrupted();
        }
    }
    stop = true;
    pool.clear();
    if (worker_error) std::rethrow_exception(worker_error);
    save();

    const auto elapsed = elapsed_now();
    for (auto& r : state.reports) r.elapsed_ms = elapsed;
    return state.reports;
}

CongruenceReport run_check(const Check& check, const PrimeRange& range, const RunOptions& options) {
    return run_checks({check}, range, options).front();
}

} // namespace fmzv
