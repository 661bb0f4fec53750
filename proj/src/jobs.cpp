#include "fmzv/jobs.hpp"
#include "fmzv/bernoulli_lab.hpp"
#include "fmzv/catalogue.hpp"
#include "fmzv/quotient_lab.hpp"
#include "fmzv/relation_engine.hpp"
#include "fmzv/report_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace fmzv {

namespace {

[[noreturn]] void usage(const std::string& flag, const std::string& what) {
    throw Error(Errc::InvalidArgument, flag + ": " + what);
}

std::string read_file(const std::string& path, const std::string& flag) {
    std::ifstream f(path, std::ios::binary);
    if (!f) usage(flag, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

unsigned need_n(const JobSpec& s, unsigned min) {
    if (!s.N) usage("--N", "required for " + s.command + " " + s.target);
    if (*s.N < min) usage("--N", "must be >= " + std::to_string(min));
    return *s.N;
}

u64 need_m(const JobSpec& s, u64 min) {
    if (!s.M) usage("--M", "required for " + s.command + " " + s.target);
    if (*s.M < min) usage("--M", "must be >= " + std::to_string(min));
    return *s.M;
}

u64 need_base(const JobSpec& s) {
    if (!s.base) usage("--base", "required for " + s.command + " " + s.target);
    if (*s.base < 1) usage("--base", "must be positive");
    return *s.base;
}

const Index& need_index(const JobSpec& s) {
    if (!s.index) usage("--index", "required for " + s.command + " " + s.target);
    return *s.index;
}

std::vector<unsigned> need_k(const JobSpec& s, std::size_t count) {
    if (s.k.size() != count) {
        usage("--k", "expects " + std::to_string(count) + (count == 1 ? " value" : " comma-separated values"));
    }
    for (unsigned v : s.k)
        if (v == 0) usage("--k", "entries must be positive");
    return s.k;
}

ColorMap need_color(const JobSpec& s, unsigned level, unsigned arity) {
    const std::string spec = s.color.empty() ? "bracket:0" : s.color;
    try {
        if (spec.rfind("table:", 0) == 0) {
            const std::string text = read_file(spec.substr(6), "--color");
            return parse_color(nlohmann::json::parse(text), level, arity);
        }
        return parse_color(nlohmann::json(spec), level, arity);
    } catch (const nlohmann::json::exception& e) {
        usage("--color", e.what());
    } catch (const Error& e) {
        usage("--color", e.what());
    }
}

unsigned bracket_j(const JobSpec& s, unsigned N) {
    if (s.color.rfind("bracket:", 0) != 0) usage("--color", "expects bracket:j for " + s.target);
    unsigned j = 0;
    try {
        j = static_cast<unsigned>(std::stoul(s.color.substr(8)));
    } catch (const std::exception&) {
        usage("--color", "bad bracket spec '" + s.color + "'");
    }
    if (j >= N) usage("--color", "bracket index must be below N");
    return j;
}

std::int64_t cell(u64 v) { return static_cast<std::int64_t>(v); }

// ---- checks that only exist as CLI jobs ----------------------------------

Check irregularity_stats_check(u64 cap) {
    Check c;
    c.id = "irregularity";
    c.declared_skips = {skip::kSmallPrime, skip::kSeriesCap};
    c.columns = {"p", "irregularity"};
    c.eval = [cap](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        if (p > cap) return PrimeOutcome::skipped(p, skip::kSeriesCap);
        PrimeOutcome o = PrimeOutcome::pass(p);
        o.rows.push_back({cell(p), cell(irregularity_index(p, cap).index())});
        return o;
    };
    return c;
}

Check witness_weight_check(unsigned k) {
    if (k == 0 || k == 1 || k == 2 || k == 4) usage("--k", "weight " + std::to_string(k) + " spans only zero");
    std::vector<std::vector<unsigned>> splits;
    if (k % 2 == 1) {
        splits.push_back({k});
    } else {
        for (unsigned k1 = 3; k1 <= k / 2; k1 += 2) splits.push_back({k1, k - k1});
    }
    Check c;
    c.id = "witness-weight(k=" + std::to_string(k) + ")";
    c.declared_skips = {skip::kWeightBound};
    c.columns = {"p", "k1", "k2", "value"};
    c.eval = [splits](PrimeContext& ctx) {
        const u64 p = ctx.p();
        bool eligible = false;
        for (const auto& parts : splits) {
            const unsigned top = *std::max_element(parts.begin(), parts.end());
            if (p <= top + 2) continue;
            eligible = true;
            u64 v = 1;
            for (unsigned part : parts) v = ctx.mul(v, frak_z(ctx, part));
            if (v != 0) {
                PrimeOutcome o = PrimeOutcome::pass(p);
                o.rows.push_back({cell(p), parts[0], parts.size() > 1 ? parts[1] : 0, cell(v)});
                return o;
            }
        }
        return eligible ? PrimeOutcome::pass(p) : PrimeOutcome::skipped(p, skip::kWeightBound);
    };
    return c;
}

Check witness_level_check(unsigned N, unsigned k) {
    Check c;
    c.id = "witness-level(N=" + std::to_string(N) + ",k=" + std::to_string(k) + ")";
    c.declared_skips = {skip::kEvenPrime, skip::kLevelFactor};
    c.columns = {"p", "q", "j", "value", "power"};
    c.eval = [N, k](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p == 2) return PrimeOutcome::skipped(p, skip::kEvenPrime);
        if (N % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        PrimeOutcome o = PrimeOutcome::pass(p);
        const u64 q = fermat_quotient_value(N, p);
        if (q == 0) return o;
        for (unsigned j = 1; j < N; ++j) {
            const u64 v = zeta_p_colormap(ctx, Index{1}, ColorMap::bracket(N, 1, j));
            if (v != 0) {
                o.rows.push_back({cell(p), cell(q), j, cell(v), cell(ctx.pow(v, k))});
                return o;
            }
        }
        // q_p(N) = sum j zeta^{[j]}(1) cannot be nonzero with every term zero
        return PrimeOutcome::compare(p, q, 0);
    };
    return c;
}

Check zeta_compute_check(const Index& k, const ColorMap& color) {
    Check c;
    c.id = "zeta(k=" + k.to_string() + "," + color.to_string() + ")";
    c.declared_skips = {skip::kLevelFactor};
    c.columns = {"p", "value"};
    c.eval = [k, color](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (color.level() > 1 && color.level() % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        PrimeOutcome o = PrimeOutcome::pass(p);
        o.rows.push_back({cell(p), cell(zeta_p_colormap(ctx, k, color))});
        return o;
    };
    return c;
}

Check bernoulli_compute_check(unsigned n) {
    if (n < 2 || n % 2) usage("--k", "Bernoulli index must be even and >= 2");
    Check c;
    c.id = "bernoulli(n=" + std::to_string(n) + ")";
    c.declared_skips = {skip::kSmallPrime, skip::kVonStaudt};
    c.columns = {"p", "value"};
    c.eval = [n](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        if (n % (p - 1) == 0) return PrimeOutcome::skipped(p, skip::kVonStaudt);
        PrimeOutcome o = PrimeOutcome::pass(p);
        o.rows.push_back({cell(p), cell(bernoulli_mod_p(ctx, n))});
        return o;
    };
    return c;
}

Check quotient_compute_check(u64 base) {
    Check c;
    c.id = "fermat-quotient(base=" + std::to_string(base) + ")";
    c.declared_skips = {skip::kBaseFactor};
    c.columns = {"p", "value"};
    c.eval = [base](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (base % p == 0) return PrimeOutcome::skipped(p, skip::kBaseFactor);
        PrimeOutcome o = PrimeOutcome::pass(p);
        o.rows.push_back({cell(p), cell(fermat_quotient_value(base, p))});
        return o;
    };
    return c;
}

Check frakz_compute_check(unsigned k) {
    if (k < 2) usage("--k", "frak Z needs k >= 2");
    Check c;
    c.id = "frakz(k=" + std::to_string(k) + ")";
    c.declared_skips = {skip::kSmallPrime};
    c.columns = {"p", "value"};
    c.eval = [k](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (p < 5 || k + 2 > p) return PrimeOutcome::skipped(p, skip::kSmallPrime);
        PrimeOutcome o = PrimeOutcome::pass(p);
        o.rows.push_back({cell(p), cell(frak_z(ctx, k))});
        return o;
    };
    return c;
}

Identity catalogue_identity(const JobSpec& s) {
    if (s.identity_id.empty()) usage("--id", "required for verify identity");
    try {
        if (s.catalogue.empty()) return find_identity(builtin_catalogue(), s.identity_id);
        return find_identity(load_catalogue(s.catalogue), s.identity_id);
    } catch (const Error& e) {
        usage(s.catalogue.empty() ? "--id" : "--catalogue", e.what());
    }
}

Check verify_check(const JobSpec& s) {
    const std::string& t = s.target;
    if (t == "eisenstein") return eisenstein_check();
    if (t == "sdi") return sdi_check(need_n(s, 1));
    if (t == "lerch") return lerch_check(need_n(s, 2));
    if (t == "a-sdi") return a_sdi_check(need_n(s, 1));
    if (t == "lerch-log") return lerch_log_check(need_n(s, 2));
    if (t == "log-additivity") return log_additivity_check(need_n(s, 1), need_m(s, 1));
    if (t == "vhz") {
        auto k = need_k(s, 2);
        return vhz_check(k[0], k[1]);
    }
    if (t == "level12") {
        auto k = need_k(s, 1);
        if (k[0] < 3 || k[0] % 2 == 0) usage("--k", "level12 needs odd k >= 3");
        return level12_check(k[0]);
    }
    if (t == "vandiver") return vandiver_check(need_k(s, 1)[0]);
    if (t == "half-index") return half_index_check();
    if (t == "jsum") {
        const unsigned N = need_n(s, 1);
        return jsum_check(need_index(s), N, bracket_j(s, N));
    }
    if (t == "reversal") {
        const Index& k = need_index(s);
        const unsigned N = s.N.value_or(1);
        if (N == 0) usage("--N", "must be positive");
        return identity_check(reversal_identity(ColoredTerm(1, k, need_color(s, N, static_cast<unsigned>(k.depth())))));
    }
    if (t == "decompose") return identity_check(decompose_identity(need_index(s), need_n(s, 1)));
    if (t == "kmy") return identity_check(kmy_identity(need_index(s)));
    if (t == "levels") {
        const Index& k = need_index(s);
        const unsigned N = need_n(s, 1);
        const u64 M = need_m(s, 1);
        if (M % N != 0) usage("--M", "must be a multiple of --N");
        return identity_check(levels_identity(ColoredTerm(1, k, need_color(s, N, static_cast<unsigned>(k.depth()))),
                                              static_cast<unsigned>(M)));
    }
    if (t == "example-relation") return identity_check(find_identity(builtin_catalogue(), "example-relation"));
    if (t == "identity") return identity_check(catalogue_identity(s));
    usage("target", "unknown verify target '" + t + "'");
}

Check search_check(const JobSpec& s) {
    const std::string& t = s.target;
    if (t == "wieferich") {
        const u64 b = need_base(s);
        if (b < 2) usage("--base", "must be >= 2");
        return wieferich_check(b);
    }
    if (t == "irregular") return irregular_pairs_check();
    if (t == "witness-weight") return witness_weight_check(need_k(s, 1)[0]);
    if (t == "witness-level") return witness_level_check(need_n(s, 2), need_k(s, 1)[0]);
    if (t == "intersection") return intersection_check(need_m(s, 2));
    usage("target", "unknown search target '" + t + "'");
}

Check stats_check(const JobSpec& s) {
    const std::string& t = s.target;
    if (t == "eth") return eth_check();
    if (t == "ell") return ell_check();
    if (t == "irregularity") return irregularity_stats_check(kSeriesCap);
    if (t == "half-index") return half_index_check();
    if (t == "eth-bound") return eth_bound_check();
    if (t == "lenstra") return lenstra_check();
    usage("target", "unknown stats target '" + t + "'");
}

Check compute_check(const JobSpec& s) {
    const std::string& t = s.target;
    if (t == "zeta") {
        const Index& k = need_index(s);
        const unsigned N = s.N.value_or(1);
        if (N == 0) usage("--N", "must be positive");
        return zeta_compute_check(k, need_color(s, N, static_cast<unsigned>(k.depth())));
    }
    if (t == "bernoulli") return bernoulli_compute_check(need_k(s, 1)[0]);
    if (t == "fermat-quotient") return quotient_compute_check(need_base(s));
    if (t == "frakz") return frakz_compute_check(need_k(s, 1)[0]);
    usage("target", "unknown compute target '" + t + "'");
}

bool is_witness_search(const JobSpec& s) {
    return s.command == "search" && (s.target == "witness-weight" || s.target == "witness-level");
}

} // namespace

const std::vector<std::string>& targets_of(const std::string& command) {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"verify",
         {"eisenstein", "sdi", "lerch", "a-sdi", "lerch-log", "log-additivity", "vhz", "level12", "vandiver",
          "half-index", "jsum", "reversal", "decompose", "kmy", "levels", "example-relation", "identity"}},
        {"search", {"wieferich", "irregular", "witness-weight", "witness-level", "intersection"}},
        {"stats", {"eth", "ell", "irregularity", "half-index", "eth-bound", "lenstra"}},
        {"compute", {"zeta", "bernoulli", "fermat-quotient", "frakz"}},
    };
    static const std::vector<std::string> none;
    auto it = table.find(command);
    return it == table.end() ? none : it->second;
}

std::string canonical_spec(const JobSpec& s) {
    nlohmann::json j;
    j["command"] = s.command;
    j["target"] = s.target;
    if (s.N) j["N"] = *s.N;
    if (!s.k.empty()) j["k"] = s.k;
    if (s.index) j["index"] = s.index->to_string();
    if (!s.color.empty()) j["color"] = s.color;
    if (s.base) j["base"] = *s.base;
    if (s.M) j["M"] = *s.M;
    if (!s.identity_id.empty()) j["id"] = s.identity_id;
    j["pmin"] = s.pmin;
    j["pmax"] = s.pmax;
    j["strict_skips"] = s.strict_skips;
    j["tool_version"] = kToolVersion;
    return j.dump();
}

std::string spec_hash(const JobSpec& s) {
    std::string text = canonical_spec(s);
    if (!s.catalogue.empty()) text += "\ncatalogue:" + read_file(s.catalogue, "--catalogue");
    if (s.color.rfind("table:", 0) == 0) text += "\ncolor:" + read_file(s.color.substr(6), "--color");
    return fnv1a_hex(text);
}

Check build_check(const JobSpec& s) {
    if (s.pmax < s.pmin) usage("--pmax", "must be >= --pmin");
    if (s.format != "json" && s.format != "csv") usage("--format", "must be json or csv");
    if (!s.checkpoint.empty() && s.every == 0) usage("--every", "required with --checkpoint");
    const auto& targets = targets_of(s.command);
    if (targets.empty()) usage("command", "unknown command '" + s.command + "'");
    if (std::find(targets.begin(), targets.end(), s.target) == targets.end()) {
        usage("target", "unknown " + s.command + " target '" + s.target + "'");
    }
    try {
        if (s.command == "verify") return verify_check(s);
        if (s.command == "search") return search_check(s);
        if (s.command == "stats") return stats_check(s);
        return compute_check(s);
    } catch (const Error& e) {
        // parameter errors raised by the library constructors
        if (e.code() == Errc::InvalidArgument) throw;
        throw Error(Errc::InvalidArgument, std::string(errc_name(e.code())) + ": " + e.what());
    }
}

CongruenceReport run_job(const JobSpec& s, std::optional<u64> halt_after) {
    const Check check = build_check(s);
    RunOptions opt;
    opt.threads = std::max(1u, s.threads);
    opt.strict_skips = s.strict_skips;
    opt.checkpoint_path = s.checkpoint;
    opt.checkpoint_every = s.every;
    opt.fingerprint = spec_hash(s);
    opt.halt_after = halt_after;
    CongruenceReport r = run_check(check, PrimeRange(s.pmin, s.pmax), opt);
    if (is_witness_search(s) && r.rows.size() > 1) r.rows.resize(1);
    if (s.reproducible) r.elapsed_ms = 0;
    return r;
}

std::string render(const CongruenceReport& report, const std::string& format) {
    return format == "csv" ? emit_csv(report) : emit_json(report);
}

} // namespace fmzv
