#include "fmzv/report.hpp"
#include "fmzv/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fmzv {

void CongruenceReport::add(const PrimeOutcome& o) {
    switch (o.verdict) {
    case Verdict::Pass: ++passed; break;
    case Verdict::Fail: failed.push_back({o.p, o.lhs, o.rhs}); break;
    case Verdict::Skip: skipped.push_back({o.p, o.reason}); break;
    }
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
}

void CongruenceReport::append(const CongruenceReport& later) {
    passed += later.passed;
    failed.insert(failed.end(), later.failed.begin(), later.failed.end());
    skipped.insert(skipped.end(), later.skipped.begin(), later.skipped.end());
    rows.insert(rows.end(), later.rows.begin(), later.rows.end());
}

nlohmann::json report_to_json(const CongruenceReport& r) {
    nlohmann::json j;
    j["id"] = r.id;
    j["range"] = {{"lo", r.lo}, {"hi", r.hi}};
    j["passed"] = r.passed;
    j["failed"] = nlohmann::json::array();
    for (const auto& f : r.failed) j["failed"].push_back({{"p", f.p}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    j["skipped"] = nlohmann::json::array();
    for (const auto& s : r.skipped) j["skipped"].push_back({{"p", s.p}, {"reason", s.reason}});
    j["elapsed_ms"] = r.elapsed_ms;
    j["tool_version"] = r.tool_version;
    j["spec_hash"] = r.spec_hash;
    if (!r.columns.empty()) {
        j["columns"] = r.columns;
        j["rows"] = r.rows;
    }
    return j;
}

CongruenceReport report_from_json(const nlohmann::json& j) {
    CongruenceReport r;
    r.id = j.at("id").get<std::string>();
    r.lo = j.at("range").at("lo").get<u64>();
    r.hi = j.at("range").at("hi").get<u64>();
    r.passed = j.at("passed").get<u64>();
    for (const auto& f : j.at("failed"))
        r.failed.push_back({f.at("p").get<u64>(), f.at("lhs").get<u64>(), f.at("rhs").get<u64>()});
    for (const auto& s : j.at("skipped")) r.skipped.push_back({s.at("p").get<u64>(), s.at("reason").get<std::string>()});
    r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.spec_hash = j.at("spec_hash").get<std::string>();
    if (j.contains("columns")) {
        r.columns = j.at("columns").get<std::vector<std::string>>();
        r.rows = j.at("rows").get<std::vector<Row>>();
    }
    return r;
}

std::string emit_json(const CongruenceReport& r) { return report_to_json(r).dump(2) + "\n"; }

CongruenceReport parse_json(const std::string& text) { return report_from_json(nlohmann::json::parse(text)); }

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

void emit_csv(const CongruenceReport& r, std::ostream& out) {
    if (!r.columns.empty()) {
        for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << csv_field(r.columns[i]);
        out << '\n';
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << '\n';
        }
        return;
    }
    out << "p,status,lhs,rhs,reason\n";
    if (r.hi < r.lo) return;
    std::size_t fi = 0, si = 0;
    for (u64 p : sieve_primes(r.lo, r.hi)) {
        if (fi < r.failed.size() && r.failed[fi].p == p) {
            out << p << ",fail," << r.failed[fi].lhs << ',' << r.failed[fi].rhs << ",\n";
            ++fi;
        } else if (si < r.skipped.size() && r.skipped[si].p == p) {
            out << p << ",skip,,," << csv_field(r.skipped[si].reason) << '\n';
            ++si;
        } else {
            out << p << ",pass,,,\n";
        }
    }
}

std::string emit_csv(const CongruenceReport& r) {
    std::ostringstream os;
    emit_csv(r, os);
    return os.str();
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_atomically(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << contents;
        f.flush();
        if (!f) throw std::runtime_error("write to " + tmp + " failed");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace fmzv
