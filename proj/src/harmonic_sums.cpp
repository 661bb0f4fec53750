#include "fmzv/harmonic_sums.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace fmzv {

// ---- Index ---------------------------------------------------------------

Index::Index(std::initializer_list<unsigned> parts) : Index(std::vector<unsigned>(parts)) {}

Index::Index(std::vector<unsigned> parts) : parts_(std::move(parts)) {
    for (unsigned k : parts_) {
        if (k == 0) throw Error(Errc::InvalidArgument, "index entries must be positive");
        weight_ += k;
    }
}

Index Index::parse(std::string_view text) {
    std::vector<unsigned> parts;
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '(')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == ')')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty() || text == "empty") return Index();
    while (!text.empty()) {
        auto comma = text.find(',');
        auto piece = trim(text.substr(0, comma));
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (ec != std::errc() || ptr != piece.data() + piece.size() || v == 0) {
            throw Error(Errc::InvalidArgument, "bad index entry '" + std::string(piece) + "'");
        }
        parts.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return Index(std::move(parts));
}

Index Index::reversed() const { return Index(std::vector<unsigned>(parts_.rbegin(), parts_.rend())); }

Index Index::slice(std::size_t from, std::size_t to) const {
    return Index(std::vector<unsigned>(parts_.begin() + static_cast<std::ptrdiff_t>(from),
                                       parts_.begin() + static_cast<std::ptrdiff_t>(to)));
}

std::string Index::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(parts_[i]);
    }
    return out + ")";
}

std::vector<Index> indices_of_weight(unsigned weight) {
    std::vector<Index> out;
    if (weight == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self, unsigned left) -> void {
        if (left == 0) {
            out.emplace_back(cur);
            return;
        }
        for (unsigned k = 1; k <= left; ++k) {
            cur.push_back(k);
            self(self, left - k);
            cur.pop_back();
        }
    };
    rec(rec, weight);
    return out;
}

// ---- ColorMap ------------------------------------------------------------

std::vector<unsigned> units_mod(unsigned N) {
    std::vector<unsigned> out;
    if (N == 1) return {0};
    for (unsigned a = 1; a < N; ++a)
        if (std::gcd(a, N) == 1) out.push_back(a);
    return out;
}

ColorMap::ColorMap(unsigned level, unsigned arity) : level_(level), arity_(arity) {
    if (level == 0) throw Error(Errc::InvalidArgument, "level must be positive");
    units_ = units_mod(level);
    entries_.assign(units_.size(), std::nullopt);
}

ColorMap ColorMap::bracket(unsigned level, unsigned arity, unsigned j) {
    if (j >= level) throw Error(Errc::InvalidArgument, "[j] needs 0 <= j < N");
    ColorMap c(level, arity);
    for (std::size_t i = 0; i < c.units_.size(); ++i) {
        unsigned a = c.units_[i];
        unsigned v = static_cast<unsigned>((level - (static_cast<u64>(j) * a) % level) % level);
        c.entries_[i] = std::vector<unsigned>(arity, v);
    }
    return c;
}

ColorMap ColorMap::constant(unsigned level, std::vector<unsigned> tuple) {
    ColorMap c(level, static_cast<unsigned>(tuple.size()));
    for (auto& v : tuple) v %= level;
    for (auto& e : c.entries_) e = tuple;
    return c;
}

std::size_t ColorMap::slot(unsigned alpha) const {
    alpha %= level_;
    auto it = std::lower_bound(units_.begin(), units_.end(), alpha);
    if (it == units_.end() || *it != alpha) {
        throw Error(Errc::InvalidArgument,
                    std::to_string(alpha) + " is not a unit mod " + std::to_string(level_));
    }
    return static_cast<std::size_t>(it - units_.begin());
}

const ColorEntry& ColorMap::at(unsigned alpha) const { return entries_[slot(alpha)]; }

const ColorEntry& ColorMap::at_prime(u64 p) const {
    if (level_ > 1 && p % level_ == 0) {
        throw Error(Errc::LevelSharesFactor, std::to_string(p) + " divides level " + std::to_string(level_));
    }
    return entries_[slot(static_cast<unsigned>(p % level_))];
}

void ColorMap::set(unsigned alpha, ColorEntry entry) {
    if (entry) {
        if (entry->size() != arity_) {
            throw Error(Errc::ArityMismatch, "tuple of length " + std::to_string(entry->size()) +
                                                 " for a color map of arity " + std::to_string(arity_));
        }
        for (auto& v : *entry) v %= level_;
    }
    entries_[slot(alpha)] = std::move(entry);
}

bool ColorMap::all_box() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const ColorEntry& e) { return !e; });
}

std::vector<unsigned> ColorMap::flattened() const {
    std::vector<unsigned> out;
    out.reserve(entries_.size() * (arity_ + 1));
    for (const auto& e : entries_) {
        if (!e) {
            out.push_back(0);
            continue;
        }
        out.push_back(1);
        out.insert(out.end(), e->begin(), e->end());
    }
    return out;
}

std::strong_ordering operator<=>(const ColorMap& a, const ColorMap& b) {
    if (auto c = a.level_ <=> b.level_; c != 0) return c;
    if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
    return a.flattened() <=> b.flattened();
}

std::string ColorMap::to_string() const {
    std::string out = "N=" + std::to_string(level_) + "{";
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (i) out += "; ";
        out += std::to_string(units_[i]) + "->";
        if (!entries_[i]) {
            out += "box";
            continue;
        }
        out += "(";
        for (std::size_t t = 0; t < entries_[i]->size(); ++t) {
            if (t) out += ',';
            out += std::to_string((*entries_[i])[t]);
        }
        out += ")";
    }
    return out + "}";
}

// ---- PrimeContext --------------------------------------------------------

PrimeContext::PrimeContext(u64 p) : p_(p) {
    if (p < 2 || p >= (u64{1} << 32)) {
        throw Error(Errc::InvalidArgument, "prime context needs a prime below 2^32, got " + std::to_string(p));
    }
}

u64 PrimeContext::reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(p_) : r);
}

const std::vector<u64>& PrimeContext::inverses() {
    if (inverses_.empty()) {
        std::vector<u64> ms(p_ - 1);
        std::iota(ms.begin(), ms.end(), u64{1});
        auto inv = batch_inv(std::span<const u64>(ms), p_);
        inverses_.reserve(p_);
        inverses_.push_back(0);
        inverses_.insert(inverses_.end(), inv.begin(), inv.end());
    }
    return inverses_;
}

const std::vector<u64>& PrimeContext::inverse_powers(unsigned k) {
    if (k == 1) return inverses();
    auto it = powers_.find(k);
    if (it != powers_.end()) return it->second;
    const auto& base = inverses();
    std::vector<u64> table(base);
    if (k == 0) {
        std::fill(table.begin() + 1, table.end(), 1);
    } else {
        // build from the largest cached power below k to save multiplications
        unsigned have = 1;
        const std::vector<u64>* from = &base;
        for (auto& [e, t] : powers_) {
            if (e < k && e > have) {
                have = e;
                from = &t;
            }
        }
        table = *from;
        if (k - have <= 48) {
            for (; have < k; ++have)
                for (u64 m = 1; m < p_; ++m) table[m] = table[m] * base[m] % p_;
        } else {
            // weights near p come from Bernoulli indices; square-and-multiply per entry
            const u64 e = k % (p_ - 1);
            for (u64 m = 1; m < p_; ++m) table[m] = pow(base[m], e);
        }
    }
    return powers_.emplace(k, std::move(table)).first->second;
}

const std::vector<u64>& PrimeContext::inverse_power_prefix(unsigned k) {
    auto it = prefixes_.find(k);
    if (it != prefixes_.end()) return it->second;
    const auto& pw = inverse_powers(k);
    std::vector<u64> prefix(p_, 0);
    for (u64 m = 1; m < p_; ++m) prefix[m] = add(prefix[m - 1], pw[m]);
    return prefixes_.emplace(k, std::move(prefix)).first->second;
}

// ---- sums ----------------------------------------------------------------

IntervalBounds interval_bounds(u64 j, u64 N, u64 p) {
    // jp/N is never an integer for p not dividing N and 0 < j < N
    const u64 first = j * p / N + 1;
    const u64 last = ((j + 1) * p + N - 1) / N - 1;
    return {first, last};
}

u64 nested_sum(PrimeContext& ctx, const Index& k, u64 first, u64 last, const std::vector<unsigned>* residues,
               unsigned N) {
    const std::size_t r = k.depth();
    if (r == 0) return 1;
    first = std::max<u64>(first, 1);
    last = std::min<u64>(last, ctx.p() - 1);
    if (first > last || last - first + 1 < r) return 0;
    const u64 p = ctx.p();
    const std::size_t len = last - first + 1;

    auto admits = [&](std::size_t slot, u64 m) {
        return residues == nullptr || N == 1 || m % N == (*residues)[slot] % N;
    };

    if (r == 1) {
        if (residues == nullptr || N == 1) {
            const auto& pre = ctx.inverse_power_prefix(k[0]);
            return ctx.sub(pre[last], pre[first - 1]);
        }
        const auto& pw = ctx.inverse_powers(k[0]);
        const u64 want = (*residues)[0] % N;
        u64 m = first + (want + N - first % N) % N;
        u64 acc = 0;
        for (; m <= last; m += N) acc += pw[m];
        return acc % p;
    }

    // chain[m - first] = sum over chains m_1 < ... < m_i = m for the current slot i
    std::vector<u64> chain(len, 0);
    {
        const auto& pw = ctx.inverse_powers(k[0]);
        for (std::size_t t = 0; t < len; ++t)
            if (admits(0, first + t)) chain[t] = pw[first + t];
    }
    for (std::size_t slot = 1; slot < r; ++slot) {
        const auto& pw = ctx.inverse_powers(k[slot]);
        u64 running = 0;
        for (std::size_t t = 0; t < len; ++t) {
            const u64 prev = chain[t];
            const u64 m = first + t;
            chain[t] = admits(slot, m) ? running * pw[m] % p : 0;
            running += prev;
            if (running >= p) running -= p;
        }
    }
    u64 total = 0;
    for (u64 v : chain) {
        total += v;
        if (total >= p) total -= p;
    }
    return total;
}

namespace {

void require_coprime_level(u64 N, u64 p) {
    if (N == 0) throw Error(Errc::InvalidArgument, "level must be positive");
    if (N > 1 && N % p == 0) {
        throw Error(Errc::LevelSharesFactor, std::to_string(p) + " divides level " + std::to_string(N));
    }
}

} // namespace

u64 s_pk(PrimeContext& ctx, u64 j, u64 N, unsigned k) {
    require_coprime_level(N, ctx.p());
    if (j >= N) throw Error(Errc::InvalidArgument, "s_p(j, N) needs 0 <= j < N");
    auto [first, last] = interval_bounds(j, N, ctx.p());
    if (first > last) return 0;
    const auto& pre = ctx.inverse_power_prefix(k);
    return ctx.sub(pre[last], pre[first - 1]);
}

Residue s_pk(u64 j, u64 N, unsigned k, u64 p) {
    PrimeContext ctx(p);
    return Residue(s_pk(ctx, j, N, k), p);
}

u64 zeta_p(PrimeContext& ctx, const Index& k) { return nested_sum(ctx, k, 1, ctx.p() - 1); }

Residue zeta_p(const Index& k, u64 p) {
    PrimeContext ctx(p);
    return Residue(zeta_p(ctx, k), p);
}

u64 zeta_p_colored(PrimeContext& ctx, const Index& k, unsigned N, const std::vector<unsigned>& alpha) {
    require_coprime_level(N, ctx.p());
    if (alpha.size() != k.depth()) {
        throw Error(Errc::ArityMismatch, "color tuple of length " + std::to_string(alpha.size()) +
                                             " for index of depth " + std::to_string(k.depth()));
    }
    return nested_sum(ctx, k, 1, ctx.p() - 1, &alpha, N);
}

Residue zeta_p_colored(const Index& k, unsigned N, const std::vector<unsigned>& alpha, u64 p) {
    PrimeContext ctx(p);
    return Residue(zeta_p_colored(ctx, k, N, alpha), p);
}

u64 zeta_p_colormap(PrimeContext& ctx, const Index& k, const ColorMap& c) {
    if (c.arity() != k.depth()) {
        throw Error(Errc::ArityMismatch, "color map of arity " + std::to_string(c.arity()) +
                                             " for index of depth " + std::to_string(k.depth()));
    }
    const auto& entry = c.at_prime(ctx.p());
    if (!entry) return 0;
    return zeta_p_colored(ctx, k, c.level(), *entry);
}

Residue zeta_p_colormap(const Index& k, const ColorMap& c, u64 p) {
    PrimeContext ctx(p);
    return Residue(zeta_p_colormap(ctx, k, c), p);
}

u64 interval_sum(PrimeContext& ctx, const Index& k, unsigned N, unsigned j) {
    require_coprime_level(N, ctx.p());
    if (j >= N) throw Error(Errc::InvalidArgument, "interval sum needs 0 <= j < N");
    auto [first, last] = interval_bounds(j, N, ctx.p());
    if (k.empty()) return 1;
    return nested_sum(ctx, k, first, last);
}

Residue interval_sum(const Index& k, unsigned N, unsigned j, u64 p) {
    PrimeContext ctx(p);
    return Residue(interval_sum(ctx, k, N, j), p);
}

} // namespace fmzv
