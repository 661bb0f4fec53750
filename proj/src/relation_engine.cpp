#include "fmzv/relation_engine.hpp"
#include "fmzv/bernoulli_lab.hpp"
#include "fmzv/quotient_lab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fmzv {

// ---- rationals -----------------------------------------------------------

Rational parse_rational(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ') t += ch;
    if (!t.empty() && t.front() == '+') t.erase(0, 1);
    Rational q;
    if (t.empty() || q.set_str(t, 10) != 0) throw Error(Errc::InvalidArgument, "bad rational coefficient '" + text + "'");
    if (q.get_den() == 0) throw Error(Errc::InvalidArgument, "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

std::optional<u64> rational_mod(const Rational& q, u64 p) {
    mpz_class num, den;
    mpz_fdiv_r_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), static_cast<unsigned long>(p));
    mpz_fdiv_r_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), static_cast<unsigned long>(p));
    if (den == 0) return std::nullopt;
    return mul_mod(num.get_ui(), inv_mod(den.get_ui(), p), p);
}

// ---- terms ---------------------------------------------------------------

ColoredTerm::ColoredTerm(Rational c, Index k, ColorMap col)
    : coeff(std::move(c)), index(std::move(k)), color(std::move(col)) {
    if (color.arity() != index.depth()) {
        throw Error(Errc::ArityMismatch, "color of arity " + std::to_string(color.arity()) + " on index " +
                                             index.to_string());
    }
    coeff.canonicalize();
}

std::string ColoredTerm::to_string() const {
    return rational_to_string(coeff) + "*zeta_" + std::to_string(level()) + "^" + color.to_string() + "(" +
           index.to_string() + ")";
}

ColoredTerm plain_term(const Index& k, Rational coeff) {
    return ColoredTerm(std::move(coeff), k, ColorMap::bracket(1, static_cast<unsigned>(k.depth()), 0));
}

ColoredTerm bracket_term(const Index& k, unsigned N, unsigned j, Rational coeff) {
    return ColoredTerm(std::move(coeff), k, ColorMap::bracket(N, static_cast<unsigned>(k.depth()), j));
}

namespace {

bool term_less(const ColoredTerm& a, const ColoredTerm& b) {
    if (a.index != b.index) return a.index < b.index;
    return a.color < b.color;
}

bool same_slot(const ColoredTerm& a, const ColoredTerm& b) { return a.index == b.index && a.color == b.color; }

} // namespace

FormalSum::FormalSum(unsigned level, std::vector<ColoredTerm> terms) : level_(level) {
    for (const auto& t : terms) add(t);
}

void FormalSum::add(const ColoredTerm& t) {
    if (t.level() != level_) {
        throw Error(Errc::LevelMismatch, "term of level " + std::to_string(t.level()) + " added to a level " +
                                             std::to_string(level_) + " sum");
    }
    auto it = std::lower_bound(terms_.begin(), terms_.end(), t, term_less);
    if (it != terms_.end() && same_slot(*it, t)) {
        it->coeff += t.coeff;
        it->coeff.canonicalize();
        if (it->coeff == 0) terms_.erase(it);
        return;
    }
    if (t.coeff == 0) return;
    terms_.insert(it, t);
}

FormalSum& FormalSum::operator+=(const FormalSum& other) {
    for (const auto& t : other.terms_) add(t);
    return *this;
}

FormalSum FormalSum::scaled(const Rational& q) const {
    FormalSum out(level_);
    if (q == 0) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) {
        t.coeff *= q;
        t.coeff.canonicalize();
    }
    return out;
}

unsigned FormalSum::max_weight() const noexcept {
    unsigned w = 0;
    for (const auto& t : terms_) w = std::max(w, t.index.weight());
    return w;
}

std::string FormalSum::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) out += (i ? " + " : "") + terms_[i].to_string();
    return out;
}

FormalSum operator+(FormalSum a, const FormalSum& b) {
    a += b;
    return a;
}

FormalSum operator-(const FormalSum& a, const FormalSum& b) { return a + b.scaled(-1); }

// ---- stuffle -------------------------------------------------------------

namespace {

// one step of a quasi-shuffle: take from a, from b, or merge both (-1 = absent)
using Step = std::pair<int, int>;

void quasi_shuffles(int i, int j, int r, int s, std::vector<Step>& cur, std::vector<std::vector<Step>>& out) {
    if (i == r && j == s) {
        out.push_back(cur);
        return;
    }
    if (i < r) {
        cur.push_back({i, -1});
        quasi_shuffles(i + 1, j, r, s, cur, out);
        cur.pop_back();
    }
    if (j < s) {
        cur.push_back({-1, j});
        quasi_shuffles(i, j + 1, r, s, cur, out);
        cur.pop_back();
    }
    if (i < r && j < s) {
        cur.push_back({i, j});
        quasi_shuffles(i + 1, j + 1, r, s, cur, out);
        cur.pop_back();
    }
}

} // namespace

FormalSum stuffle_product(const ColoredTerm& a, const ColoredTerm& b) {
    if (a.level() != b.level()) {
        throw Error(Errc::LevelMismatch, "stuffle of levels " + std::to_string(a.level()) + " and " +
                                             std::to_string(b.level()));
    }
    const unsigned N = a.level();
    const int r = static_cast<int>(a.index.depth()), s = static_cast<int>(b.index.depth());
    std::vector<std::vector<Step>> pats;
    std::vector<Step> cur;
    quasi_shuffles(0, 0, r, s, cur, pats);

    FormalSum out(N);
    const Rational coeff = a.coeff * b.coeff;
    for (const auto& pat : pats) {
        std::vector<unsigned> parts;
        for (auto [i, j] : pat) parts.push_back((i >= 0 ? a.index[i] : 0) + (j >= 0 ? b.index[j] : 0));
        ColorMap h(N, static_cast<unsigned>(pat.size()));
        for (unsigned alpha : h.units()) {
            const ColorEntry& f = a.color.at(alpha);
            const ColorEntry& g = b.color.at(alpha);
            if (!f || !g) continue; // box
            std::vector<unsigned> tuple;
            bool box = false;
            for (auto [i, j] : pat) {
                if (i >= 0 && j >= 0) {
                    if ((*f)[i] != (*g)[j]) {
                        box = true;
                        break;
                    }
                    tuple.push_back((*f)[i]);
                } else {
                    tuple.push_back(i >= 0 ? (*f)[i] : (*g)[j]);
                }
            }
            if (!box) h.set(alpha, tuple);
        }
        out.add(ColoredTerm(coeff, Index(parts), h));
    }
    return out;
}

FormalSum stuffle_product(const FormalSum& a, const FormalSum& b) {
    if (a.level() != b.level()) {
        throw Error(Errc::LevelMismatch, "stuffle of levels " + std::to_string(a.level()) + " and " +
                                             std::to_string(b.level()));
    }
    FormalSum out(a.level());
    for (const auto& x : a.terms())
        for (const auto& y : b.terms()) out += stuffle_product(x, y);
    return out;
}

// ---- reversal and lifts --------------------------------------------------

SignedTerm reverse_transform(const ColoredTerm& t) {
    const unsigned N = t.level();
    const std::size_t r = t.index.depth();
    ColorMap rc(N, static_cast<unsigned>(r));
    for (unsigned alpha : rc.units()) {
        const ColorEntry& e = t.color.at(alpha);
        if (!e) continue;
        std::vector<unsigned> tuple(r);
        for (std::size_t i = 0; i < r; ++i) tuple[i] = (alpha % N + N - (*e)[r - 1 - i]) % N;
        rc.set(alpha, tuple);
    }
    const int sign = (t.index.weight() % 2 == 0) ? 1 : -1;
    return SignedTerm{sign, ColoredTerm(t.coeff, t.index.reversed(), rc)};
}

FormalSum lift_level(const ColoredTerm& t, unsigned M) {
    const unsigned N = t.level();
    if (M == 0 || M % N != 0) {
        throw Error(Errc::LevelMismatch, "level " + std::to_string(N) + " does not divide " + std::to_string(M));
    }
    const unsigned step = M / N;
    const std::size_t r = t.index.depth();
    FormalSum out(M);
    std::vector<unsigned> js(r, 0);
    while (true) {
        ColorMap c(M, static_cast<unsigned>(r));
        for (unsigned beta : c.units()) {
            const ColorEntry& e = t.color.at(beta % N);
            if (!e) continue;
            std::vector<unsigned> tuple(r);
            for (std::size_t i = 0; i < r; ++i) tuple[i] = (*e)[i] + js[i] * N;
            c.set(beta, tuple);
        }
        out.add(ColoredTerm(t.coeff, t.index, c));
        std::size_t i = 0;
        while (i < r && ++js[i] == step) js[i++] = 0;
        if (i == r) break;
    }
    return out;
}

FormalSum lift_level(const FormalSum& s, unsigned M) {
    FormalSum out(M);
    for (const auto& t : s.terms()) out += lift_level(t, M);
    return out;
}

// ---- products ------------------------------------------------------------

unsigned ProductTerm::weight() const {
    unsigned w = 0;
    for (const auto& f : factors) {
        if (auto z = std::get_if<ZetaAtom>(&f)) w += z->index.weight();
        else if (auto fz = std::get_if<FrakZAtom>(&f)) w += fz->k;
        else w += 1;
    }
    return w;
}

ProductSum::ProductSum(const FormalSum& s) {
    for (const auto& t : s.terms()) terms.push_back({t.coeff, {ZetaAtom{t.index, t.color}}});
}

ProductSum::ProductSum(const ColoredTerm& t) { terms.push_back({t.coeff, {ZetaAtom{t.index, t.color}}}); }

unsigned ProductSum::max_weight() const {
    unsigned w = 0;
    for (const auto& t : terms) w = std::max(w, t.weight());
    return w;
}

unsigned ProductSum::level() const {
    unsigned L = 1;
    for (const auto& t : terms)
        for (const auto& f : t.factors)
            if (auto z = std::get_if<ZetaAtom>(&f)) L = std::lcm(L, z->color.level());
    return L;
}

std::vector<u64> ProductSum::log_bases() const {
    std::vector<u64> out;
    for (const auto& t : terms)
        for (const auto& f : t.factors)
            if (auto l = std::get_if<LogAtom>(&f)) out.push_back(l->base);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool ProductSum::zeta_only() const {
    for (const auto& t : terms)
        for (const auto& f : t.factors)
            if (!std::holds_alternative<ZetaAtom>(f)) return false;
    return true;
}

std::string ProductSum::to_string() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        os << (i ? " + " : "") << rational_to_string(terms[i].coeff);
        for (const auto& f : terms[i].factors) {
            if (auto z = std::get_if<ZetaAtom>(&f)) {
                os << "*zeta_" << z->color.level() << "^" << z->color.to_string() << "(" << z->index.to_string() << ")";
            } else if (auto fz = std::get_if<FrakZAtom>(&f)) {
                os << "*Z(" << fz->k << ")";
            } else {
                os << "*log(" << std::get<LogAtom>(f).base << ")";
            }
        }
    }
    return os.str();
}

FormalSum expand(const ProductSum& s) {
    if (!s.zeta_only()) throw Error(Errc::InvalidArgument, "only zeta products expand into formal sums");
    const unsigned L = s.level();
    FormalSum out(L);
    for (const auto& t : s.terms) {
        FormalSum acc(L, {ColoredTerm(t.coeff, Index{}, ColorMap::constant(L, {}))});
        for (const auto& f : t.factors) {
            const auto& z = std::get<ZetaAtom>(f);
            acc = stuffle_product(acc, lift_level(ColoredTerm(1, z.index, z.color), L));
        }
        out += acc;
    }
    return out;
}

ProductSum decompose_level_N(const Index& k, unsigned N) {
    if (N == 0) throw Error(Errc::InvalidArgument, "level must be positive");
    const std::size_t r = k.depth();
    ProductSum out;
    Rational coeff = 1;
    for (unsigned i = 0; i < k.weight(); ++i) coeff *= N;
    // cuts 0 = i_0 <= i_1 <= ... <= i_{N-1} <= i_N = r
    std::vector<std::size_t> cut(N + 1, 0);
    cut[N] = r;
    while (true) {
        ProductTerm term{coeff, {}};
        for (unsigned j = 0; j < N; ++j) {
            Index block = k.slice(cut[j], cut[j + 1]);
            const auto depth = static_cast<unsigned>(block.depth());
            term.factors.push_back(ZetaAtom{std::move(block), ColorMap::bracket(N, depth, j)});
        }
        out.terms.push_back(std::move(term));
        // next non-decreasing tuple (cut[1..N-1]) in lexicographic order
        int pos = static_cast<int>(N) - 1;
        while (pos >= 1 && cut[pos] == r) --pos;
        if (pos < 1) break;
        ++cut[pos];
        for (unsigned q = pos + 1; q < N; ++q) cut[q] = cut[pos];
    }
    return out;
}

ProductSum kmy_level2_split(const Index& k) {
    const std::size_t r = k.depth();
    ProductSum out;
    Rational scale = 1;
    for (unsigned i = 0; i < k.weight(); ++i) scale *= 2;
    for (std::size_t i = 0; i <= r; ++i) {
        Index head = k.slice(0, i);
        Index tail = k.slice(i, r).reversed();
        const Rational coeff = (tail.weight() % 2 == 0) ? scale : Rational(-scale);
        const auto dh = static_cast<unsigned>(head.depth()), dt = static_cast<unsigned>(tail.depth());
        out.terms.push_back({coeff,
                             {ZetaAtom{std::move(head), ColorMap::bracket(2, dh, 0)},
                              ZetaAtom{std::move(tail), ColorMap::bracket(2, dt, 0)}}});
    }
    return out;
}

// ---- evaluation ----------------------------------------------------------

namespace {

struct Shape {
    unsigned weight = 0;
    unsigned level = 1;
    std::vector<u64> bases;
};

Shape shape_of(std::initializer_list<const ProductSum*> sides) {
    Shape s;
    for (const ProductSum* side : sides) {
        s.weight = std::max(s.weight, side->max_weight());
        s.level = std::lcm(s.level, side->level());
        for (u64 b : side->log_bases()) s.bases.push_back(b);
    }
    return s;
}

std::optional<std::string> precondition_skip(u64 p, const Shape& s) {
    if (s.level > 1 && s.level % p == 0) return std::string(skip::kLevelFactor);
    if (!s.bases.empty()) {
        if (p == 2) return std::string(skip::kEvenPrime);
        for (u64 b : s.bases)
            if (b % p == 0) return std::string(skip::kBaseFactor);
    }
    if (p <= u64{s.weight} + 2) return std::string(skip::kWeightBound);
    return std::nullopt;
}

// nullopt when a coefficient denominator vanishes mod p
std::optional<u64> evaluate_unchecked(PrimeContext& ctx, const ProductSum& s) {
    const u64 p = ctx.p();
    u64 total = 0;
    for (const auto& t : s.terms) {
        const auto c = rational_mod(t.coeff, p);
        if (!c) return std::nullopt;
        u64 v = *c;
        for (const auto& f : t.factors) {
            if (v == 0) break;
            if (auto z = std::get_if<ZetaAtom>(&f)) v = ctx.mul(v, zeta_p_colormap(ctx, z->index, z->color));
            else if (auto fz = std::get_if<FrakZAtom>(&f)) v = ctx.mul(v, frak_z(ctx, fz->k));
            else v = ctx.mul(v, fermat_quotient_value(std::get<LogAtom>(f).base, p));
        }
        total = ctx.add(total, v);
    }
    return total;
}

} // namespace

Evaluation evaluate(PrimeContext& ctx, const ProductSum& s) {
    if (auto why = precondition_skip(ctx.p(), shape_of({&s}))) return {std::nullopt, *why};
    auto v = evaluate_unchecked(ctx, s);
    if (!v) return {std::nullopt, skip::kDenominator};
    return {v, {}};
}

Check identity_check(const Identity& identity) {
    Check c;
    c.id = identity.id;
    c.declared_skips = {skip::kLevelFactor, skip::kWeightBound, skip::kDenominator};
    const Shape shape = shape_of({&identity.lhs, &identity.rhs});
    if (!shape.bases.empty()) {
        c.declared_skips.push_back(skip::kEvenPrime);
        c.declared_skips.push_back(skip::kBaseFactor);
    }
    c.eval = [identity, shape](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (auto why = precondition_skip(p, shape)) return PrimeOutcome::skipped(p, *why);
        const auto lhs = evaluate_unchecked(ctx, identity.lhs);
        const auto rhs = evaluate_unchecked(ctx, identity.rhs);
        if (!lhs || !rhs) return PrimeOutcome::skipped(p, skip::kDenominator);
        return PrimeOutcome::compare(p, *lhs, *rhs);
    };
    return c;
}

CongruenceReport verify_formal_identity(const Identity& identity, const PrimeRange& range, const RunOptions& opt) {
    return run_check(identity_check(identity), range, opt);
}

CongruenceReport verify_formal_identity(const FormalSum& lhs, const FormalSum& rhs, const PrimeRange& range,
                                        const RunOptions& opt) {
    return verify_formal_identity(Identity{lhs.to_string() + " = " + rhs.to_string(), lhs, rhs}, range, opt);
}

Check jsum_check(const Index& k, unsigned N, unsigned j) {
    if (N == 0 || j >= N) throw Error(Errc::InvalidArgument, "j-sum needs 0 <= j < N");
    Check c;
    c.id = "jsum(k=" + k.to_string() + ",N=" + std::to_string(N) + ",j=" + std::to_string(j) + ")";
    c.declared_skips = {skip::kLevelFactor};
    const ColorMap color = ColorMap::bracket(N, static_cast<unsigned>(k.depth()), j);
    c.eval = [k, N, j, color](PrimeContext& ctx) {
        const u64 p = ctx.p();
        if (N > 1 && N % p == 0) return PrimeOutcome::skipped(p, skip::kLevelFactor);
        const u64 lhs = interval_sum(ctx, k, N, j);
        const u64 rhs = ctx.mul(ctx.pow(N % p, k.weight()), zeta_p_colormap(ctx, k, color));
        return PrimeOutcome::compare(p, lhs, rhs);
    };
    return c;
}

CongruenceReport verify_lemma_jsum(const Index& k, unsigned N, unsigned j, const PrimeRange& range,
                                   const RunOptions& opt) {
    return run_check(jsum_check(k, N, j), range, opt);
}

// ---- identity builders ---------------------------------------------------

Identity reversal_identity(const ColoredTerm& t) {
    SignedTerm rev = reverse_transform(t);
    rev.term.coeff *= rev.sign;
    return Identity{"reversal(" + t.to_string() + ")", ProductSum(t), ProductSum(rev.term)};
}

Identity decompose_identity(const Index& k, unsigned N) {
    return Identity{"decompose(k=" + k.to_string() + ",N=" + std::to_string(N) + ")", ProductSum(plain_term(k)),
                    decompose_level_N(k, N)};
}

Identity kmy_identity(const Index& k) {
    return Identity{"kmy(k=" + k.to_string() + ")", ProductSum(plain_term(k)), kmy_level2_split(k)};
}

Identity levels_identity(const ColoredTerm& t, unsigned M) {
    return Identity{"levels(" + t.to_string() + ",M=" + std::to_string(M) + ")", ProductSum(t),
                    ProductSum(lift_level(t, M))};
}

Identity stuffle_identity(const ColoredTerm& a, const ColoredTerm& b) {
    ProductSum lhs;
    lhs.terms.push_back({a.coeff * b.coeff, {ZetaAtom{a.index, a.color}, ZetaAtom{b.index, b.color}}});
    return Identity{"stuffle(" + a.to_string() + "," + b.to_string() + ")", lhs, ProductSum(stuffle_product(a, b))};
}

} // namespace fmzv
