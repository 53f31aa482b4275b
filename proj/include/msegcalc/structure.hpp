#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msegcalc/calculus.hpp"

namespace msegcalc {

struct StructureReport {
    bool known = false;
    std::string reason;
    GrothElt constituents;
    std::optional<Expr> socle;
    std::optional<Expr> cosocle;
    std::vector<Expr> sequence; // bottom (sub) to top (quotient), when a filtration is known
    std::optional<bool> indecomposable;
    std::optional<bool> semisimple;
    std::string descriptor;

    int length() const { return constituents.total(); }
    bool length_exact() const { return known && !constituents.lower_bound(); }
};

inline StructureReport unknown_report(std::string why) {
    StructureReport r;
    r.reason = std::move(why);
    return r;
}

namespace detail {

inline Expr zkey(Multisegment m, const TagSet& tag, const ModContext& ctx) {
    return key_of(Irreducible::Z(std::move(m), tag), ctx);
}

inline StructureReport irreducible_report(const Expr& key, std::string why) {
    StructureReport r;
    r.known = true;
    r.reason = std::move(why);
    r.constituents.add(key);
    r.socle = key;
    r.cosocle = key;
    r.sequence = {key};
    r.indecomposable = true;
    r.semisimple = true;
    return r;
}

// Swaps the roles of sub and quotient: Q(chi x rho) = S(rho x chi).
inline StructureReport reversed(StructureReport r) {
    std::swap(r.socle, r.cosocle);
    std::reverse(r.sequence.begin(), r.sequence.end());
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Z(D) x chi

// Structure of Z(d) x chi, or chi x Z(d) when chi_first.
inline StructureReport structure_Z_times_char(const Segment& d, const TagSet& ztag, const Character& chi,
                                              const ModContext& ctx, bool chi_first = false) {
    using detail::zkey;
    if (chi.degree != 1) throw std::invalid_argument("structure_Z_times_char: chi must be a character of G_1");
    Expr prod{Irreducible::Z({d}, ztag), char_rep(chi)};
    bool same_line = chi.tag == ztag && (chi.exponent - d.a).integral();
    if (!same_line)
        return detail::irreducible_report(irreducible_key(prod, ctx), "disjoint cuspidal lines");

    int n = d.length() + 1;
    HalfInt x = chi.exponent;
    StructureReport r;
    r.known = true;

    if (ctx.q_is_one()) {
        // Every such product is a twist of V_n = nu_{n-1}^{1/2} x nu^{(n+1)/2}.
        HalfInt s = d.center() - HalfInt::halves(1);
        Character tw{ztag, s, 1};
        Expr pi = key_of(twist(make_Pi(n), tw), ctx);
        Expr triv = key_of(twist(one(n), tw), ctx);
        r.constituents.add(pi);
        if (divides_f(ctx.ell(), n)) {
            r.constituents.add(triv, 2);
            r.socle = triv;
            r.cosocle = triv;
            r.sequence = {triv, pi, triv};
            r.indecomposable = true;
            r.semisimple = false;
            r.reason = "q = 1, ell | n: indecomposable of length 3";
            r.descriptor = "reduction mod K(1): indecomposable, length 3, trivial twice and pi_n once";
        } else {
            r.constituents.add(triv);
            r.indecomposable = false;
            r.semisimple = true;
            r.reason = "q = 1, ell does not divide n: semisimple of length 2";
            r.descriptor = "reduction mod K(1): semisimple, trivial plus pi_n";
        }
        return r;
    }

    bool right = congruent(x, d.b + 1, ctx);
    bool left = congruent(x, d.a - 1, ctx);
    if (!right && !left)
        return detail::irreducible_report(irreducible_key(prod, ctx), "segment and character not linked");

    Expr mixed = zkey({d, Segment::point(x)}, ztag, ctx);
    Expr up = zkey({Segment(d.a, d.b + 1)}, ztag, ctx);
    Expr down = zkey({Segment(d.a - 1, d.b)}, ztag, ctx);
    r.indecomposable = true;
    r.semisimple = false;
    if (right && left) {
        r.constituents.add(up);
        r.constituents.add(mixed);
        r.constituents.add(down);
        r.socle = up;
        r.cosocle = down;
        r.reason = "chi at both ends (e | n): length 3";
    } else if (right) {
        r.constituents.add(up);
        r.constituents.add(mixed);
        r.socle = up;
        r.cosocle = mixed;
        r.sequence = {up, mixed};
        r.reason = "chi extends the segment on the right: length 2";
    } else {
        r.constituents.add(mixed);
        r.constituents.add(down);
        r.socle = mixed;
        r.cosocle = down;
        r.sequence = {mixed, down};
        r.reason = "chi extends the segment on the left: length 2";
    }
    return chi_first ? detail::reversed(r) : r;
}

// ---------------------------------------------------------------------------
// Z([a,b]) x Z([0,1])

namespace detail {

struct Z01Case {
    int id;
    Multisegment m;
    bool exact;
};

inline std::vector<Z01Case> z01_cases(std::int64_t a, std::int64_t b, const ModContext& ctx) {
    auto cong = [&](std::int64_t u, std::int64_t v) { return congruent(HalfInt::of(u), HalfInt::of(v), ctx); };
    bool e2 = !ctx.e_infinite() && ctx.e() == 2;
    auto I = [](std::int64_t u, std::int64_t v) { return Segment::ints(u, v); };
    std::vector<Z01Case> cs;
    cs.push_back({1, {I(a, b), I(0, 1)}, true});
    if (cong(b, 0)) cs.push_back({2, {I(a, b + 1), I(0, 0)}, true});
    if (cong(a, 1)) cs.push_back({3, {I(a - 1, b), I(1, 1)}, true});
    if (cong(b, -1)) cs.push_back({4, {I(a, b + 2)}, !e2});
    if (cong(a, 2)) cs.push_back({5, {I(a - 2, b)}, !e2});
    if (cong(b, 0) && cong(a, 1)) cs.push_back({6, {I(a - 1, b + 1)}, !e2});
    // e = 2: Z([a,b+1]) x 1 (b even) and Z([a-1,b]) x nu (a odd) contribute
    // the long segments for either parity.
    if (e2 && cong(b, 0)) cs.push_back({7, {I(a, b + 2)}, false});
    if (e2 && cong(a, 1)) cs.push_back({8, {I(a - 2, b)}, false});
    return cs;
}

} // namespace detail

// Subquotients of Z([a,b]) x Z([0,1]); the same class reached by two cases
// counts once, and is pinned if either case pins it. Unpinned
// multiplicities carry the lower-bound flag.
inline GrothElt subquotients_Z_times_Z01(std::int64_t a, std::int64_t b, const ModContext& ctx,
                                         const TagSet& tag = {}) {
    if (!ctx.e_greater_one()) throw std::invalid_argument("subquotients_Z_times_Z01 needs e > 1");
    if (a > b) throw std::invalid_argument("subquotients_Z_times_Z01 needs a <= b");
    GrothElt g;
    std::set<Expr> seen;
    for (const auto& c : detail::z01_cases(a, b, ctx)) {
        Expr k = detail::zkey(c.m, tag, ctx);
        if (!seen.insert(k).second) {
            if (c.exact) g.at_least.erase(k);
            continue;
        }
        if (c.exact)
            g.add(k);
        else
            g.add_lower_bound(k);
    }
    return g;
}

// Z(d) x Z(d2) with d2 of length 2 on the same line, by twisting to the
// Z([0,1]) frame.
inline std::optional<GrothElt> seg_times_pair(const Segment& d, const Segment& d2, const TagSet& tag,
                                              const ModContext& ctx) {
    if (d2.length() != 2 || !(d.a - d2.a).integral()) return std::nullopt;
    if (!ctx.e_greater_one()) return std::nullopt;
    HalfInt c = d2.a;
    GrothElt g = subquotients_Z_times_Z01((d.a - c).as_int(), (d.b - c).as_int(), ctx);
    return twist(g, Character{tag, c, 1}, ctx);
}

// ---------------------------------------------------------------------------
// L([x,x+1]) x nu^y (f != 2)

inline StructureReport structure_L_times_char(HalfInt x, const TagSet& ltag, const Character& chi,
                                              const ModContext& ctx, bool chi_first = false) {
    using detail::zkey;
    Irreducible L = make_L(Segment(x, x + 1), ctx, ltag);
    Expr prod{L, char_rep(chi)};
    auto iv = is_irreducible_product(prod, ctx);
    if (iv.status == Tri::Irreducible) return detail::irreducible_report(*iv.key, iv.reason);
    if (!ctx.e_greater_one()) return unknown_report("q = 1: L x character not catalogued");
    HalfInt y = chi.exponent;
    Character s{ltag, {}, 1};
    auto tw = [&](const Irreducible& p, HalfInt k) {
        s.exponent = k;
        return key_of(twist(p, s), ctx);
    };
    StructureReport r;
    r.known = true;
    r.indecomposable = true;
    r.semisimple = false;
    Irreducible st3 = make_St(3);
    if (!ctx.e_infinite() && ctx.e() == 3) {
        // twist of St_2 nu^{-1/2} x nu, length 4 with a cuspidal St_3
        HalfInt k = x + 1;
        r.constituents.add(tw(nu_n(3, HalfInt::of(1)), k));
        r.constituents.add(tw(make_Pi(3), k));
        r.constituents.add(tw(twist(make_Pi(3), HalfInt::of(1)), k));
        r.constituents.add(tw(st3, k));
        r.reason = "e = 3: St_2 nu^{-1/2} x nu has length 4";
        return r;
    }
    if (congruent(y, x + 2, ctx)) {
        // twist of St_2 nu^{-1/2} x nu = Pi_3^* nu + St_3, quotient St_3
        HalfInt k = x + 1;
        Expr a = tw(twist(make_Pi_dual(3), HalfInt::of(1)), k);
        Expr b = tw(st3, k);
        r.constituents.add(a);
        r.constituents.add(b);
        r.socle = a;
        r.cosocle = b;
        r.sequence = {a, b};
        r.reason = "character juxtaposed on the right of L: Lambda_3^* nu + St_3";
    } else {
        // twist of St_2 nu^{3/2} x 1 = St_3 nu + Pi_3, sub St_3 nu
        HalfInt k = x - 1;
        Expr a = tw(twist(st3, HalfInt::of(1)), k);
        Expr b = tw(make_Pi(3), k);
        r.constituents.add(a);
        r.constituents.add(b);
        r.socle = a;
        r.cosocle = b;
        r.sequence = {a, b};
        r.reason = "character juxtaposed on the left of L: St_3 nu + Lambda_3";
    }
    return chi_first ? detail::reversed(r) : r;
}

// ---------------------------------------------------------------------------
// V_n

inline Expr V_n_expr(int n) {
    return Expr{nu_n(n - 1, HalfInt::halves(1)), nu_n(1, HalfInt::halves(n + 1))};
}

inline StructureReport V_n_structure(int n, const ModContext& ctx) {
    if (n < 2) throw std::invalid_argument("V_n needs n >= 2");
    Segment d = segment_of_char(n - 1, HalfInt::halves(1));
    StructureReport r = structure_Z_times_char(d, {}, Character::nu(HalfInt::halves(n + 1)), ctx);
    if (ctx.q_is_one()) return r;
    r.descriptor = divides_f(ctx.f(), n) ? "cosocle 1_n, socle nu_n, Pi_n in the middle"
                                         : "cosocle Lambda_n = Pi_n, socle nu_n";
    return r;
}

// ---------------------------------------------------------------------------
// Semisimplification

namespace detail {

struct SSResult {
    std::optional<GrothElt> value;
    std::string reason;
};

// A factor of a product: characters and segments, L-pairs, anything else.
inline std::optional<GrothElt> resolve_pair(const Irreducible& p, const Irreducible& q, const ModContext& ctx,
                                            std::string& why) {
    Expr prod{p, q};
    auto iv = is_irreducible_product(prod, ctx);
    if (iv.status == Tri::Irreducible) {
        why = "irreducible: " + iv.reason;
        return single(*iv.key);
    }
    if (p.is_segment() && q.is_segment() && p.tag == q.tag) {
        const Segment& s = p.m.segs[0];
        const Segment& t = q.m.segs[0];
        if (s.length() == 1 || t.length() == 1) {
            const Segment& d = s.length() == 1 ? t : s;
            const Segment& c = s.length() == 1 ? s : t;
            auto r = structure_Z_times_char(d, p.tag, Character{p.tag, c.a, 1}, ctx);
            why = "segment x character: " + r.reason;
            return r.constituents;
        }
        if (s.length() == 2 || t.length() == 2) {
            const Segment& d = t.length() == 2 ? s : t;
            const Segment& c = t.length() == 2 ? t : s;
            if (auto g = seg_times_pair(d, c, p.tag, ctx)) {
                why = "segment x length-2 segment";
                return g;
            }
        }
        return std::nullopt;
    }
    auto lp = as_L_pair(p, ctx);
    auto lq = as_L_pair(q, ctx);
    if (lp && q.is_segment() && q.degree() == 1) {
        auto r = structure_L_times_char(*lp, p.tag, *as_character(q), ctx);
        if (r.known) {
            why = "L x character: " + r.reason;
            return r.constituents;
        }
    }
    if (lq && p.is_segment() && p.degree() == 1) {
        auto r = structure_L_times_char(*lq, q.tag, *as_character(p), ctx, true);
        if (r.known) {
            why = "L x character: " + r.reason;
            return r.constituents;
        }
    }
    return std::nullopt;
}

// Pairwise-unlinked Z-labels are products of their segments.
inline std::vector<Irreducible> flatten_factors(const Expr& x, const ModContext& ctx) {
    std::vector<Irreducible> out;
    for (const auto& f : x.factors) {
        if (f.degree() == 0) continue;
        if (f.is_Z() && f.m.size() > 1 && !as_L_pair(f, ctx) && !is_cuspidal(f, ctx) &&
            pairwise_unlinked(f.m, ctx)) {
            for (const auto& s : f.m.segs) out.push_back(Irreducible::Z({s}, f.tag));
        } else {
            out.push_back(f);
        }
    }
    return out;
}

inline SSResult ss_rec(const std::vector<Irreducible>& fs, const ModContext& ctx,
                       std::map<Expr, SSResult>& memo, int depth);

inline SSResult ss_rec(const std::vector<Irreducible>& fs, const ModContext& ctx,
                       std::map<Expr, SSResult>& memo, int depth) {
    Expr key = product_key(Expr(fs), ctx);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    SSResult res;
    if (fs.size() <= 1) {
        res.value = single(key);
        res.reason = "single irreducible";
        return memo[key] = res;
    }
    auto iv = is_irreducible_product(Expr(fs), ctx);
    if (iv.status == Tri::Irreducible) {
        res.value = single(*iv.key);
        res.reason = "irreducible: " + iv.reason;
        return memo[key] = res;
    }
    if (fs.size() == 2) {
        std::string why;
        if (auto g = resolve_pair(fs[0], fs[1], ctx, why)) {
            res.value = *g;
            res.reason = why;
        } else {
            res.reason = "no catalogued decomposition for " + render(Expr(fs));
        }
        return memo[key] = res;
    }
    if (depth > 12) {
        res.reason = "recursion limit";
        return memo[key] = res;
    }
    // [F_1 x ... x F_r] = sum over [F_i x F_j] x rest, trying each pair.
    std::string last;
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j) {
            std::string why;
            auto g = resolve_pair(fs[i], fs[j], ctx, why);
            if (!g) continue;
            std::vector<Irreducible> rest;
            for (std::size_t k = 0; k < fs.size(); ++k)
                if (k != i && k != j) rest.push_back(fs[k]);
            GrothElt total;
            bool ok = true;
            for (const auto& [term, mult] : g->terms) {
                std::vector<Irreducible> next = flatten_factors(term, ctx);
                next.insert(next.end(), rest.begin(), rest.end());
                SSResult sub = ss_rec(next, ctx, memo, depth + 1);
                if (!sub.value) {
                    ok = false;
                    last = sub.reason;
                    break;
                }
                bool flag = g->at_least.count(term) > 0;
                for (const auto& [k, v] : sub.value->terms) {
                    if (flag || sub.value->at_least.count(k))
                        total.add_lower_bound(k, v * mult);
                    else
                        total.add(k, v * mult);
                }
            }
            if (ok) {
                res.value = total;
                res.reason = "additivity over " + render(Expr{fs[i], fs[j]}) + ": " + why;
                return memo[key] = res;
            }
        }
    res.reason = last.empty() ? "no catalogued pair decomposition" : last;
    return memo[key] = res;
}

} // namespace detail

struct Semisimplification {
    std::optional<GrothElt> value;
    std::string reason;
};

inline Semisimplification semisimplify(const Expr& x, const ModContext& ctx) {
    std::map<Expr, detail::SSResult> memo;
    auto fs = detail::flatten_factors(x, ctx);
    if (fs.empty()) return {unit_elt(), "unit"};
    auto r = detail::ss_rec(fs, ctx, memo, 0);
    return {r.value, r.reason};
}

// ---------------------------------------------------------------------------
// Unique irreducible quotient and subrepresentation

struct QResult {
    std::optional<Expr> rep;
    std::string reason;
};

namespace detail {

inline std::optional<Character> char1(const Irreducible& x) {
    auto c = as_character(x);
    if (c && c->degree == 1) return c;
    return std::nullopt;
}

inline bool ceq(const Character& x, const Character& y, const ModContext& ctx) {
    return char_equal(x, y, ctx);
}

inline Character nuc(HalfInt k, const TagSet& tag = {}) { return Character{tag, k, 1}; }

inline Character mul(const Character& c, HalfInt k) { return Character{c.tag, c.exponent + k, 1}; }

// Normalized (1_{n-2} x mu x chi) . nu^s, either order of the first two.
inline QResult q_W(int n, const Character& mu, const Character& chi, const ModContext& ctx) {
    auto half = [](std::int64_t k) { return HalfInt::halves(k); };
    auto is = [&](const Character& c, HalfInt k) { return ceq(c, nuc(k), ctx); };
    if (is(mu, half(-(n - 1))) || is(mu, half(n - 1))) return {std::nullopt, ""};
    bool e2 = !ctx.e_infinite() && ctx.e() == 2;
    auto irr = [&](const Expr& e) { return irreducible_key(e, ctx); };
    if (ceq(chi, mul(mu, half(2)), ctx) && !e2) {
        // Y(mu) = Q(1_{n-2} x St_2 mu nu^{1/2})
        if (is(mu, half(-(n + 1))) && !e_divides(ctx, n))
            return {key_of(make_Lambda_dual(n, ctx), ctx), "W(mu nu), mu = nu^{-(n+1)/2}: Lambda_n^*"};
        if (!is(mu, half(-(n + 1)))) {
            Irreducible st = twist(make_St(2), mul(mu, half(1)));
            Expr e{one(n - 2), st};
            if (is_irreducible_product(e, ctx).status == Tri::Irreducible)
                return {irr(e), "W(mu nu): 1_{n-2} x St_2 mu nu^{1/2}"};
        }
    }
    if ((ceq(chi, mul(mu, half(-2)), ctx) || (e2 && ceq(chi, mul(mu, half(2)), ctx))) &&
        is(mu, half(-(n - 3)))) {
        // P(mu) = Q(1_{n-2} x 1_2 mu nu^{-1/2})
        if (!e_divides(ctx, n - 2) && !e2)
            return {irr(Expr{nu_n(n - 1, half(-1)), nu_n(1, half(-(n - 3)))}),
                    "P(nu^{-(n-3)/2}): nu_{n-1}^{-1/2} x nu^{-(n-3)/2}"};
        if (e2 && n % 2 == 1) return {key_of(make_Lambda_dual(n, ctx), ctx), "P(nu^{-(n-3)/2}), e = 2: Lambda_n^*"};
    }
    if (is(chi, half(-(n - 1)))) {
        if (!is(mu, half(-(n + 1)))) {
            Expr e{nu_n(n - 1, half(-1)), char_rep(mu)};
            return {irr(e), "W(nu^{-(n-1)/2}): nu_{n-1}^{-1/2} x mu"};
        }
        if (!e_divides(ctx, n))
            return {key_of(make_Lambda_dual(n, ctx), ctx), "W(nu^{-(n-1)/2}), mu = nu^{-(n+1)/2}: Lambda_n^*"};
    }
    return {std::nullopt, ""};
}

// U(tau) = Q(nu_{n-3}^{1/2} x tau x nu^{-(n-3)/2}); tau given as factors.
inline QResult q_U(int n, const std::vector<Irreducible>& tau, const ModContext& ctx) {
    auto half = [](std::int64_t k) { return HalfInt::halves(k); };
    Expr tail{one(n - 2)};
    Expr t(tau);
    auto irr = [&](const Expr& e) { return irreducible_key(e, ctx); };
    if (tau.size() == 1 && is_cuspidal(tau[0], ctx))
        return {irr(t * tail), "U(tau), tau cuspidal: tau x 1_{n-2}"};
    if (tau.size() == 1) {
        auto lx = as_L_pair(tau[0], ctx);
        if (!lx || (!ctx.e_infinite() && ctx.e() <= 2)) return {std::nullopt, ""};
        Character mu = nuc(*lx, tau[0].tag);
        auto is = [&](HalfInt k) { return ceq(mu, nuc(k), ctx); };
        if (is(half(-(n - 1))) || is(half(n - 1)) || is(half(-(n + 1)))) return {std::nullopt, ""};
        return {irr(t * tail), "U(St_2 mu nu^{1/2}): tau x 1_{n-2}"};
    }
    if (tau.size() == 2) {
        auto l = char1(tau[0]);
        auto m = char1(tau[1]);
        if (!l || !m) return {std::nullopt, ""};
        auto bad = [&](const Character& c) {
            return ceq(c, nuc(half(-(n - 3))), ctx) || ceq(c, nuc(half(n - 1)), ctx) ||
                   ceq(c, nuc(half(-(n - 1))), ctx);
        };
        if (bad(*l) || bad(*m)) return {std::nullopt, ""};
        if (ceq(*l, mul(*m, half(2)), ctx) || ceq(*l, mul(*m, half(-2)), ctx)) return {std::nullopt, ""};
        return {irr(t * tail), "U(lambda x mu): lambda x mu x 1_{n-2}"};
    }
    return {std::nullopt, ""};
}

// Q of a product in a twisted frame; the caller twists back.
inline QResult q_catalogue(const std::vector<Irreducible>& fs, const ModContext& ctx) {
    auto half = [](std::int64_t k) { return HalfInt::halves(k); };
    int n = 0;
    for (const auto& f : fs) n += f.degree();

    if (fs.size() == 2) {
        // segment x character and L x character in either order
        const Irreducible& p = fs[0];
        const Irreducible& q = fs[1];
        if (p.is_segment() && q.is_segment() && p.tag == q.tag) {
            if (q.degree() == 1) {
                auto r = structure_Z_times_char(p.m.segs[0], p.tag, *as_character(q), ctx);
                if (r.cosocle) return {r.cosocle, "segment x character: " + r.reason};
            }
            if (p.degree() == 1) {
                auto r = structure_Z_times_char(q.m.segs[0], q.tag, *as_character(p), ctx, true);
                if (r.cosocle) return {r.cosocle, "character x segment: " + r.reason};
            }
        }
        if (auto lx = as_L_pair(p, ctx); lx && q.is_segment() && q.degree() == 1) {
            auto r = structure_L_times_char(*lx, p.tag, *as_character(q), ctx);
            if (r.cosocle) return {r.cosocle, "L x character: " + r.reason};
        }
        if (auto lx = as_L_pair(q, ctx); lx && p.is_segment() && p.degree() == 1) {
            auto r = structure_L_times_char(*lx, q.tag, *as_character(p), ctx, true);
            if (r.cosocle) return {r.cosocle, "character x L: " + r.reason};
        }
        // (Lambda_{n-1}^{(*)} nu^{1/2} x nu^{-(n-3)/2}) . nu^k
        auto c = char1(q);
        if (c && c->tag.empty() && p.tag.empty() && n >= 4 && !ctx.e_infinite() && ctx.e() > 1 &&
            (n - 1) % ctx.e() != 0) {
            int e = ctx.e();
            auto frame = [&](HalfInt t) -> std::optional<HalfInt> {
                HalfInt k = t - half(1);
                if (ceq(*c, nuc(half(-(n - 3)) + k), ctx)) return k;
                return std::nullopt;
            };
            if (auto m = match_Pi_dual(p, ctx); m && m->n == n - 1 && (n - 2) % e != 0)
                if (auto k = frame(m->s)) {
                    Expr r = irreducible_key(Expr{one(n - 2), twist(make_St(2), half(-(n - 2)))}, ctx);
                    return {product_key(twist(r, nuc(*k)), ctx),
                            "Q(Lambda_{n-1}^* nu^{1/2} x nu^{-(n-3)/2}) = 1_{n-2} x St_2 nu^{-(n-2)/2}"};
                }
            if (auto m = match_Pi(p, ctx); m && m->n == n - 1 && e > 2 && (n - 2) % e != 0)
                if (auto k = frame(m->s))
                    return {key_of(twist(make_Lambda(n, ctx), nuc(*k)), ctx),
                            "Q(Lambda_{n-1} nu^{1/2} x nu^{-(n-3)/2}) = Lambda_n"};
        }
    }

    if (fs.size() == 3 && ctx.e_greater_one()) {
        // W family: (1_{n-2} x mu x chi) . nu^s, mu and the segment in either order
        for (int order = 0; order < 2; ++order) {
            const Irreducible& seg = fs[order];
            const Irreducible& mu_f = fs[1 - order];
            auto mu = char1(mu_f);
            auto chi = char1(fs[2]);
            if (!seg.is_segment() || seg.degree() != n - 2 || !mu || !chi || n < 3) continue;
            Character s{seg.tag, seg.m.segs[0].center(), 1};
            Character sinv{tag_inverse(s.tag), -s.exponent, 1};
            Character mu0{tag_compose(mu->tag, sinv.tag), mu->exponent - s.exponent, 1};
            Character chi0{tag_compose(chi->tag, sinv.tag), chi->exponent - s.exponent, 1};
            if (order == 1 && is_irreducible_product(Expr{seg, mu_f}, ctx).status != Tri::Irreducible) continue;
            QResult r = q_W(n, mu0, chi0, ctx);
            if (r.rep) return {product_key(twist(*r.rep, s), ctx), r.reason};
        }
    }
    if ((fs.size() == 3 || fs.size() == 4) && ctx.e_greater_one() && n >= 4) {
        // U family: (nu_{n-3}^{1/2} x tau x nu^{-(n-3)/2}) . nu^s
        const Irreducible& head = fs.front();
        auto last = char1(fs.back());
        if (head.is_segment() && head.degree() == n - 3 && last) {
            HalfInt s = head.m.segs[0].center() - half(1);
            Character tw{head.tag, s, 1};
            Character back{tag_inverse(head.tag), -s, 1};
            if (char_equal(*last, Character{head.tag, half(-(n - 3)) + s, 1}, ctx)) {
                std::vector<Irreducible> tau;
                for (std::size_t i = 1; i + 1 < fs.size(); ++i) tau.push_back(twist(fs[i], back));
                QResult r = q_U(n, tau, ctx);
                if (r.rep) return {product_key(twist(*r.rep, tw), ctx), r.reason};
            }
        }
    }
    return {std::nullopt, "no catalogued quotient family matches"};
}

} // namespace detail

inline QResult Q_of(const Expr& x, const ModContext& ctx) {
    std::vector<Irreducible> fs;
    for (const auto& f : x.factors)
        if (f.degree() > 0) fs.push_back(f);
    if (fs.empty()) return {Expr(unit_rep()), "unit"};
    auto iv = is_irreducible_product(Expr(fs), ctx);
    if (iv.status == Tri::Irreducible) return {iv.key, "irreducible: " + iv.reason};
    if (!ctx.e_greater_one()) return {std::nullopt, "q = 1: quotient families are catalogued for e > 1 only"};
    return detail::q_catalogue(fs, ctx);
}

// S(x) = Q(x^*)^*.
inline QResult S_of(const Expr& x, const ModContext& ctx) {
    QResult q = Q_of(dual(x), ctx);
    if (q.rep) q.rep = product_key(dual(*q.rep), ctx);
    return q;
}

// ---------------------------------------------------------------------------
// Structure of a product

inline StructureReport structure_of(const Expr& x, const ModContext& ctx) {
    std::vector<Irreducible> fs = detail::flatten_factors(x, ctx);
    if (fs.empty()) return detail::irreducible_report(Expr(unit_rep()), "unit");
    if (fs.size() == 1) return detail::irreducible_report(key_of(fs[0], ctx), "irreducible");
    auto iv = is_irreducible_product(Expr(fs), ctx);
    if (iv.status == Tri::Irreducible) return detail::irreducible_report(*iv.key, iv.reason);
    if (fs.size() == 2) {
        const Irreducible& p = fs[0];
        const Irreducible& q = fs[1];
        if (p.is_segment() && q.is_segment() && p.tag == q.tag) {
            if (q.degree() == 1) return structure_Z_times_char(p.m.segs[0], p.tag, *as_character(q), ctx);
            if (p.degree() == 1) return structure_Z_times_char(q.m.segs[0], q.tag, *as_character(p), ctx, true);
        }
        if (auto lx = as_L_pair(p, ctx); lx && q.is_segment() && q.degree() == 1) {
            auto r = structure_L_times_char(*lx, p.tag, *as_character(q), ctx);
            if (r.known) return r;
        }
        if (auto lx = as_L_pair(q, ctx); lx && p.is_segment() && p.degree() == 1) {
            auto r = structure_L_times_char(*lx, q.tag, *as_character(p), ctx, true);
            if (r.known) return r;
        }
    }
    auto ss = semisimplify(Expr(fs), ctx);
    if (!ss.value) return unknown_report(ss.reason);
    StructureReport r;
    r.known = true;
    r.reason = ss.reason;
    r.constituents = *ss.value;
    if (auto q = Q_of(Expr(fs), ctx); q.rep) r.cosocle = q.rep;
    if (auto s = S_of(Expr(fs), ctx); s.rep) r.socle = s.rep;
    return r;
}

} // namespace msegcalc
