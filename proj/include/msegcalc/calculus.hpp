#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msegcalc/reps.hpp"

namespace msegcalc {

using Composition = std::vector<int>;

// ---------------------------------------------------------------------------
// Jacquet modules of segments

inline LeviTuple jacquet_segment(const Segment& d, int k, const TagSet& tag = {}) {
    if (k < 1 || k > d.length() - 1) throw std::invalid_argument("jacquet_segment: k out of range");
    return {Expr(Irreducible::Z({Segment(d.a, d.a + (k - 1))}, tag)),
            Expr(Irreducible::Z({Segment(d.a + k, d.b)}, tag))};
}

inline LeviTuple jacquet_segment_opposite(const Segment& d, int k, const TagSet& tag = {}) {
    int n = d.length();
    if (k < 1 || k > n - 1) throw std::invalid_argument("jacquet_segment_opposite: k out of range");
    return {Expr(Irreducible::Z({Segment(d.a + (n - k), d.b)}, tag)),
            Expr(Irreducible::Z({Segment(d.a, d.a + (n - k - 1))}, tag))};
}

inline LeviTuple canonical_tuple(const LeviTuple& t, const ModContext& ctx) {
    LeviTuple r;
    for (const auto& e : t) r.push_back(product_key(e, ctx));
    return r;
}

// ---------------------------------------------------------------------------
// Shape recognition

inline bool pairwise_unlinked(const Multisegment& m, const ModContext& ctx) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (linked(m.segs[i], m.segs[j], ctx)) return false;
    return true;
}

// Z([x]+[x+1]) as L([x,x+1]) when f != 2; returns x.
inline std::optional<HalfInt> as_L_pair(const Irreducible& x, const ModContext& ctx) {
    if (!x.is_Z() || x.m.size() != 2 || ctx.f() == 2) return std::nullopt;
    const Segment& s = x.m.segs[0];
    const Segment& t = x.m.segs[1];
    if (s.length() != 1 || t.length() != 1) return std::nullopt;
    if (congruent(t.a, s.a + 1, ctx)) return s.a;
    if (congruent(s.a, t.a + 1, ctx)) return t.a;
    return std::nullopt;
}

// Twist s and degree n with x = builder(n) . nu^s, trying each segment of x
// as the anchor of the pattern.
inline std::optional<HalfInt> match_twist(const Irreducible& x, const Irreducible& pattern,
                                          std::size_t anchor, const ModContext& ctx) {
    if (!x.is_Z() || !pattern.is_Z() || x.m.size() != pattern.m.size()) return std::nullopt;
    if (x.degree() != pattern.degree()) return std::nullopt;
    Irreducible cx = canonical(x, ctx);
    const Segment& pa = pattern.m.segs[anchor];
    for (const auto& s : x.m.segs) {
        if (s.length() != pa.length()) continue;
        HalfInt sh = s.a - pa.a;
        Irreducible cand = twist(pattern, Character{x.tag, sh, 1});
        if (canonical(cand, ctx) == cx) return sh;
    }
    return std::nullopt;
}

struct NamedMatch {
    int n = 0;
    HalfInt s;
};

inline std::optional<NamedMatch> match_family(const Irreducible& x, const ModContext& ctx,
                                              const std::function<Irreducible(int)>& make,
                                              int min_n) {
    int n = x.degree();
    if (!x.is_Z() || n < min_n) return std::nullopt;
    Irreducible p = make(n);
    if (auto s = match_twist(x, p, 0, ctx)) return NamedMatch{n, *s};
    return std::nullopt;
}

inline std::optional<NamedMatch> match_Pi(const Irreducible& x, const ModContext& ctx) {
    return match_family(x, ctx, make_Pi, 2);
}
inline std::optional<NamedMatch> match_Pi_dual(const Irreducible& x, const ModContext& ctx) {
    return match_family(x, ctx, make_Pi_dual, 2);
}
inline std::optional<NamedMatch> match_Phi(const Irreducible& x, const ModContext& ctx) {
    return match_family(x, ctx, make_Phi, 4);
}
inline std::optional<NamedMatch> match_Psi(const Irreducible& x, const ModContext& ctx) {
    return match_family(x, ctx, make_Psi, 4);
}
inline std::optional<NamedMatch> match_St3(const Irreducible& x, const ModContext& ctx) {
    if (!x.is_Z() || x.m.size() != 3) return std::nullopt;
    return match_family(x, ctx, [](int) { return make_St(3); }, 3);
}

// ---------------------------------------------------------------------------
// Geometric lemma

std::optional<TupleSum> geometric_lemma(const std::vector<Irreducible>& factors,
                                        const Composition& beta, const ModContext& ctx);

// Jacquet data of one irreducible along a composition with positive parts.
inline std::optional<TupleSum> atom_jacquet(const Irreducible& x, const Composition& parts,
                                            const ModContext& ctx) {
    TupleSum out;
    if (parts.size() == 1) {
        out.add({key_of(x, ctx)});
        return out;
    }
    if (is_cuspidal(x, ctx)) return out;
    if (x.is_segment()) {
        const Segment& d = x.m.segs[0];
        LeviTuple t;
        HalfInt a = d.a;
        for (int p : parts) {
            t.push_back(Expr(Irreducible::Z({Segment(a, a + (p - 1))}, x.tag)));
            a = a + p;
        }
        out.add(canonical_tuple(t, ctx));
        return out;
    }
    if (auto lx = as_L_pair(x, ctx)) {
        // r_(1,1) L([x,x+1]) = nu^{x+1} (x) nu^x
        LeviTuple t{Expr(nu_n(1, *lx + 1, x.tag)), Expr(nu_n(1, *lx, x.tag))};
        out.add(canonical_tuple(t, ctx));
        return out;
    }
    if (x.is_Z() && pairwise_unlinked(x.m, ctx)) {
        std::vector<Irreducible> segs;
        for (const auto& s : x.m.segs) segs.push_back(Irreducible::Z({s}, x.tag));
        return geometric_lemma(segs, parts, ctx);
    }
    return std::nullopt;
}

namespace detail {

inline void compositions_bounded(int n, const std::vector<int>& caps, std::size_t j,
                                 std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (j == caps.size()) {
        if (n == 0) out.push_back(cur);
        return;
    }
    for (int c = std::min(n, caps[j]); c >= 0; --c) {
        cur[j] = c;
        compositions_bounded(n - c, caps, j + 1, cur, out);
    }
    cur[j] = 0;
}

struct GLState {
    const std::vector<Irreducible>& factors;
    const ModContext& ctx;
    std::vector<std::vector<Irreducible>> cols;
    std::vector<int> caps;
    TupleSum out;
    bool unknown = false;
};

inline void gl_rec(GLState& st, std::size_t i, long mult) {
    if (st.unknown) return;
    if (i == st.factors.size()) {
        LeviTuple t;
        for (const auto& c : st.cols) t.push_back(product_key(Expr(c), st.ctx));
        st.out.add(t, static_cast<int>(mult));
        return;
    }
    const Irreducible& f = st.factors[i];
    std::vector<std::vector<int>> rows;
    std::vector<int> cur(st.caps.size(), 0);
    compositions_bounded(f.degree(), st.caps, 0, cur, rows);
    for (const auto& row : rows) {
        Composition pos;
        std::vector<std::size_t> where;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] > 0) {
                pos.push_back(row[j]);
                where.push_back(j);
            }
        auto jac = atom_jacquet(f, pos, st.ctx);
        if (!jac) {
            st.unknown = true;
            return;
        }
        for (std::size_t j = 0; j < row.size(); ++j) st.caps[j] -= row[j];
        for (const auto& [tuple, v] : jac->terms) {
            std::vector<std::size_t> sizes;
            for (std::size_t q = 0; q < where.size(); ++q) {
                auto& col = st.cols[where[q]];
                sizes.push_back(col.size());
                for (const auto& piece : tuple[q].factors)
                    if (piece.degree() > 0) col.push_back(piece);
            }
            gl_rec(st, i + 1, mult * v);
            for (std::size_t q = 0; q < where.size(); ++q) st.cols[where[q]].resize(sizes[q]);
        }
        for (std::size_t j = 0; j < row.size(); ++j) st.caps[j] += row[j];
    }
}

} // namespace detail

// [r_beta(pi_1 x ... x pi_r)] as a sum over B-matrices.
inline std::optional<TupleSum> geometric_lemma(const std::vector<Irreducible>& factors,
                                               const Composition& beta, const ModContext& ctx) {
    int n = 0;
    for (const auto& f : factors) n += f.degree();
    int s = 0;
    for (int b : beta) {
        if (b < 1) throw std::invalid_argument("composition parts must be positive");
        s += b;
    }
    if (s != n) throw std::invalid_argument("composition does not match the degree");
    std::vector<Irreducible> fs;
    for (const auto& f : factors)
        if (f.degree() > 0) fs.push_back(f);
    detail::GLState st{fs, ctx, std::vector<std::vector<Irreducible>>(beta.size()), beta, {}, false};
    detail::gl_rec(st, 0, 1);
    if (st.unknown) return std::nullopt;
    return st.out;
}

inline std::optional<TupleSum> geometric_lemma(const Expr& x, const Composition& beta,
                                               const ModContext& ctx) {
    return geometric_lemma(x.factors, beta, ctx);
}

inline Composition ones(int n) { return Composition(static_cast<std::size_t>(n), 1); }

// r_(1,...,1): character tuples.
inline std::optional<TupleSum> jacquet_full(const Expr& x, const ModContext& ctx) {
    return geometric_lemma(x, ones(x.degree()), ctx);
}

// Refines every entry of every tuple along a composition of that entry.
inline std::optional<TupleSum> refine(const TupleSum& t, const std::vector<Composition>& betas,
                                      const ModContext& ctx) {
    TupleSum out;
    for (const auto& [tuple, v] : t.terms) {
        if (tuple.size() != betas.size()) throw std::invalid_argument("refine: arity mismatch");
        std::vector<TupleSum> parts;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            auto r = geometric_lemma(tuple[i], betas[i], ctx);
            if (!r) return std::nullopt;
            parts.push_back(*r);
        }
        TupleSum acc;
        acc.add({}, v);
        for (const auto& p : parts) {
            TupleSum next;
            for (const auto& [ta, va] : acc.terms)
                for (const auto& [tb, vb] : p.terms) {
                    LeviTuple u = ta;
                    u.insert(u.end(), tb.begin(), tb.end());
                    next.add(u, va * vb);
                }
            acc = next;
        }
        out.add_all(acc);
    }
    return out;
}

// Multiset of character classes appearing across the tuples of a term.
inline Support tuple_support(const LeviTuple& t, const ModContext& ctx) {
    Support s;
    for (const auto& e : t)
        for (const auto& f : e.factors)
            if (f.is_Z())
                for (const auto& [k, v] : support(f.m, ctx)) s[k] += v;
    return s;
}

// ---------------------------------------------------------------------------
// Irreducibility of products

enum class Tri { Irreducible, Reducible, Unknown };

struct IrrVerdict {
    Tri status = Tri::Unknown;
    std::string reason;
    std::optional<Expr> key; // canonical label when irreducible
};

namespace detail {

struct Piece {
    enum class Kind { Seg, LPair, Cusp, Other } kind;
    Segment seg;
    TagSet tag;
    int deg = 0;
};

inline std::vector<Piece> pieces_of(const Irreducible& x, const ModContext& ctx) {
    using K = Piece::Kind;
    if (x.degree() == 0) return {};
    if (is_cuspidal(x, ctx)) return {Piece{K::Cusp, {}, x.tag, x.degree()}};
    if (x.is_segment()) return {Piece{K::Seg, x.m.segs[0], x.tag, x.degree()}};
    if (auto l = as_L_pair(x, ctx)) return {Piece{K::LPair, Segment(*l, *l + 1), x.tag, 2}};
    if (x.is_Z() && pairwise_unlinked(x.m, ctx)) {
        std::vector<Piece> out;
        for (const auto& s : x.m.segs) out.push_back(Piece{K::Seg, s, x.tag, s.length()});
        return out;
    }
    return {Piece{K::Other, {}, x.tag, x.degree()}};
}

// Pieces on different lines have cuspidal supports disjoint up to nu^Z.
inline std::string line_of(const Piece& p) {
    if (p.kind == Piece::Kind::Cusp || p.kind == Piece::Kind::Other)
        return "cusp:" + std::to_string(p.deg);
    std::string s = "char:" + std::to_string(((p.seg.a.twice % 2) + 2) % 2);
    for (const auto& [t, k] : p.tag) s += ":" + t + "^" + std::to_string(k);
    return s;
}

} // namespace detail

inline IrrVerdict is_irreducible_product(const Expr& x, const ModContext& ctx) {
    using detail::Piece;
    using K = Piece::Kind;
    std::vector<Irreducible> fs;
    for (const auto& f : x.factors)
        if (f.degree() > 0) fs.push_back(f);
    if (fs.size() <= 1)
        return {Tri::Irreducible, "a single irreducible factor", irreducible_key(x, ctx)};

    std::map<std::string, std::vector<Piece>> lines;
    bool other = false;
    for (const auto& f : fs)
        for (const auto& p : detail::pieces_of(f, ctx)) {
            lines[detail::line_of(p)].push_back(p);
            if (p.kind == K::Other) other = true;
        }

    std::vector<std::string> reasons;
    bool unknown = false;
    for (const auto& [line, ps] : lines) {
        if (ps.size() == 1) continue;
        std::size_t nseg = 0, nl = 0;
        for (const auto& p : ps) {
            if (p.kind == K::Seg) ++nseg;
            if (p.kind == K::LPair) ++nl;
        }
        if (nseg == ps.size()) {
            for (std::size_t i = 0; i < ps.size(); ++i)
                for (std::size_t j = i + 1; j < ps.size(); ++j)
                    if (linked(ps[i].seg, ps[j].seg, ctx))
                        return {Tri::Reducible,
                                "segments " + ps[i].seg.str() + " and " + ps[j].seg.str() + " are linked",
                                std::nullopt};
            reasons.push_back("Z-segments pairwise unlinked");
            continue;
        }
        if (ps.size() == 2 && nseg + nl == 2) {
            const Piece& p = ps[0];
            const Piece& q = ps[1];
            auto short_l = [](const Piece& r) { return r.kind == K::LPair || r.seg.length() == 1; };
            if (short_l(p) && short_l(q)) {
                if (linked(p.seg, q.seg, ctx))
                    return {Tri::Reducible, "L-segments " + p.seg.str() + ", " + q.seg.str() + " linked",
                            std::nullopt};
                reasons.push_back("L-segments not linked");
                continue;
            }
            const Piece& z = p.kind == K::Seg ? p : q;
            const Piece& l = p.kind == K::Seg ? q : p;
            if (juxtaposed(z.seg, l.seg, ctx))
                return {Tri::Reducible,
                        "Z-segment " + z.seg.str() + " and " + l.seg.str() + " are juxtaposed", std::nullopt};
            reasons.push_back("Z- and L-segments not juxtaposed");
            continue;
        }
        unknown = true;
    }
    if (unknown || other) return {Tri::Unknown, "no catalogued irreducibility criterion applies", std::nullopt};
    if (lines.size() > 1) reasons.push_back("factors on disjoint cuspidal lines");
    std::string r;
    for (const auto& s : reasons) r += (r.empty() ? "" : "; ") + s;
    return {Tri::Irreducible, r, irreducible_key(x, ctx)};
}

inline std::optional<Expr> commute_product(const Expr& x, const std::vector<std::size_t>& perm,
                                           const ModContext& ctx) {
    if (perm.size() != x.size()) throw std::invalid_argument("commute_product: bad permutation");
    if (is_irreducible_product(x, ctx).status != Tri::Irreducible) return std::nullopt;
    Expr r;
    for (auto i : perm) r.factors.push_back(x.factors.at(i));
    return r;
}

// ---------------------------------------------------------------------------
// Z-segment times character. At q = 1 the product is a twist of
// nu_{n-1}^{1/2} x nu^{(n+1)/2}: Pi_n plus 1_n, twice when ell | n.

inline std::optional<GrothElt> seg_char_constituents(const Segment& d, const TagSet& ztag,
                                                     const Character& chi, const ModContext& ctx) {
    Expr prod{Irreducible::Z({d}, ztag), char_rep(chi)};
    GrothElt g;
    bool same_line = chi.tag == ztag && (chi.exponent - d.a).integral();
    if (!same_line) {
        g.add(irreducible_key(prod, ctx));
        return g;
    }
    if (ctx.q_is_one()) {
        int n = d.length() + 1;
        Character tw{ztag, d.center() - HalfInt::halves(1), 1};
        g.add(key_of(twist(make_Pi(n), tw), ctx));
        g.add(key_of(twist(one(n), tw), ctx), divides_f(ctx.ell(), n) ? 2 : 1);
        return g;
    }
    bool right = congruent(chi.exponent, d.b + 1, ctx);
    bool left = congruent(chi.exponent, d.a - 1, ctx);
    g.add(key_of(Irreducible::Z({d, Segment::point(chi.exponent)}, ztag), ctx));
    if (right) g.add(key_of(Irreducible::Z({Segment(d.a, d.b + 1)}, ztag), ctx));
    if (left) g.add(key_of(Irreducible::Z({Segment(d.a - 1, d.b)}, ztag), ctx));
    return g;
}

// Rewrites product terms that are catalogued as irreducible or as
// Z-segment x character.
inline GrothElt expand(const GrothElt& g, const ModContext& ctx) {
    GrothElt out;
    for (const auto& [k, v] : g.terms) {
        bool flag = g.at_least.count(k) > 0;
        GrothElt piece;
        if (k.size() <= 1) {
            piece.add(k);
        } else if (auto iv = is_irreducible_product(k, ctx); iv.status == Tri::Irreducible) {
            piece.add(*iv.key);
        } else if (k.size() == 2 && k.factors[0].is_segment() && k.factors[1].is_segment() &&
                   (k.factors[0].degree() == 1 || k.factors[1].degree() == 1)) {
            const Irreducible& z = k.factors[0].degree() == 1 ? k.factors[1] : k.factors[0];
            const Irreducible& c = k.factors[0].degree() == 1 ? k.factors[0] : k.factors[1];
            auto r = seg_char_constituents(z.m.segs[0], z.tag, *as_character(c), ctx);
            if (r)
                piece = *r;
            else
                piece.add(k);
        } else {
            piece.add(k);
        }
        for (const auto& [pk, pv] : piece.terms) {
            if (flag)
                out.add_lower_bound(pk, pv * v);
            else
                out.add(pk, pv * v);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Derivatives

inline GrothElt multiply(const GrothElt& x, const GrothElt& y, const ModContext& ctx) {
    GrothElt r;
    for (const auto& [a, va] : x.terms)
        for (const auto& [b, vb] : y.terms) {
            Expr k = product_key(a * b, ctx);
            if (x.at_least.count(a) || y.at_least.count(b))
                r.add_lower_bound(k, va * vb);
            else
                r.add(k, va * vb);
        }
    return r;
}

inline GrothElt unit_elt() { return single(Expr(unit_rep())); }

std::optional<GrothElt> derivative(const Expr& x, int k, const ModContext& ctx);

namespace detail {

inline GrothElt twisted(const GrothElt& g, HalfInt s, const TagSet& tag, const ModContext& ctx) {
    return twist(g, Character{tag, s, 1}, ctx);
}

// k-th derivative of Pi_n.
inline GrothElt pi_derivative(int n, int k, const ModContext& ctx) {
    if (k == 0) return single(key_of(make_Pi(n), ctx));
    if (k >= 3) return {};
    if (k == 2) return single(key_of(one(n - 2), ctx));
    if (ctx.f() == 2 && n == 2) return {};
    if (!divides_f(ctx.f(), n))
        return expand(single(product_key(Expr{one(n - 2), nu_n(1, HalfInt{n + 1})}, ctx)), ctx);
    return single(key_of(twist(make_Lambda_dual(n - 1, ctx), HalfInt{1}), ctx));
}

// Pi_n^* derivatives from [V_n^*] = Pi_n^* + nu_n^{-1} (+ 1_n if f | n).
inline std::optional<GrothElt> pi_dual_derivative(int n, int k, const ModContext& ctx) {
    if (k == 0) return single(key_of(make_Pi_dual(n), ctx));
    Expr vstar{nu_n(n - 1, HalfInt{-1}), nu_n(1, HalfInt{-(n + 1)})};
    auto dv = derivative(vstar, k, ctx);
    auto dn = derivative(Expr(nu_n(n, HalfInt{-2})), k, ctx);
    if (!dv || !dn) return std::nullopt;
    GrothElt r = *dv - *dn;
    if (divides_f(ctx.f(), n)) {
        auto d1 = derivative(Expr(one(n)), k, ctx);
        r = r - *d1;
    }
    r = expand(r, ctx);
    if (!r.nonnegative()) return std::nullopt;
    return r;
}

} // namespace detail

inline std::optional<GrothElt> derivative(const Irreducible& x, int k, const ModContext& ctx) {
    int n = x.degree();
    if (k < 0 || k > n) throw std::invalid_argument("derivative: k out of range");
    if (k == 0) return single(key_of(x, ctx));
    if (is_cuspidal(x, ctx)) return k == n ? unit_elt() : GrothElt{};
    if (x.is_segment()) {
        if (k >= 2) return GrothElt{};
        const Segment& d = x.m.segs[0];
        if (d.length() == 1) return unit_elt();
        return single(key_of(Irreducible::Z({Segment(d.a, d.b - 1)}, x.tag), ctx));
    }
    if (x.is_Z() && pairwise_unlinked(x.m, ctx)) {
        Expr prod;
        for (const auto& s : x.m.segs) prod.factors.push_back(Irreducible::Z({s}, x.tag));
        return derivative(prod, k, ctx);
    }
    if (auto p = match_Pi(x, ctx))
        return detail::twisted(detail::pi_derivative(p->n, k, ctx), p->s, x.tag, ctx);
    if (auto p = match_Pi_dual(x, ctx)) {
        auto d = detail::pi_dual_derivative(p->n, k, ctx);
        if (!d) return std::nullopt;
        return detail::twisted(*d, p->s, x.tag, ctx);
    }
    if (auto p = match_St3(x, ctx)) {
        // From [nu^-1 x 1 x nu] = 1_3 + Lambda_3 nu^-1 + Lambda_3^* nu + St_3; the third derivative follows the same way.
        GrothElt d;
        if (k == 1) d = single(key_of(Irreducible::Z({Segment::point(HalfInt{}), Segment::point(HalfInt::of(1))}), ctx));
        if (k == 2) d = single(key_of(nu_n(1, HalfInt::of(1)), ctx));
        if (k == 3) d = unit_elt();
        return detail::twisted(d, p->s, x.tag, ctx);
    }
    if (!ctx.e_infinite() && ctx.e() > 1 && (n - 1) % ctx.e() != 0 && k >= 2) {
        // Second derivatives of Phi_n, Psi_n when e does not divide n - 1; higher ones vanish.
        if (auto p = match_Phi(x, ctx)) {
            GrothElt d = k == 2 ? single(key_of(make_Pi_dual(n - 2), ctx)) : GrothElt{};
            return detail::twisted(d, p->s, x.tag, ctx);
        }
        if (auto p = match_Psi(x, ctx)) {
            GrothElt d;
            if (k == 2)
                d = expand(single(product_key(Expr{nu_n(n - 3, HalfInt{-1}), nu_n(1, HalfInt{-(n + 1)})}, ctx)),
                           ctx);
            return detail::twisted(d, p->s, x.tag, ctx);
        }
    }
    return std::nullopt;
}

// Leibniz rule over the factors of a product.
inline std::optional<GrothElt> derivative(const Expr& x, int k, const ModContext& ctx) {
    int n = x.degree();
    if (k < 0 || k > n) throw std::invalid_argument("derivative: k out of range");
    std::vector<Irreducible> fs;
    for (const auto& f : x.factors)
        if (f.degree() > 0) fs.push_back(f);
    if (fs.empty()) return k == 0 ? std::optional<GrothElt>(unit_elt()) : std::nullopt;
    if (fs.size() == 1) return derivative(fs[0], k, ctx);
    // acc[j]: derivative of order j of the factors processed so far
    std::vector<std::optional<GrothElt>> acc(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= std::min(k, fs[0].degree()); ++j) acc[j] = derivative(fs[0], j, ctx);
    for (int j = fs[0].degree() + 1; j <= k; ++j) acc[j] = GrothElt{};
    for (std::size_t i = 1; i < fs.size(); ++i) {
        std::vector<std::optional<GrothElt>> next(acc.size());
        for (int j = 0; j <= k; ++j) {
            GrothElt sum;
            bool ok = true;
            for (int i2 = 0; i2 <= std::min(j, fs[i].degree()); ++i2) {
                const auto& left = acc[j - i2];
                if (!left) { ok = false; break; }
                if (left->empty()) continue;
                auto right = derivative(fs[i], i2, ctx);
                if (!right) { ok = false; break; }
                sum.add_all(multiply(*left, *right, ctx));
            }
            if (ok) next[j] = sum;
        }
        acc = next;
    }
    if (!acc[k]) return std::nullopt;
    return expand(*acc[k], ctx);
}

inline std::optional<GrothElt> derivative(const GrothElt& g, int k, const ModContext& ctx) {
    GrothElt out;
    for (const auto& [key, v] : g.terms) {
        auto d = derivative(key, k, ctx);
        if (!d) return std::nullopt;
        bool flag = g.at_least.count(key) > 0;
        for (const auto& [dk, dv] : d->terms) {
            if (flag || d->at_least.count(dk))
                out.add_lower_bound(dk, dv * v);
            else
                out.add(dk, dv * v);
        }
    }
    return out;
}

} // namespace msegcalc
