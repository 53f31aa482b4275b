#pragma once

#include <functional>
#include <map>
#include <optional>
#include <type_traits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "msegcalc/segments.hpp"

namespace msegcalc {

// Ramified characters are opaque: tag -> exponent.
using TagSet = std::map<std::string, int>;

inline TagSet tag_compose(const TagSet& x, const TagSet& y) {
    TagSet r = x;
    for (const auto& [t, k] : y) {
        r[t] += k;
        if (r[t] == 0) r.erase(t);
    }
    return r;
}

inline TagSet tag_inverse(const TagSet& x) {
    TagSet r;
    for (const auto& [t, k] : x) r[t] = -k;
    return r;
}

// nu_degree^exponent . chi(tag)
struct Character {
    TagSet tag;
    HalfInt exponent;
    int degree = 1;

    static Character nu(HalfInt x) { return Character{{}, x, 1}; }
    static Character ramified(std::string t) { return Character{{{std::move(t), 1}}, {}, 1}; }
};

inline bool char_equal(const Character& x, const Character& y, const ModContext& ctx) {
    return x.degree == y.degree && x.tag == y.tag && congruent(x.exponent, y.exponent, ctx);
}

inline bool is_trivial(const Character& c, const ModContext& ctx) {
    return c.tag.empty() && congruent(c.exponent, HalfInt{}, ctx);
}

struct Irreducible {
    enum class Kind { Z, Cusp };

    Kind kind = Kind::Z;
    Multisegment m;   // Z
    int cdeg = 0;     // Cusp
    std::string name; // Cusp
    HalfInt twist;    // Cusp, unramified twist
    TagSet tag;       // ramified twist

    static Irreducible Z(Multisegment m, TagSet tag = {}) {
        Irreducible r;
        r.m = std::move(m);
        r.tag = std::move(tag);
        return r;
    }
    static Irreducible cusp(int d, std::string name, HalfInt tw = {}, TagSet tag = {}) {
        if (d < 2) throw std::invalid_argument("cuspidal atoms have degree >= 2");
        Irreducible r;
        r.kind = Kind::Cusp;
        r.cdeg = d;
        r.name = std::move(name);
        r.twist = tw;
        r.tag = std::move(tag);
        return r;
    }

    bool is_Z() const { return kind == Kind::Z; }
    int degree() const { return is_Z() ? m.degree() : cdeg; }
    bool is_segment() const { return is_Z() && m.size() == 1; }

    bool operator==(const Irreducible&) const = default;
    auto operator<=>(const Irreducible&) const = default;
};

// Normalized parabolic induction of the factors, in order.
struct Expr {
    std::vector<Irreducible> factors;

    Expr() = default;
    Expr(std::initializer_list<Irreducible> f) : factors(f) {}
    explicit Expr(std::vector<Irreducible> f) : factors(std::move(f)) {}
    explicit Expr(Irreducible x) : factors{std::move(x)} {}

    int degree() const {
        int n = 0;
        for (const auto& f : factors) n += f.degree();
        return n;
    }
    bool is_atom() const { return factors.size() == 1; }
    std::size_t size() const { return factors.size(); }

    Expr operator*(const Expr& o) const {
        Expr r = *this;
        r.factors.insert(r.factors.end(), o.factors.begin(), o.factors.end());
        return r;
    }

    bool operator==(const Expr&) const = default;
    auto operator<=>(const Expr&) const = default;
};

// Formal sum with non-negative multiplicities. Terms in at_least have
// multiplicity known only from below.
template <class Key>
struct Formal {
    std::map<Key, int> terms;
    std::set<Key> at_least;

    void add(const Key& k, int mult = 1) {
        if (mult == 0) return;
        int& v = terms[k];
        v += mult;
        if (v == 0) {
            terms.erase(k);
            at_least.erase(k);
        }
    }
    void add_lower_bound(const Key& k, int mult = 1) {
        add(k, mult);
        if (terms.count(k)) at_least.insert(k);
    }
    void add_all(const Formal& o, int scale = 1) {
        for (const auto& [k, v] : o.terms) add(k, v * scale);
        for (const auto& k : o.at_least)
            if (terms.count(k)) at_least.insert(k);
    }
    int mult(const Key& k) const {
        auto it = terms.find(k);
        return it == terms.end() ? 0 : it->second;
    }
    bool lower_bound() const { return !at_least.empty(); }
    int total() const {
        int n = 0;
        for (const auto& [k, v] : terms) n += v;
        return n;
    }
    bool empty() const { return terms.empty(); }
    bool nonnegative() const {
        for (const auto& [k, v] : terms)
            if (v < 0) return false;
        return true;
    }
    Formal operator+(const Formal& o) const {
        Formal r = *this;
        r.add_all(o);
        return r;
    }
    Formal operator-(const Formal& o) const {
        Formal r = *this;
        r.add_all(o, -1);
        return r;
    }
    bool operator==(const Formal&) const = default;
};

using GrothElt = Formal<Expr>;
using LeviTuple = std::vector<Expr>;
using TupleSum = Formal<LeviTuple>;

// ---------------------------------------------------------------------------
// Canonical forms

inline Irreducible canonical(const Irreducible& x, const ModContext& ctx) {
    Irreducible r = x;
    if (r.is_Z())
        r.m = canonical(r.m, ctx);
    else
        r.twist = reduce(r.twist, ctx);
    return r;
}

inline Irreducible unit_rep() { return Irreducible::Z({}); }

// Class of a product in the Grothendieck group: order does not matter.
inline Expr product_key(const Expr& x, const ModContext& ctx) {
    Expr r;
    for (const auto& f : x.factors)
        if (f.degree() > 0) r.factors.push_back(canonical(f, ctx));
    if (r.factors.empty()) return Expr(unit_rep());
    std::sort(r.factors.begin(), r.factors.end());
    return r;
}

// Key of an irreducible product: Z-factors with the same ramified tag merge
// into the Z-label of the union (P2 with irreducibility).
inline Expr irreducible_key(const Expr& x, const ModContext& ctx) {
    std::map<TagSet, Multisegment> zs;
    Expr r;
    for (const auto& f : x.factors) {
        if (f.degree() == 0) continue;
        if (f.is_Z())
            zs[f.tag] = zs[f.tag] + f.m;
        else
            r.factors.push_back(f);
    }
    for (auto& [t, m] : zs) r.factors.push_back(Irreducible::Z(m, t));
    return product_key(r, ctx);
}

inline Expr key_of(const Irreducible& x, const ModContext& ctx) {
    return Expr(canonical(x, ctx));
}

inline bool same_irreducible(const Irreducible& x, const Irreducible& y, const ModContext& ctx) {
    return canonical(x, ctx) == canonical(y, ctx);
}

// ---------------------------------------------------------------------------
// Characters and named constructions

inline Segment segment_of_char(int n, HalfInt x) {
    if (n < 1) throw std::invalid_argument("character degree must be >= 1");
    HalfInt h{n - 1}; // (n-1)/2
    return Segment(x - h, x + h);
}

inline Character z_of_segment(const Segment& s) {
    return Character{{}, s.center(), s.length()};
}

inline Irreducible char_rep(const Character& c) {
    return Irreducible::Z({segment_of_char(c.degree, c.exponent)}, c.tag);
}

// nu_n^x; n = 0 gives the unit.
inline Irreducible nu_n(int n, HalfInt x, TagSet tag = {}) {
    if (n == 0) return Irreducible::Z({});
    return Irreducible::Z({segment_of_char(n, x)}, std::move(tag));
}

inline std::optional<Character> as_character(const Irreducible& x) {
    if (!x.is_segment()) return std::nullopt;
    Character c = z_of_segment(x.m.segs[0]);
    c.tag = x.tag;
    return c;
}

inline Irreducible one(int n) { return nu_n(n, HalfInt{}); }

inline Irreducible make_St(int n) {
    Multisegment m;
    for (int i = 0; i < n; ++i) m.segs.push_back(Segment::point(HalfInt{-(n - 1) + 2 * i}));
    return Irreducible::Z(m);
}

inline Irreducible make_Pi(int n) {
    if (n < 2) throw std::invalid_argument("Pi_n needs n >= 2");
    return Irreducible::Z({Segment(HalfInt{-(n - 3)}, HalfInt{n - 1}), Segment::point(HalfInt{n + 1})});
}

inline Irreducible make_Pi_dual(int n) {
    Irreducible p = make_Pi(n);
    p.m = contragredient(p.m);
    return p;
}

inline Irreducible make_Lambda(int n, const ModContext& ctx) {
    return divides_f(ctx.f(), n) ? one(n) : make_Pi(n);
}

inline Irreducible make_Lambda_dual(int n, const ModContext& ctx) {
    return divides_f(ctx.f(), n) ? one(n) : make_Pi_dual(n);
}

inline Irreducible make_Phi(int n) {
    if (n < 4) throw std::invalid_argument("Phi_n needs n >= 4");
    return Irreducible::Z({Segment(HalfInt{-(n - 3)}, HalfInt{n - 3}),
                           Segment(HalfInt{-(n - 1)}, HalfInt{-(n - 3)})});
}

inline Irreducible make_Psi(int n) {
    if (n < 4) throw std::invalid_argument("Psi_n needs n >= 4");
    return Irreducible::Z({Segment(HalfInt{-(n - 3)}, HalfInt{n - 3}),
                           Segment(HalfInt{-(n + 1)}, HalfInt{-(n - 1)})});
}

// L([a]) = nu^a; L([a,a+1]) = St_2 nu^{a+1/2} = Z([a]+[a+1]) when f != 2 and
// the character nu_2^{a-1/2} when f = 2.
inline Irreducible make_L(const Segment& d, const ModContext& ctx, TagSet tag = {}) {
    if (d.length() == 1) return Irreducible::Z({d}, std::move(tag));
    if (d.length() != 2) throw std::invalid_argument("L-labels have length 1 or 2");
    if (ctx.f() == 2) return nu_n(2, d.a - HalfInt{1}, std::move(tag));
    return Irreducible::Z({Segment::point(d.a), Segment::point(d.b)}, std::move(tag));
}

inline Expr st_of_two_chars(const Character& x, const Character& y, const ModContext& ctx) {
    if (x.degree != 1 || y.degree != 1) throw std::invalid_argument("St(chi1, chi2) needs characters of G_1");
    if (x.tag == y.tag)
        return key_of(Irreducible::Z({Segment::point(x.exponent), Segment::point(y.exponent)}, x.tag), ctx);
    return product_key(Expr{char_rep(x), char_rep(y)}, ctx);
}

inline Irreducible twist(const Irreducible& x, const Character& c) {
    if (c.degree != 1) throw std::invalid_argument("twist by a character of G_1");
    Irreducible r = x;
    if (r.is_Z())
        r.m = shift(r.m, c.exponent);
    else
        r.twist = r.twist + c.exponent;
    r.tag = tag_compose(r.tag, c.tag);
    return r;
}

inline Irreducible twist(const Irreducible& x, HalfInt k) { return twist(x, Character::nu(k)); }

inline Expr twist(const Expr& x, const Character& c) {
    Expr r;
    for (const auto& f : x.factors) r.factors.push_back(f.degree() ? twist(f, c) : f);
    return r;
}

inline Irreducible dual(const Irreducible& x) {
    Irreducible r = x;
    if (r.is_Z()) {
        r.m = contragredient(r.m);
    } else {
        r.twist = -r.twist;
        if (!r.name.empty() && r.name.back() == '*')
            r.name.pop_back();
        else
            r.name += "*";
    }
    r.tag = tag_inverse(r.tag);
    return r;
}

inline Expr dual(const Expr& x) {
    Expr r;
    for (const auto& f : x.factors) r.factors.push_back(dual(f));
    return r;
}

inline GrothElt map_keys(const GrothElt& g, const std::function<Expr(const Expr&)>& fn,
                         const ModContext& ctx) {
    GrothElt r;
    for (const auto& [k, v] : g.terms) r.add(product_key(fn(k), ctx), v);
    for (const auto& k : g.at_least) r.at_least.insert(product_key(fn(k), ctx));
    return r;
}

inline GrothElt twist(const GrothElt& g, const Character& c, const ModContext& ctx) {
    return map_keys(g, [&](const Expr& e) { return twist(e, c); }, ctx);
}

inline GrothElt dual(const GrothElt& g, const ModContext& ctx) {
    return map_keys(g, [](const Expr& e) { return dual(e); }, ctx);
}

inline GrothElt single(const Expr& key, int mult = 1) {
    GrothElt g;
    g.add(key, mult);
    return g;
}

// St_f with character support: f consecutive points, each class once.
inline bool is_cuspidal(const Irreducible& x, const ModContext& ctx) {
    if (!x.is_Z()) return true;
    int f = ctx.f();
    if (f < 2 || static_cast<int>(x.m.size()) != f) return false;
    for (const auto& s : x.m.segs)
        if (s.length() != 1) return false;
    Multisegment cx = canonical(x.m, ctx);
    for (const auto& s : x.m.segs) {
        Multisegment chain;
        for (int i = 0; i < f; ++i) chain.segs.push_back(Segment::point(s.a + i));
        if (canonical(chain, ctx) == cx) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Text rendering, parseable by parse_expr.

inline std::string render_tags(const TagSet& t) {
    std::string s;
    for (const auto& [name, k] : t) {
        s += " . chi(" + name;
        if (k != 1) s += "^" + std::to_string(k);
        s += ")";
    }
    return s;
}

inline std::string render(const Irreducible& x) {
    std::string s;
    if (!x.is_Z()) {
        s = "cusp(" + std::to_string(x.cdeg) + "," + x.name + ")";
        if (x.twist.twice != 0) s += " . nu^" + x.twist.str();
    } else if (x.m.empty()) {
        s = "1_0";
    } else if (x.m.size() == 1) {
        const Segment& g = x.m.segs[0];
        int n = g.length();
        HalfInt c = g.center();
        if (c.twice == 0)
            s = "1_" + std::to_string(n);
        else
            s = "nu^" + c.str() + (n > 1 ? "_" + std::to_string(n) : "");
    } else {
        s = "Z[";
        for (std::size_t i = 0; i < x.m.segs.size(); ++i) {
            if (i) s += "; ";
            s += x.m.segs[i].a.str() + "," + x.m.segs[i].b.str();
        }
        s += "]";
    }
    return s + render_tags(x.tag);
}

inline std::string render(const Expr& x) {
    std::string s;
    for (std::size_t i = 0; i < x.factors.size(); ++i) {
        if (i) s += " x ";
        bool paren = !x.factors[i].tag.empty() || (!x.factors[i].is_Z() && x.factors[i].twist.twice);
        std::string f = render(x.factors[i]);
        s += (paren && x.factors.size() > 1) ? "(" + f + ")" : f;
    }
    return s;
}

inline std::string render(const LeviTuple& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += " (x) ";
        s += t[i].size() > 1 ? "(" + render(t[i]) + ")" : render(t[i]);
    }
    return s;
}

template <class Key>
std::string render(const Formal<Key>& g) {
    if (g.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, v] : g.terms) {
        if (!first) s += " + ";
        first = false;
        if (g.at_least.count(k)) s += ">=";
        if (v != 1 || g.at_least.count(k)) s += std::to_string(v) + " ";
        std::string r = render(k);
        if constexpr (std::is_same_v<Key, Expr>)
            s += k.size() > 1 ? "[" + r + "]" : r;
        else
            s += r;
    }
    return s;
}

} // namespace msegcalc
