#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "msegcalc/arith.hpp"

namespace msegcalc {

struct Segment {
    HalfInt a, b;

    Segment() = default;
    Segment(HalfInt a_, HalfInt b_) : a(a_), b(b_) {
        HalfInt d = b - a;
        if (!d.integral() || d.twice < 0)
            throw std::invalid_argument("segment [" + a.str() + "," + b.str() +
                                        "]: b - a must be a non-negative integer");
    }
    static Segment point(HalfInt x) { return Segment(x, x); }
    static Segment ints(std::int64_t a, std::int64_t b) {
        return Segment(HalfInt::of(a), HalfInt::of(b));
    }

    int length() const { return static_cast<int>((b - a).as_int()) + 1; }
    HalfInt center() const { return HalfInt{(a.twice + b.twice) / 2}; }
    Segment shifted(HalfInt k) const { return Segment(a + k, b + k); }

    bool operator==(const Segment&) const = default;
    auto operator<=>(const Segment&) const = default;

    std::string str() const { return "[" + a.str() + "," + b.str() + "]"; }
};

struct Multisegment {
    std::vector<Segment> segs;

    Multisegment() = default;
    Multisegment(std::initializer_list<Segment> s) : segs(s) {}
    explicit Multisegment(std::vector<Segment> s) : segs(std::move(s)) {}

    int degree() const {
        int n = 0;
        for (const auto& s : segs) n += s.length();
        return n;
    }
    bool empty() const { return segs.empty(); }
    std::size_t size() const { return segs.size(); }

    Multisegment operator+(const Multisegment& o) const {
        Multisegment r = *this;
        r.segs.insert(r.segs.end(), o.segs.begin(), o.segs.end());
        return r;
    }

    bool operator==(const Multisegment&) const = default;
    auto operator<=>(const Multisegment&) const = default;

    std::string str() const {
        if (segs.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (i) s += "+";
            s += segs[i].str();
        }
        return s;
    }
};

inline bool seg_equivalent(const Segment& d1, const Segment& d2, const ModContext& ctx) {
    return d1.length() == d2.length() && congruent(d1.a, d2.a, ctx);
}

inline Partition lambda_of(const Multisegment& m) {
    std::vector<int> p;
    for (const auto& s : m.segs) p.push_back(s.length());
    return Partition(p);
}

// Multiset of classes, keyed by reduced representative.
using Support = std::map<HalfInt, int>;

inline Support support(const Multisegment& m, const ModContext& ctx) {
    Support out;
    for (const auto& s : m.segs)
        for (HalfInt x = s.a; x <= s.b; x = x + 1) out[reduce(x, ctx)]++;
    return out;
}

inline Multisegment shift(const Multisegment& m, HalfInt k) {
    Multisegment r;
    for (const auto& s : m.segs) r.segs.push_back(s.shifted(k));
    return r;
}

inline Multisegment contragredient(const Multisegment& m) {
    Multisegment r;
    for (const auto& s : m.segs) r.segs.emplace_back(-s.b, -s.a);
    return r;
}

namespace detail {
// One direction of linkedness, with x at least as long as y.
inline bool linked_clause(const Segment& x, const Segment& y, const ModContext& ctx) {
    if (x.length() < y.length()) return false;
    for (HalfInt k = y.a; k <= y.b; k = k + HalfInt{1})
        if (congruent(k, x.b + 1, ctx) || congruent(k, x.a - 1, ctx)) return true;
    return false;
}
} // namespace detail

inline bool linked(const Segment& d1, const Segment& d2, const ModContext& ctx) {
    return detail::linked_clause(d1, d2, ctx) || detail::linked_clause(d2, d1, ctx);
}

inline bool juxtaposed(const Segment& d1, const Segment& d2, const ModContext& ctx) {
    return congruent(d2.a, d1.b + 1, ctx) || congruent(d1.a, d2.b + 1, ctx);
}

inline Segment canonical(const Segment& s, const ModContext& ctx) {
    HalfInt c = s.center();
    return s.shifted(reduce(c, ctx) - c);
}

inline Multisegment canonical(const Multisegment& m, const ModContext& ctx) {
    Multisegment r;
    for (const auto& s : m.segs) r.segs.push_back(canonical(s, ctx));
    std::sort(r.segs.begin(), r.segs.end(), [&](const Segment& x, const Segment& y) {
        auto kx = std::make_tuple(class_index(x.a, ctx), x.length(), x.a, x.b);
        auto ky = std::make_tuple(class_index(y.a, ctx), y.length(), y.a, y.b);
        return kx < ky;
    });
    return r;
}

inline bool multiseg_equal(const Multisegment& m, const Multisegment& n, const ModContext& ctx) {
    return canonical(m, ctx) == canonical(n, ctx);
}

} // namespace msegcalc
