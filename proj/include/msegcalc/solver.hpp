#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msegcalc/calculus.hpp"

namespace msegcalc {

enum class CandStatus { Open, Excluded, Confirmed };

inline const char* status_name(CandStatus s) {
    switch (s) {
    case CandStatus::Open: return "open";
    case CandStatus::Excluded: return "excluded";
    case CandStatus::Confirmed: return "confirmed";
    }
    return "?";
}

struct Candidate {
    Multisegment m; // canonical
    CandStatus status = CandStatus::Open;
    std::string reason;
    int lb = 0;
    std::optional<int> ub; // nullopt: no upper bound known
    std::optional<Composition> mu;
    std::optional<LeviTuple> st;
    std::optional<int> st_mult;
    bool reachable = false;
};

struct CandidateSet {
    Expr product;
    Multisegment baseline; // canonical concatenation of the factors
    TagSet tag;
    bool segment_product = true; // every factor a segment
    std::vector<Candidate> candidates;
};

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

inline Segment seg_from_class(HalfInt start, int len, const ModContext& ctx) {
    return canonical(Segment(start, start + (len - 1)), ctx);
}

inline void assign_starts(const std::vector<int>& parts, std::size_t i, std::size_t min_idx,
                          const std::vector<HalfInt>& classes, Support& left, std::vector<Segment>& cur,
                          const ModContext& ctx, std::vector<Multisegment>& out) {
    if (i == parts.size()) {
        for (const auto& [k, v] : left)
            if (v != 0) return;
        out.push_back(canonical(Multisegment(cur), ctx));
        return;
    }
    std::size_t from = (i > 0 && parts[i] == parts[i - 1]) ? min_idx : 0;
    for (std::size_t c = from; c < classes.size(); ++c) {
        HalfInt s = classes[c];
        bool ok = true;
        std::vector<HalfInt> used;
        for (int j = 0; j < parts[i]; ++j) {
            HalfInt k = reduce(s + j, ctx);
            auto it = left.find(k);
            if (it == left.end() || it->second == 0) {
                ok = false;
                break;
            }
            --it->second;
            used.push_back(k);
        }
        if (ok) {
            cur.push_back(Segment(s, s + (parts[i] - 1)));
            assign_starts(parts, i + 1, c, classes, left, cur, ctx, out);
            cur.pop_back();
        }
        for (auto k : used) ++left[k];
    }
}

} // namespace detail

// Multisegments with the given support whose shape is exactly lam.
inline std::vector<Multisegment> multisegments_with(const Support& supp, const Partition& lam,
                                                    const ModContext& ctx) {
    std::vector<HalfInt> classes;
    for (const auto& [k, v] : supp)
        if (v > 0) classes.push_back(k);
    Support left = supp;
    std::vector<Segment> cur;
    std::vector<Multisegment> out;
    detail::assign_starts(lam.parts, 0, 0, classes, left, cur, ctx, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline CandidateSet enumerate_candidates(const Expr& product, const ModContext& ctx) {
    CandidateSet cs;
    cs.product = product;
    bool first = true;
    Multisegment base;
    for (const auto& f : product.factors) {
        if (f.degree() == 0) continue;
        if (!f.is_Z()) throw std::invalid_argument("solver: factors must have character support");
        if (first) cs.tag = f.tag;
        else if (f.tag != cs.tag) throw std::invalid_argument("solver: factors must share one ramified twist");
        first = false;
        if (!f.is_segment()) cs.segment_product = false;
        base = base + f.m;
    }
    cs.baseline = canonical(base, ctx);
    Partition lam = lambda_of(base);
    Support supp = support(base, ctx);
    for (const auto& p : partitions_of(base.degree())) {
        if (!dominates(p, lam)) continue;
        for (auto& m : multisegments_with(supp, p, ctx)) {
            if (p == lam && m != cs.baseline) continue;
            Candidate c;
            c.m = m;
            cs.candidates.push_back(c);
        }
    }
    std::sort(cs.candidates.begin(), cs.candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.m < y.m; });
    return cs;
}

// ---------------------------------------------------------------------------
// mu(m) and St(m)

inline std::optional<std::pair<Composition, LeviTuple>> mu_and_st_of(const Multisegment& m, const TagSet& tag,
                                                                     const ModContext& ctx) {
    auto ch = [&](HalfInt x) { return Expr(nu_n(1, x, tag)); };
    if (m.size() == 1) {
        const Segment& d = m.segs[0];
        LeviTuple t;
        for (HalfInt x = d.a; x <= d.b; x = x + 1) t.push_back(product_key(ch(x), ctx));
        return std::make_pair(ones(d.length()), t);
    }
    if (m.size() != 2) return std::nullopt;
    Segment big = m.segs[0], small = m.segs[1];
    if (small.length() > big.length()) std::swap(big, small);
    int n = m.degree();
    int k = small.length();
    Composition mu;
    LeviTuple t;
    for (int i = 0; i < n - 2 * k; ++i) {
        mu.push_back(1);
        t.push_back(product_key(ch(big.a + i), ctx));
    }
    for (int i = 0; i < k; ++i) {
        mu.push_back(2);
        Character x{tag, big.a + (n - 2 * k + i), 1};
        Character y{tag, small.a + i, 1};
        t.push_back(st_of_two_chars(x, y, ctx));
    }
    return std::make_pair(mu, t);
}

// ---------------------------------------------------------------------------
// Jacquet bookkeeping

namespace detail {

// Irreducible constituents of a block of degree <= 2.
inline std::optional<GrothElt> block_constituents(const Expr& e, const ModContext& ctx) {
    std::vector<Irreducible> fs;
    for (const auto& f : e.factors)
        if (f.degree() > 0) fs.push_back(f);
    if (fs.size() <= 1) return single(product_key(e, ctx));
    if (fs.size() == 2 && fs[0].degree() == 1 && fs[1].degree() == 1) {
        auto c0 = as_character(fs[0]);
        auto c1 = as_character(fs[1]);
        if (c0->tag != c1->tag) return single(product_key(e, ctx));
        return seg_char_constituents(fs[0].m.segs[0], fs[0].tag, *c1, ctx);
    }
    return std::nullopt;
}

} // namespace detail

// Multiplicity of the tuple st in r_mu(product), blocks semisimplified.
inline std::optional<int> st_multiplicity(const Expr& product, const Composition& mu, const LeviTuple& st,
                                          const ModContext& ctx) {
    auto r = geometric_lemma(product, mu, ctx);
    if (!r) return std::nullopt;
    int total = 0;
    for (const auto& [tuple, v] : r->terms) {
        int prodm = v;
        for (std::size_t i = 0; i < tuple.size() && prodm; ++i) {
            auto g = detail::block_constituents(tuple[i], ctx);
            if (!g) return std::nullopt;
            prodm *= g->mult(st[i]);
        }
        total += prodm;
    }
    return total;
}

inline std::optional<int> full_jacquet_length(const Expr& product, const ModContext& ctx) {
    auto r = jacquet_full(product, ctx);
    if (!r) return std::nullopt;
    return r->total();
}

inline bool tuple_contained(const TupleSum& small, const TupleSum& big) {
    for (const auto& [t, v] : small.terms)
        if (big.mult(t) < v) return false;
    return true;
}

// Multisegments obtained from m by elementary operations on linked pairs
// (union and intersection after aligning modulo e).
inline std::set<Multisegment> reachable_from(const Multisegment& m, const ModContext& ctx) {
    auto step = [&](const Segment& x, const Segment& y, std::vector<std::pair<Segment, std::optional<Segment>>>& out) {
        if (y.length() > x.length()) return;
        for (HalfInt k = y.a; k <= y.b; k = k + 1) {
            if (congruent(k, x.b + 1, ctx)) {
                Segment y2 = y.shifted(x.b + 1 - k);
                std::optional<Segment> inter;
                if (y2.a <= x.b) inter = Segment(y2.a, x.b);
                out.push_back({Segment(x.a, y2.b), inter});
            }
            if (congruent(k, x.a - 1, ctx)) {
                Segment y2 = y.shifted(x.a - 1 - k);
                std::optional<Segment> inter;
                if (x.a <= y2.b) inter = Segment(x.a, y2.b);
                out.push_back({Segment(y2.a, x.b), inter});
            }
        }
    };
    std::set<Multisegment> seen{canonical(m, ctx)};
    std::deque<Multisegment> todo{canonical(m, ctx)};
    while (!todo.empty()) {
        Multisegment cur = todo.front();
        todo.pop_front();
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = 0; j < cur.size(); ++j) {
                if (i == j) continue;
                std::vector<std::pair<Segment, std::optional<Segment>>> ops;
                step(cur.segs[i], cur.segs[j], ops);
                for (const auto& [u, in] : ops) {
                    Multisegment nx;
                    for (std::size_t k = 0; k < cur.size(); ++k)
                        if (k != i && k != j) nx.segs.push_back(cur.segs[k]);
                    nx.segs.push_back(u);
                    if (in) nx.segs.push_back(*in);
                    nx = canonical(nx, ctx);
                    if (seen.insert(nx).second) todo.push_back(nx);
                }
            }
    }
    return seen;
}

// ---------------------------------------------------------------------------
// Decomposition

struct TraceLine {
    std::string candidate, mu, st, multiplicity, verdict;
};

struct Decomposition {
    bool exact = false;
    GrothElt value; // lower bounds; at_least marks unpinned multiplicities
    CandidateSet cs;
    std::vector<std::string> notes;
    std::optional<int> jacquet_length;
};

class Solver {
public:
    explicit Solver(ModContext ctx) : ctx_(std::move(ctx)) {}

    const ModContext& ctx() const { return ctx_; }

    Decomposition decompose(const Expr& product) {
        Expr key = product_key(product, ctx_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Decomposition d = run(product);
        memo_[key] = d;
        return d;
    }

    // Full Jacquet module of Z(m) when derivable.
    std::optional<TupleSum> jacquet_of(const Multisegment& m, const TagSet& tag) {
        Multisegment cm = canonical(m, ctx_);
        auto k = std::make_pair(cm, tag);
        if (auto it = jmemo_.find(k); it != jmemo_.end()) return it->second;
        std::optional<TupleSum> out;
        Expr std_prod;
        for (const auto& s : cm.segs) std_prod.factors.push_back(Irreducible::Z({s}, tag));
        if (cm.size() == 1 || pairwise_unlinked(cm, ctx_)) {
            out = jacquet_full(std_prod, ctx_);
        } else if (cm.size() == 2 && depth_ < 6) {
            ++depth_;
            Decomposition d = decompose(std_prod);
            --depth_;
            auto whole = jacquet_full(std_prod, ctx_);
            if (d.exact && whole) {
                TupleSum acc = *whole;
                bool ok = true;
                for (const auto& [term, v] : d.value.terms) {
                    const Irreducible& z = term.factors[0];
                    if (canonical(z.m, ctx_) == cm) continue;
                    auto jz = jacquet_of(z.m, tag);
                    if (!jz) { ok = false; break; }
                    acc.add_all(*jz, -v);
                }
                if (ok && acc.nonnegative()) out = acc;
            }
        }
        jmemo_[k] = out;
        return out;
    }

private:
    Decomposition run(const Expr& product) {
        Decomposition d;
        d.cs = enumerate_candidates(product, ctx_);
        CandidateSet& cs = d.cs;
        auto whole = jacquet_full(product, ctx_);
        if (whole) d.jacquet_length = whole->total();
        std::set<Multisegment> reach;
        if (cs.segment_product) reach = reachable_from(cs.baseline, ctx_);

        for (auto& c : cs.candidates) {
            c.reachable = reach.count(c.m) > 0;
            if (c.m == cs.baseline) {
                c.ub = 1;
                if (cs.segment_product) {
                    c.lb = 1;
                    c.reason = "defining multisegment: multiplicity one";
                } else {
                    c.reason = "defining multisegment: at most once";
                }
                continue;
            }
            if (auto ms = mu_and_st_of(c.m, cs.tag, ctx_)) {
                c.mu = ms->first;
                c.st = ms->second;
                c.st_mult = st_multiplicity(product, ms->first, ms->second, ctx_);
                if (c.st_mult) {
                    if (*c.st_mult == 0) {
                        c.status = CandStatus::Excluded;
                        c.reason = "St(n) absent from r_mu(n)";
                        continue;
                    }
                    c.ub = *c.st_mult;
                }
            }
            if (whole) {
                if (auto jz = jacquet_of(c.m, cs.tag); jz && !tuple_contained(*jz, *whole)) {
                    c.status = CandStatus::Excluded;
                    c.reason = "r_(1,...,1) of Z(n) not contained in that of the product";
                    continue;
                }
            }
            if (c.reachable) {
                c.lb = 1;
                c.reason = "reachable by elementary operations";
            } else {
                c.reason = "not excluded";
            }
        }

        std::vector<Candidate*> alive;
        for (auto& c : cs.candidates)
            if (c.status != CandStatus::Excluded) alive.push_back(&c);
        if (alive.size() == 1) {
            alive[0]->lb = std::max(alive[0]->lb, 1);
            alive[0]->reason += "; sole survivor";
        }
        for (auto& c : cs.candidates)
            if (c.status == CandStatus::Excluded && c.reachable)
                d.notes.push_back("reachable candidate " + c.m.str() + " excluded by Jacquet data");

        bool exact = d.notes.empty();
        for (auto* c : alive) {
            bool pinned = c->ub && c->lb == *c->ub;
            if (c->lb > 0) c->status = CandStatus::Confirmed;
            Expr k = key_of(Irreducible::Z(c->m, cs.tag), ctx_);
            if (c->lb > 0) {
                if (pinned)
                    d.value.add(k, c->lb);
                else
                    d.value.add_lower_bound(k, c->lb);
            }
            if (!pinned) exact = false;
        }

        // Jacquet reconciliation: what the confirmed terms do not account
        // for must be a non-negative remainder.
        if (whole) {
            TupleSum rest = *whole;
            for (auto* c : alive) {
                if (c->lb == 0 || c->m == cs.baseline) continue;
                if (auto jz = jacquet_of(c->m, cs.tag)) rest.add_all(*jz, -c->lb);
            }
            if (!rest.nonnegative()) {
                d.notes.push_back("Jacquet reconciliation failed");
                exact = false;
            }
        }
        d.exact = exact;
        return d;
    }

    ModContext ctx_;
    std::map<Expr, Decomposition> memo_;
    std::map<std::pair<Multisegment, TagSet>, std::optional<TupleSum>> jmemo_;
    int depth_ = 0;
};

inline Decomposition decompose(const Expr& product, const ModContext& ctx) {
    Solver s(ctx);
    return s.decompose(product);
}

inline std::vector<TraceLine> trace_of(const Decomposition& d) {
    std::vector<TraceLine> out;
    for (const auto& c : d.cs.candidates) {
        TraceLine t;
        t.candidate = c.m.str();
        if (c.mu) {
            std::string s = "(";
            for (std::size_t i = 0; i < c.mu->size(); ++i) s += (i ? "," : "") + std::to_string((*c.mu)[i]);
            t.mu = s + ")";
        }
        if (c.st) t.st = render(*c.st);
        if (c.st_mult) t.multiplicity = std::to_string(*c.st_mult);
        t.verdict = std::string(status_name(c.status)) + " [" + std::to_string(c.lb) + "," +
                    (c.ub ? std::to_string(*c.ub) : std::string("?")) + "]: " + c.reason;
        out.push_back(t);
    }
    return out;
}

} // namespace msegcalc
