#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msegcalc/structure.hpp"

namespace msegcalc {

enum class DStatus { Distinguished, NotDistinguished, Unknown };

inline const char* dstatus_name(DStatus s) {
    switch (s) {
    case DStatus::Distinguished: return "distinguished";
    case DStatus::NotDistinguished: return "not_distinguished";
    case DStatus::Unknown: return "unknown";
    }
    return "?";
}

struct DistinctionVerdict {
    DStatus status = DStatus::Unknown;
    std::optional<int> dimension;
    std::string certificate;
    // d = 2 for Pi_n at q = 1 is stated under two different divisibility
    // hypotheses on ell; set when that value is reported.
    bool dual_hypothesis = false;

    static DistinctionVerdict yes(std::string why, std::optional<int> d = std::nullopt) {
        return {DStatus::Distinguished, d, std::move(why), false};
    }
    static DistinctionVerdict no(std::string why) { return {DStatus::NotDistinguished, std::nullopt, std::move(why), false}; }
    static DistinctionVerdict unknown(std::string why) { return {DStatus::Unknown, std::nullopt, std::move(why), false}; }
};

// ---------------------------------------------------------------------------
// GL_2

// (d(V), e(V)) for V = Ind(alpha_1 (x) alpha_2) with n_trivial trivial alphas.
inline std::pair<int, int> gl2_invariant_form_dims(int n_trivial, const ModContext& ctx) {
    if (n_trivial < 0 || n_trivial > 2) throw std::invalid_argument("n_trivial must be 0, 1 or 2");
    if (n_trivial == 0) return {1, 0};
    if (ctx.q_is_one()) return {n_trivial + 1, n_trivial};
    return {n_trivial, n_trivial};
}

namespace detail {

inline std::vector<Irreducible> nonunit(const Expr& x) {
    std::vector<Irreducible> fs;
    for (const auto& f : x.factors)
        if (f.degree() > 0) fs.push_back(f);
    return fs;
}

// Canonical label of an irreducible given as a product; reducible products
// go through their unique irreducible quotient when it is catalogued.
inline std::optional<Expr> label_of(const Expr& x, const ModContext& ctx, std::string& note) {
    auto fs = nonunit(x);
    if (fs.size() == 1) return key_of(fs[0], ctx);
    auto iv = is_irreducible_product(Expr(fs), ctx);
    if (iv.status == Tri::Irreducible) return iv.key;
    if (iv.status == Tri::Reducible) {
        auto q = Q_of(Expr(fs), ctx);
        if (q.rep) {
            note = "reducible product, classified through its unique irreducible quotient; ";
            return irreducible_key(*q.rep, ctx);
        }
        note = "reducible product without catalogued quotient";
        return std::nullopt;
    }
    note = "irreducibility of the product undecided";
    return std::nullopt;
}

inline bool is_one_dim(const Expr& key) { return key.size() == 1 && key.factors[0].is_segment(); }

inline bool is_trivial_rep(const Expr& key, const ModContext& ctx) {
    if (!is_one_dim(key)) return false;
    auto c = as_character(key.factors[0]);
    return is_trivial(*c, ctx);
}

// St . nu^c for the linked pair [x] + [y].
inline HalfInt st_twist(HalfInt x, HalfInt y, const ModContext& ctx) {
    if (congruent(y, x + 1, ctx)) return x + HalfInt::halves(1);
    return y + HalfInt::halves(1);
}

} // namespace detail

inline DistinctionVerdict classify_gl2(const Expr& pi, const ModContext& ctx) {
    if (pi.degree() != 2) throw std::invalid_argument("classify_gl2 needs degree 2");
    std::string note;
    auto key = detail::label_of(pi, ctx, note);
    if (!key) return DistinctionVerdict::unknown(note);
    auto fs = key->factors;
    bool q1 = ctx.q_is_one();
    if (fs.size() == 1) {
        const Irreducible& x = fs[0];
        if (is_cuspidal(x, ctx)) return DistinctionVerdict::yes(note + "cuspidal: invariant form unique", 1);
        if (x.is_segment()) {
            if (detail::is_trivial_rep(*key, ctx)) return DistinctionVerdict::yes(note + "trivial character", 1);
            return DistinctionVerdict::no(note + "nontrivial one-dimensional representation");
        }
        // two points: Steinberg twist or irreducible principal series
        HalfInt a = x.m.segs[0].a, b = x.m.segs[1].a;
        if (linked(x.m.segs[0], x.m.segs[1], ctx)) {
            HalfInt c = detail::st_twist(a, b, ctx);
            bool plain = x.tag.empty() && congruent(c, HalfInt{}, ctx);
            if (q1 && plain && ctx.ell() > 2)
                return DistinctionVerdict::yes(note + "Steinberg with q = 1 and ell > 2: two independent forms", 2);
            return DistinctionVerdict::yes(note + "twist of Steinberg: d = 1", 1);
        }
        HalfInt m = HalfInt::halves(-1);
        bool one_trivial = x.tag.empty() && (congruent(a, m, ctx) != congruent(b, m, ctx));
        if (q1 && one_trivial)
            return DistinctionVerdict::yes(note + "V(1, chi) with chi nontrivial and q = 1: d = 2", 2);
        return DistinctionVerdict::yes(note + "irreducible principal series: d = 1", 1);
    }
    // two characters with different ramified parts; at q = 1 the
    // unnormalized V(a1, a2) is a1 nu^{-1/2} x a2 nu^{1/2} = a1 nu^{1/2} x a2 nu^{1/2}
    auto c0 = as_character(fs[0]);
    auto c1 = as_character(fs[1]);
    if (!c0 || !c1) return DistinctionVerdict::unknown("unrecognized degree-2 label");
    auto v_trivial = [&](const Character& c) { return is_trivial(Character{c.tag, c.exponent + HalfInt::halves(1), 1}, ctx); };
    bool one_trivial = v_trivial(*c0) != v_trivial(*c1);
    if (q1 && one_trivial) return DistinctionVerdict::yes(note + "V(1, chi) with chi nontrivial and q = 1: d = 2", 2);
    return DistinctionVerdict::yes(note + "irreducible principal series: d = 1", 1);
}

inline DistinctionVerdict cuspidal_distinguished(int n) {
    if (n < 2) throw std::invalid_argument("cuspidal_distinguished needs n >= 2");
    if (n == 2) return DistinctionVerdict::yes("cuspidal of degree 2", 1);
    return DistinctionVerdict::no("cuspidal of degree >= 3: no invariant form on the mirabolic restriction");
}

// ---------------------------------------------------------------------------
// Main classifier

namespace detail {

// key = Z(seg) x rest, with seg equivalent to the given unramified segment;
// returns the candidate rest (as an Expr) for each matching segment.
inline std::vector<Expr> split_off(const Expr& key, const Segment& seg, const ModContext& ctx) {
    std::vector<Expr> out;
    for (std::size_t i = 0; i < key.size(); ++i) {
        const Irreducible& f = key.factors[i];
        if (!f.is_Z() || !f.tag.empty()) continue;
        for (std::size_t j = 0; j < f.m.size(); ++j) {
            if (!seg_equivalent(f.m.segs[j], seg, ctx)) continue;
            Expr rest;
            Multisegment left;
            for (std::size_t k = 0; k < f.m.size(); ++k)
                if (k != j) left.segs.push_back(f.m.segs[k]);
            if (!left.empty()) rest.factors.push_back(Irreducible::Z(left));
            for (std::size_t k = 0; k < key.size(); ++k)
                if (k != i) rest.factors.push_back(key.factors[k]);
            out.push_back(rest);
        }
    }
    return out;
}

// key == irreducible product Z(seg) x rest for one of the splittings.
inline std::optional<Expr> product_match(const Expr& key, const Segment& seg, const ModContext& ctx,
                                         const std::function<bool(const Expr&)>& accept_rest, bool& undecided) {
    for (const auto& rest : split_off(key, seg, ctx)) {
        if (!accept_rest(rest)) continue;
        Expr prod = Expr{Irreducible::Z({seg})} * rest;
        auto iv = is_irreducible_product(prod, ctx);
        if (iv.status == Tri::Unknown) undecided = true;
        if (iv.status == Tri::Irreducible && *iv.key == key) return rest;
    }
    return std::nullopt;
}

inline bool char_support(const Expr& key) {
    for (const auto& f : key.factors)
        if (!f.is_Z()) return false;
    return true;
}

} // namespace detail

class Classifier {
public:
    explicit Classifier(ModContext ctx) : ctx_(std::move(ctx)) {}
    const ModContext& ctx() const { return ctx_; }

    DistinctionVerdict classify(const Expr& pi) {
        Expr k = product_key(pi, ctx_);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        DistinctionVerdict v = run(pi);
        memo_[k] = v;
        return v;
    }

private:
    DistinctionVerdict run(const Expr& pi) {
        int n = pi.degree();
        if (n == 1) return DistinctionVerdict::yes("degree 1: H is trivial", 1);
        if (n < 1) throw std::invalid_argument("classify needs degree >= 1");
        if (n == 2) return classify_gl2(pi, ctx_);
        std::string note;
        auto key = detail::label_of(pi, ctx_, note);
        if (!key) return DistinctionVerdict::unknown(note);
        if (key->size() == 1 && is_cuspidal(key->factors[0], ctx_)) {
            auto v = cuspidal_distinguished(n);
            v.certificate = note + v.certificate;
            return v;
        }
        if (detail::is_one_dim(*key)) {
            if (detail::is_trivial_rep(*key, ctx_)) return DistinctionVerdict::yes(note + "trivial character");
            return DistinctionVerdict::no(note + "nontrivial character is not invariant under H");
        }
        if (ctx_.q_is_one()) return classify_q1(*key, n, note);
        return classify_list(*key, n, note);
    }

    DistinctionVerdict classify_list(const Expr& key, int n, const std::string& note) {
        const ModContext& ctx = ctx_;
        if (key == key_of(make_Lambda(n, ctx), ctx)) return DistinctionVerdict::yes(note + "Lambda_n");
        if (key == key_of(make_Lambda_dual(n, ctx), ctx)) return DistinctionVerdict::yes(note + "dual of Lambda_n");
        bool undecided = false;
        for (int s : {1, -1}) {
            Segment seg = segment_of_char(n - 1, HalfInt::halves(s));
            auto is_char1 = [](const Expr& r) { return r.degree() == 1; };
            if (detail::product_match(key, seg, ctx, is_char1, undecided)) {
                return DistinctionVerdict::yes(note + "irreducible nu_{n-1}^" + HalfInt::halves(s).str() +
                                               " x chi");
            }
        }
        {
            Segment seg = segment_of_char(n - 2, HalfInt{});
            auto inf_dim2 = [&](const Expr& r) {
                if (r.degree() != 2) return false;
                auto fs = detail::nonunit(r);
                if (fs.size() == 1 && fs[0].is_segment()) return false;
                if (fs.size() == 1) return true;
                auto iv = is_irreducible_product(Expr(fs), ctx);
                return iv.status == Tri::Irreducible;
            };
            if (detail::product_match(key, seg, ctx, inf_dim2, undecided))
                return DistinctionVerdict::yes(note + "irreducible 1_{n-2} x tau, tau infinite-dimensional");
        }
        if (undecided) return DistinctionVerdict::unknown(note + "list membership depends on an undecided product");
        if (!detail::char_support(key)) {
            return DistinctionVerdict::no(note + "cuspidal support not made of characters and not 1_{n-2} x cuspidal");
        }
        return DistinctionVerdict::no(note + "not in the list of distinguished representations (e > 1)");
    }

    // q = 1: only the twists of Lambda_n and Pi_n are settled.
    DistinctionVerdict classify_q1(const Expr& key, int n, const std::string& note) {
        const ModContext& ctx = ctx_;
        // Lambda_n is Pi_n or 1_n here; characters were handled by the caller.
        if (key.size() == 1) {
            const Irreducible& x = key.factors[0];
            if (auto p = match_Pi(x, ctx); p && p->n == n) {
                Character chi{x.tag, p->s, 1};
                if (!is_trivial(chi, ctx)) return DistinctionVerdict::no(note + "nontrivial twist of Pi_n");
                DistinctionVerdict v = DistinctionVerdict::yes(note + "Pi_n at q = 1: three invariant forms on V_n", 2);
                v.dual_hypothesis = true;
                v.certificate += "; d = 2 is stated both for ell | n and for ell not dividing n";
                return v;
            }
        }
        if (!detail::char_support(key))
            return DistinctionVerdict::no(note + "cuspidal support not made of characters and not 1_{n-2} x cuspidal");
        return DistinctionVerdict::unknown(note + "q = 1: classification incomplete beyond twists of Pi_n");
    }

    ModContext ctx_;
    std::map<Expr, DistinctionVerdict> memo_;
};

inline DistinctionVerdict classify(const Expr& pi, const ModContext& ctx) {
    Classifier c(ctx);
    return c.classify(pi);
}

// ---------------------------------------------------------------------------
// Three orbits

enum class Tribool { False, True, Unknown };

inline const char* tribool_name(Tribool t) {
    return t == Tribool::True ? "true" : t == Tribool::False ? "false" : "unknown";
}

struct OrbitConditions {
    Tribool A = Tribool::False, B = Tribool::False, C = Tribool::Unknown;
    DistinctionVerdict conclusion;
};

namespace detail {

inline Tribool from_verdict(const DistinctionVerdict& v) {
    if (v.status == DStatus::Distinguished) return Tribool::True;
    if (v.status == DStatus::NotDistinguished) return Tribool::False;
    return Tribool::Unknown;
}

// Some constituent of (x^{(1)} . nu^s) is the trivial character.
inline Tribool first_derivative_has_trivial(const Expr& x, HalfInt s, const ModContext& ctx) {
    auto d = derivative(x, 1, ctx);
    if (!d) return Tribool::Unknown;
    GrothElt t = twist(*d, Character::nu(s), ctx);
    int deg = x.degree() - 1;
    Expr triv = deg == 0 ? Expr(unit_rep()) : key_of(one(deg), ctx);
    for (const auto& [k, v] : t.terms)
        if (v > 0 && (deg == 0 ? k.degree() == 0 : k == triv)) return Tribool::True;
    return Tribool::False;
}

} // namespace detail

inline OrbitConditions three_orbit_conditions(const Expr& rho, const Expr& tau, Classifier& cl) {
    const ModContext& ctx = cl.ctx();
    int k = rho.degree();
    int n = k + tau.degree();
    if (k < 1 || k > n - 1) throw std::invalid_argument("three_orbit_conditions needs 1 <= k <= n-1");
    OrbitConditions r;
    auto same = [&](const Expr& x, const Irreducible& y) { return product_key(x, ctx) == key_of(y, ctx); };
    // A: rho = nu_k^{(n-2-k)/2} and tau . nu^{k/2} distinguished
    if (same(rho, nu_n(k, HalfInt::halves(n - 2 - k))))
        r.A = detail::from_verdict(cl.classify(twist(tau, Character::nu(HalfInt::halves(k)))));
    // B: rho . nu^{-(n-k)/2} distinguished and tau = nu_{n-k}^{-(k-2)/2}
    if (same(tau, nu_n(n - k, HalfInt::halves(-(k - 2)))))
        r.B = detail::from_verdict(cl.classify(twist(rho, Character::nu(HalfInt::halves(-(n - k))))));
    // C: trivial constituents of the twisted first derivatives
    Tribool c1 = detail::first_derivative_has_trivial(rho, HalfInt::halves(-(n - 1 - k)), ctx);
    Tribool c2 = detail::first_derivative_has_trivial(dual(tau), HalfInt::halves(-(k - 1)), ctx);
    if (c1 == Tribool::False || c2 == Tribool::False)
        r.C = Tribool::False;
    else if (c1 == Tribool::True && c2 == Tribool::True)
        r.C = Tribool::True;
    else
        r.C = Tribool::Unknown;

    if (r.A == Tribool::True || r.B == Tribool::True)
        r.conclusion = DistinctionVerdict::yes(r.A == Tribool::True ? "condition A holds" : "condition B holds");
    else if (r.A == Tribool::False && r.B == Tribool::False && r.C == Tribool::False)
        r.conclusion = DistinctionVerdict::no("none of the three orbit conditions holds");
    else
        r.conclusion = DistinctionVerdict::unknown("three orbit conditions inconclusive");
    return r;
}

inline OrbitConditions three_orbit_conditions(const Expr& rho, const Expr& tau, const ModContext& ctx) {
    Classifier cl(ctx);
    return three_orbit_conditions(rho, tau, cl);
}

// ---------------------------------------------------------------------------
// Derivative test

enum class DerivTest { NotDistinguished, Inconclusive };

struct DerivTestResult {
    DerivTest verdict = DerivTest::Inconclusive;
    std::string reason;
};

namespace detail {

inline bool contains(const GrothElt& g, const Expr& k) { return g.mult(k) > 0; }

// Representations whose first derivative can have nu_{n-1}^{-1/2} as a
// quotient: 1_n, Lambda_n^* and irreducible nu_{n-1}^{-1/2} x mu.
inline bool first_derivative_shape_possible(const Expr& key, int n, const ModContext& ctx) {
    if (key == key_of(one(n), ctx)) return true;
    if (key == key_of(make_Lambda_dual(n, ctx), ctx)) return true;
    Segment seg = segment_of_char(n - 1, HalfInt::halves(-1));
    for (const auto& rest : split_off(key, seg, ctx))
        if (rest.degree() == 1) return true;
    return false;
}

} // namespace detail

inline DerivTestResult derivative_test(const Expr& pi, const ModContext& ctx) {
    int n = pi.degree();
    if (n < 3) return {DerivTest::Inconclusive, "needs degree >= 3"};
    std::string note;
    auto key = detail::label_of(pi, ctx, note);
    if (!key) return {DerivTest::Inconclusive, note};
    bool cond1;
    std::string why1;
    if (auto d1 = derivative(*key, 1, ctx)) {
        cond1 = !detail::contains(*d1, key_of(nu_n(n - 1, HalfInt::halves(-1)), ctx));
        why1 = cond1 ? "first derivative has no nu_{n-1}^{-1/2}" : "first derivative contains nu_{n-1}^{-1/2}";
    } else {
        cond1 = !detail::first_derivative_shape_possible(*key, n, ctx);
        why1 = cond1 ? "shape excludes a nu_{n-1}^{-1/2} quotient of the first derivative"
                     : "first derivative not computable";
    }
    if (!cond1) return {DerivTest::Inconclusive, why1};
    auto d2 = derivative(*key, 2, ctx);
    if (!d2) return {DerivTest::Inconclusive, why1 + "; second derivative not computable"};
    if (detail::contains(*d2, key_of(one(n - 2), ctx)))
        return {DerivTest::Inconclusive, why1 + "; second derivative contains 1_{n-2}"};
    return {DerivTest::NotDistinguished, why1 + "; second derivative has no 1_{n-2}"};
}

// ---------------------------------------------------------------------------
// Reduction list: the shapes rho x chi whose quotients must be examined.

struct ReductionCase {
    std::string id;
    std::string rho;
    std::string chi;
    std::string constraint;
};

inline std::vector<ReductionCase> reduction_list(int n, const ModContext& ctx) {
    if (n < 3) throw std::invalid_argument("reduction_list needs n >= 3");
    if (!ctx.e_greater_one()) throw std::invalid_argument("reduction_list needs e > 1");
    auto h = [](int k) { return HalfInt::halves(k).str(); };
    return {
        {"1", "nu_" + std::to_string(n - 1) + "^-1/2", "chi", "any chi"},
        {"1", "nu_" + std::to_string(n - 1) + "^1/2", "chi", "any chi"},
        {"2", "1_" + std::to_string(n - 2) + " x mu", "chi", "mu not in {nu^" + h(-(n - 1)) + ", nu^" + h(n - 1) + "}"},
        {"3", "Lambda_" + std::to_string(n - 1) + "^* . nu^1/2", "chi", "any chi"},
        {"4.a", "nu_" + std::to_string(n - 1) + "^1/2", "nu^" + h(-(n - 3)), "included in 1"},
        {"4.b", "1_" + std::to_string(n - 2) + " x mu", "nu^" + h(-(n - 3)),
         "mu not in {nu^" + h(-(n - 1)) + ", nu^" + h(n - 1) + "}; included in 2"},
        {"4.c", "nu_" + std::to_string(n - 2) + " x mu", "nu^" + h(-(n - 3)),
         "mu not in {nu^" + h(-(n - 3)) + ", nu^" + h(n + 1) + "}"},
        {"4.d", "nu_" + std::to_string(n - 3) + "^1/2 x tau", "nu^" + h(-(n - 3)), "tau of degree 2, infinite-dimensional"},
        {"4.e", "Lambda_" + std::to_string(n - 1) + " . nu^1/2", "nu^" + h(-(n - 3)), "see 3 for the dual"},
        {"4.e", "Lambda_" + std::to_string(n - 1) + "^* . nu^1/2", "nu^" + h(-(n - 3)), "included in 3"},
    };
}

// ---------------------------------------------------------------------------
// Dual closure

struct DualCheck {
    bool ok = true;
    int checked = 0;
    std::vector<std::string> counterexamples;
};

namespace detail {

inline std::vector<Character> char_grid(int span) {
    std::vector<Character> cs;
    for (int t = -2 * span; t <= 2 * span; ++t) cs.push_back(Character::nu(HalfInt{t}));
    cs.push_back(Character::ramified("t"));
    return cs;
}

// Classified-list members (as products) for degree n, plus non-listed labels.
inline std::vector<Expr> listed_grid(int n, const ModContext& ctx) {
    std::vector<Expr> out;
    out.push_back(Expr(one(n)));
    out.push_back(Expr(make_Lambda(n, ctx)));
    out.push_back(Expr(make_Lambda_dual(n, ctx)));
    for (const auto& c : char_grid(3)) {
        for (int s : {1, -1}) {
            Expr p{nu_n(n - 1, HalfInt::halves(s)), char_rep(c)};
            if (is_irreducible_product(p, ctx).status == Tri::Irreducible) out.push_back(p);
        }
    }
    if (n >= 3) {
        std::vector<Irreducible> taus{Irreducible::cusp(2, "c")};
        for (int t = -6; t <= 6; ++t) taus.push_back(twist(make_St(2), HalfInt{t}));
        for (int t = -4; t <= 4; ++t)
            taus.push_back(Irreducible::Z({Segment::point(HalfInt{}), Segment::point(HalfInt{t})}));
        taus.push_back(twist(make_St(2), Character::ramified("t")));
        for (const auto& tau : taus) {
            Expr p{one(n - 2), tau};
            if (is_irreducible_product(p, ctx).status == Tri::Irreducible) out.push_back(p);
        }
    }
    return out;
}

inline std::vector<Expr> unlisted_grid(int n, const ModContext& ctx) {
    std::vector<Expr> out;
    for (int t = -4; t <= 4; ++t) {
        if (t) out.push_back(Expr(nu_n(n, HalfInt{t})));
        if (n >= 2) {
            out.push_back(Expr(twist(make_Pi(n), HalfInt{t})));
            out.push_back(Expr(twist(make_Pi_dual(n), HalfInt{t})));
        }
        if (n >= 4) {
            out.push_back(Expr(twist(make_Phi(n), HalfInt{t})));
            out.push_back(Expr(twist(make_Psi(n), HalfInt{t})));
        }
    }
    out.push_back(Expr(nu_n(n, {}, {{"t", 1}})));
    if (n >= 3) out.push_back(Expr(make_St(n)));
    (void)ctx;
    return out;
}

} // namespace detail

inline DualCheck dual_closure_check(const ModContext& ctx, int nmax = 10) {
    if (!ctx.e_greater_one()) throw std::invalid_argument("dual_closure_check needs e > 1");
    Classifier cl(ctx);
    DualCheck r;
    for (int n = 2; n <= nmax; ++n) {
        auto grid = detail::listed_grid(n, ctx);
        auto more = detail::unlisted_grid(n, ctx);
        grid.insert(grid.end(), more.begin(), more.end());
        for (const auto& p : grid) {
            auto a = cl.classify(p);
            auto b = cl.classify(dual(p));
            ++r.checked;
            if (a.status != b.status) {
                r.ok = false;
                r.counterexamples.push_back(render(p) + ": " + dstatus_name(a.status) + " vs dual " +
                                            dstatus_name(b.status));
            }
        }
    }
    return r;
}

} // namespace msegcalc
