#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "msegcalc/reps.hpp"

namespace msegcalc {

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(std::size_t p, const std::string& msg)
        : std::runtime_error("parse error at column " + std::to_string(p + 1) + ": " + msg), pos(p) {}
};

namespace detail {

class Parser {
public:
    Parser(std::string text, const ModContext& ctx) : s_(std::move(text)), ctx_(ctx) {}

    Expr parse() {
        Expr e;
        e.factors.push_back(factor());
        skip();
        while (i_ < s_.size()) {
            if (peek() == 'x' || peek() == '*') {
                ++i_;
                e.factors.push_back(factor());
                skip();
            } else {
                fail("expected 'x' or '*' between factors");
            }
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(i_, msg); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(const std::string& tok) {
        skip();
        if (s_.compare(i_, tok.size(), tok) == 0) {
            i_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok) {
        if (!accept(tok)) fail("expected '" + tok + "'");
    }

    std::int64_t integer() {
        skip();
        bool neg = false;
        if (i_ < s_.size() && s_[i_] == '-') {
            neg = true;
            ++i_;
            skip();
        }
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected an integer");
        if (i_ - start > 9) fail("integer too large");
        std::int64_t v = std::stoll(s_.substr(start, i_ - start));
        return neg ? -v : v;
    }

    int count() {
        std::int64_t v = integer();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<int>(v);
    }

    HalfInt half() {
        skip();
        if (i_ < s_.size() && s_[i_] == '-') {
            ++i_;
            return -half();
        }
        std::int64_t v = integer();
        if (accept("/")) {
            std::size_t at = i_;
            if (integer() != 2) throw ParseError(at, "only the denominator 2 is allowed");
            return HalfInt::halves(v);
        }
        return HalfInt::of(v);
    }

    std::string ident() {
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        if (start == i_) fail("expected a name");
        return s_.substr(start, i_ - start);
    }

    // '.' nu^h | '.' chi(tag[^k]) | '^*', repeated
    Irreducible twists(Irreducible x) {
        for (;;) {
            if (accept("^*")) {
                x = dual(x);
                continue;
            }
            if (peek() != '.') return x;
            ++i_;
            if (accept("nu^")) {
                x = twist(x, Character::nu(half()));
            } else if (accept("chi(")) {
                std::string t = ident();
                int k = 1;
                if (accept("^")) k = static_cast<int>(integer());
                expect(")");
                x = twist(x, Character{{{t, k}}, {}, 1});
            } else {
                fail("expected 'nu^' or 'chi(' after '.'");
            }
        }
    }

    int degree_arg(int min, const char* what) {
        std::size_t at = i_;
        int n = count();
        if (n < min) throw ParseError(at, std::string(what) + " needs n >= " + std::to_string(min));
        return n;
    }

    Irreducible factor() {
        skip();
        std::size_t at = i_;
        if (accept("(")) {
            Expr inner;
            inner.factors.push_back(factor());
            if (peek() == 'x' || peek() == '*') fail("parenthesized products are not supported");
            expect(")");
            return twists(inner.factors[0]);
        }
        try {
            if (accept("Z[")) {
                Multisegment m;
                do {
                    HalfInt a = half();
                    expect(",");
                    HalfInt b = half();
                    std::size_t here = i_;
                    try {
                        m.segs.emplace_back(a, b);
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(here, e.what());
                    }
                } while (accept(";"));
                expect("]");
                return twists(Irreducible::Z(m));
            }
            if (accept("L[")) {
                HalfInt a = half();
                expect(",");
                HalfInt b = half();
                expect("]");
                Segment d(a, b);
                if (d.length() > 2) throw ParseError(at, "L-labels have length 1 or 2");
                return twists(make_L(d, ctx_));
            }
            if (accept("nu^")) {
                HalfInt x = half();
                int n = 1;
                if (accept("_")) n = degree_arg(1, "nu^x_n");
                return twists(nu_n(n, x));
            }
            if (accept("1_")) {
                int n = count();
                return twists(n == 0 ? unit_rep() : one(n));
            }
            if (accept("St_")) return twists(make_St(degree_arg(1, "St_n")));
            if (accept("Pi_")) return twists(make_Pi(degree_arg(2, "Pi_n")));
            if (accept("Lambda_")) return twists(make_Lambda(degree_arg(2, "Lambda_n"), ctx_));
            if (accept("Phi_")) return twists(make_Phi(degree_arg(4, "Phi_n")));
            if (accept("Psi_")) return twists(make_Psi(degree_arg(4, "Psi_n")));
            if (accept("cusp(")) {
                int d = degree_arg(2, "cusp(d, name)");
                expect(",");
                std::string name = ident();
                expect(")");
                return twists(Irreducible::cusp(d, name));
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(at, e.what());
        }
        fail("expected a factor");
    }

    std::string s_;
    const ModContext& ctx_;
    std::size_t i_ = 0;
};

} // namespace detail

inline Expr parse_expr(const std::string& text, const ModContext& ctx) {
    detail::Parser p(text, ctx);
    return p.parse();
}

} // namespace msegcalc
