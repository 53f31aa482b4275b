#include <doctest.h>

#include "msegcalc/dsl.hpp"

using namespace msegcalc;

TEST_SUITE("dsl") {

TEST_CASE("products of factors") {
    ModContext c = ModContext::with_e(3);
    Expr x = parse_expr("Z[1,3] x nu^1 x 1_1", c);
    REQUIRE(x.size() == 3);
    CHECK(x.degree() == 5);
    CHECK(x.factors[0] == Irreducible::Z({Segment::ints(1, 3)}));
    CHECK(x.factors[1] == nu_n(1, HalfInt::of(1)));
    CHECK(x.factors[2] == one(1));
    CHECK(parse_expr("Z[1,3]*nu^1*1_1", c).factors == x.factors);
}

TEST_CASE("dual and twist suffixes") {
    ModContext c = ModContext::with_e(3);
    Expr x = parse_expr("Lambda_4^* . nu^1/2", c);
    CHECK(key_of(x.factors[0], c) == key_of(twist(make_Lambda_dual(4, c), HalfInt{1}), c));
    Expr y = parse_expr("Pi_3 . chi(a^2) . nu^-1", c);
    CHECK(y.factors[0].tag.at("a") == 2);
    CHECK(key_of(y.factors[0], c) ==
          key_of(twist(twist(make_Pi(3), Character{{{"a", 2}}, {}, 1}), HalfInt::of(-1)), c));
}

TEST_CASE("coordinates of Pi_4") {
    ModContext c = ModContext::char_zero();
    CHECK(parse_expr("Z[-1/2,3/2; 5/2,5/2]", c).factors[0] == make_Pi(4));
}

TEST_CASE("named factors") {
    ModContext c = ModContext::with_e(2);
    CHECK(parse_expr("St_3", c).factors[0] == make_St(3));
    CHECK(parse_expr("Phi_5", c).factors[0] == make_Phi(5));
    CHECK(parse_expr("Psi_5", c).factors[0] == make_Psi(5));
    CHECK(parse_expr("L[0,1]", c).factors[0] == nu_n(2, HalfInt::halves(-1)));
    CHECK(parse_expr("nu^-1/2_3", c).factors[0] == nu_n(3, HalfInt::halves(-1)));
    CHECK(parse_expr("cusp(3,rho) . nu^1", c).factors[0] == Irreducible::cusp(3, "rho", HalfInt::of(1)));
    CHECK(parse_expr("1_0 x 1_2", c).degree() == 2);
    CHECK(parse_expr("  (nu^1 . chi(a)) x 1_2 ", c).degree() == 3);
}

TEST_CASE("errors carry a position") {
    ModContext c = ModContext::with_e(3);
    auto pos = [&](const std::string& s) -> long {
        try {
            parse_expr(s, c);
        } catch (const ParseError& e) {
            return static_cast<long>(e.pos);
        }
        return -1;
    };
    CHECK(pos("Z[1,3") == 5);
    CHECK(pos("foo") == 0);
    CHECK(pos("1_2 + 1_1") == 4);
    CHECK(pos("nu^1/3") == 5);
    CHECK(pos("Z[3,1]") >= 0);
    CHECK(pos("Z[0,1/2]") >= 0);
    CHECK(pos("Pi_1") == 3);
    CHECK(pos("Phi_3") == 4);
    CHECK(pos("L[0,2]") == 0);
    CHECK(pos("1_2 x") == 5);
}

TEST_CASE("render round trip") {
    ModContext c = ModContext::with_e(3);
    for (const char* s : {"Z[1,3] x nu^1 x 1_1", "Z[-1/2,3/2; 5/2,5/2]", "nu^1/2_2 x (1_2 . chi(a^-1))",
                          "cusp(2,rho) x (cusp(3,sigma) . nu^1)", "1_0"}) {
        Expr x = parse_expr(s, c);
        CHECK(render(parse_expr(render(x), c)) == render(x));
    }
    CHECK(render(parse_expr("Z[1,3] x nu^1 x 1_1", c)) == "nu^2_3 x nu^1 x 1_1");
}

}
