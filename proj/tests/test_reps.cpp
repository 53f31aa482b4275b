#include <doctest.h>

#include "msegcalc/reps.hpp"

using namespace msegcalc;

TEST_SUITE("reps") {

TEST_CASE("named labels in coordinates") {
    CHECK(render(make_Pi(4)) == "Z[-1/2,3/2; 5/2,5/2]");
    CHECK(render(make_Pi(2)) == "Z[1/2,1/2; 3/2,3/2]");
    CHECK(render(one(3)) == "1_3");
    CHECK(render(nu_n(2, HalfInt::halves(1))) == "nu^1/2_2");
    CHECK(render(nu_n(1, HalfInt::of(-1))) == "nu^-1");
    CHECK(render(make_St(3)) == "Z[-1,-1; 0,0; 1,1]");
    CHECK(render(make_Phi(4)) == "Z[-1/2,1/2; -3/2,-1/2]");
    CHECK(render(make_Psi(4)) == "Z[-1/2,1/2; -5/2,-3/2]");
    CHECK(render(unit_rep()) == "1_0");
}

TEST_CASE("Lambda depends on f") {
    CHECK(make_Lambda(4, ModContext::with_e(2)) == one(4));
    CHECK(make_Lambda(4, ModContext::with_e(3)) == make_Pi(4));
    CHECK(make_Lambda(4, ModContext::char_zero()) == make_Pi(4));
    CHECK(make_Lambda(3, ModContext::banal_free(3)) == one(3));
}

TEST_CASE("contragredient and twists") {
    CHECK(dual(make_Pi(5)) == make_Pi_dual(5));
    CHECK(dual(dual(make_Phi(5))) == make_Phi(5));
    Irreducible t = twist(one(2), HalfInt::of(1));
    CHECK(t == nu_n(2, HalfInt::of(1)));
    Irreducible r = twist(one(2), Character::ramified("a"));
    CHECK(render(r) == "1_2 . chi(a)");
    CHECK(dual(r).tag.at("a") == -1);
    Irreducible c = Irreducible::cusp(3, "rho", HalfInt::of(1));
    CHECK(render(dual(c)) == "cusp(3,rho*) . nu^-1");
}

TEST_CASE("L-labels") {
    ModContext c3 = ModContext::with_e(3);
    ModContext c2 = ModContext::with_e(2);
    CHECK(make_L(Segment::ints(0, 1), c3) == Irreducible::Z({Segment::point(HalfInt::of(0)), Segment::point(HalfInt::of(1))}));
    CHECK(make_L(Segment::ints(0, 1), c2) == nu_n(2, HalfInt::halves(-1)));
    CHECK_THROWS_AS(make_L(Segment::ints(0, 2), c3), std::invalid_argument);
}

TEST_CASE("canonical keys") {
    ModContext c = ModContext::with_e(3);
    CHECK(key_of(twist(make_Pi(4), HalfInt::of(3)), c) == key_of(make_Pi(4), c));
    CHECK(key_of(twist(make_Pi(4), HalfInt::of(1)), c) != key_of(make_Pi(4), c));
    Expr ab{nu_n(1, HalfInt::of(0)), nu_n(1, HalfInt::of(1))};
    Expr ba{nu_n(1, HalfInt::of(1)), nu_n(1, HalfInt::of(0))};
    CHECK(product_key(ab, c) == product_key(ba, c));
}

TEST_CASE("formal sums") {
    GrothElt g;
    Expr x(one(2)), y(make_St(2));
    g.add(x, 2);
    g.add_lower_bound(y);
    CHECK(g.total() == 3);
    CHECK(g.lower_bound());
    g.add(y, -1);
    CHECK(g.terms.size() == 1);
    CHECK_FALSE(g.lower_bound());
    CHECK((g - g).empty());
    CHECK(render(g) == "2 1_2");
}

TEST_CASE("characters") {
    ModContext c = ModContext::with_e(2);
    CHECK(is_trivial(Character::nu(HalfInt::of(2)), c));
    CHECK_FALSE(is_trivial(Character::nu(HalfInt::of(1)), c));
    CHECK_FALSE(is_trivial(Character::ramified("a"), c));
    auto ch = as_character(nu_n(3, HalfInt::of(1)));
    REQUIRE(ch);
    CHECK(ch->degree == 3);
    CHECK(ch->exponent == HalfInt::of(1));
}

}
