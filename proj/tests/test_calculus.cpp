#include <doctest.h>

#include "msegcalc/calculus.hpp"

using namespace msegcalc;

namespace {
Irreducible pt(int x) { return nu_n(1, HalfInt::of(x)); }
Irreducible seg(int a, int b) { return Irreducible::Z({Segment::ints(a, b)}); }
}

TEST_SUITE("calculus") {

TEST_CASE("Jacquet module of a segment is one tensor") {
    ModContext c = ModContext::char_zero();
    auto t = geometric_lemma(Expr(seg(0, 2)), Composition{1, 2}, c);
    REQUIRE(t);
    CHECK(t->terms.size() == 1);
    CHECK(t->terms.begin()->first == LeviTuple{Expr(pt(0)), Expr(seg(1, 2))});
}

TEST_CASE("geometric lemma on principal series") {
    ModContext c = ModContext::char_zero();
    // r_(1,1,1) of a product of three distinct characters: all 6 orderings
    auto t = geometric_lemma(Expr{pt(0), pt(2), pt(5)}, ones(3), c);
    REQUIRE(t);
    CHECK(t->terms.size() == 6);
    CHECK(t->total() == 6);
    // r_(1,1)(Z([0,1]) x nu^0): shuffles of (0,1) with (0)
    auto u = geometric_lemma(Expr{seg(0, 1), pt(0)}, ones(3), c);
    REQUIRE(u);
    CHECK(u->total() == 3);
    CHECK(u->mult({Expr(pt(0)), Expr(pt(0)), Expr(pt(1))}) == 2);
    CHECK(u->mult({Expr(pt(0)), Expr(pt(1)), Expr(pt(0))}) == 1);
}

TEST_CASE("Jacquet module of an L-pair") {
    ModContext c = ModContext::with_e(3);
    auto t = geometric_lemma(Expr(make_L(Segment::ints(0, 1), c)), ones(2), c);
    REQUIRE(t);
    CHECK(t->total() == 1);
    CHECK(t->terms.begin()->first == LeviTuple{Expr(pt(1)), Expr(pt(0))});
}

TEST_CASE("irreducibility of products") {
    ModContext c0 = ModContext::char_zero();
    CHECK(is_irreducible_product(Expr{seg(0, 1), seg(2, 2)}, c0).status == Tri::Reducible);
    CHECK(is_irreducible_product(Expr{seg(0, 3), seg(1, 2)}, c0).status == Tri::Irreducible);
    CHECK(is_irreducible_product(Expr{seg(0, 1), seg(3, 4)}, c0).status == Tri::Irreducible);
    ModContext c3 = ModContext::with_e(3);
    CHECK(is_irreducible_product(Expr{pt(0), pt(2)}, c3).status == Tri::Reducible);
    CHECK(is_irreducible_product(Expr{pt(0), Irreducible::Z({Segment::ints(0, 0)}, {{"a", 1}})}, c3).status ==
          Tri::Irreducible);
    // Z([1,3]) x L([0,1]): the L-segment is not juxtaposed to [1,3] mod 3
    auto v = is_irreducible_product(Expr{seg(1, 3), make_L(Segment::ints(0, 1), c3)}, c3);
    CHECK(v.status == Tri::Irreducible);
    REQUIRE(v.key);
    CHECK(v.key->size() == 1);
}

TEST_CASE("segment times character") {
    ModContext c2 = ModContext::with_e(2);
    auto g = seg_char_constituents(Segment::ints(1, 1), {}, Character::nu(HalfInt::of(0)), c2);
    REQUIRE(g);
    CHECK(g->total() == 3);
    ModContext q1 = ModContext::banal_free(3);
    auto h = seg_char_constituents(Segment::ints(0, 1), {}, Character::nu(HalfInt::of(0)), q1);
    REQUIRE(h);
    CHECK(h->total() == 3);
    CHECK(h->mult(key_of(one(3), q1)) == 2);
}

TEST_CASE("derivatives of characters and products") {
    ModContext c = ModContext::char_zero();
    auto d = derivative(seg(0, 2), 1, c);
    REQUIRE(d);
    CHECK(*d == single(key_of(seg(0, 1), c)));
    auto d2 = derivative(seg(0, 2), 2, c);
    REQUIRE(d2);
    CHECK(d2->empty());
    auto l = derivative(Expr{pt(0), pt(3)}, 1, c);
    REQUIRE(l);
    GrothElt want;
    want.add(Expr(pt(0)));
    want.add(Expr(pt(3)));
    CHECK(*l == want);
    auto top = derivative(Expr{pt(0), pt(3)}, 2, c);
    REQUIRE(top);
    CHECK(*top == unit_elt());
}

TEST_CASE("derivatives of Pi_n") {
    ModContext c = ModContext::char_zero();
    auto d2 = derivative(make_Pi(4), 2, c);
    REQUIRE(d2);
    CHECK(*d2 == single(key_of(one(2), c)));
    auto d3 = derivative(make_Pi(4), 3, c);
    REQUIRE(d3);
    CHECK(d3->empty());
    // f = n = 2: Pi_2 is cuspidal
    ModContext c2 = ModContext::with_e(2);
    auto z = derivative(make_Pi(2), 1, c2);
    REQUIRE(z);
    CHECK(z->empty());
}

TEST_CASE("St_3 derivatives") {
    ModContext c = ModContext::char_zero();
    auto d1 = derivative(make_St(3), 1, c);
    REQUIRE(d1);
    CHECK(*d1 == single(key_of(Irreducible::Z({Segment::point(HalfInt{}), Segment::point(HalfInt::of(1))}), c)));
    auto d2 = derivative(make_St(3), 2, c);
    REQUIRE(d2);
    CHECK(*d2 == single(key_of(pt(1), c)));
    // f = 3: cuspidal, only the top derivative survives
    ModContext c3 = ModContext::with_e(3);
    CHECK(derivative(make_St(3), 1, c3)->empty());
    CHECK(*derivative(make_St(3), 3, c3) == unit_elt());
}

TEST_CASE("cuspidal detection") {
    CHECK(is_cuspidal(make_St(2), ModContext::with_e(2)));
    CHECK_FALSE(is_cuspidal(make_St(2), ModContext::with_e(3)));
    CHECK(is_cuspidal(make_St(3), ModContext::with_e(3)));
    CHECK(is_cuspidal(Irreducible::cusp(4, "rho"), ModContext::char_zero()));
}

}
