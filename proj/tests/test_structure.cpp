#include <doctest.h>

#include "msegcalc/structure.hpp"

using namespace msegcalc;

namespace {
Irreducible seg(int a, int b) { return Irreducible::Z({Segment::ints(a, b)}); }
Expr zk(std::initializer_list<std::pair<int, int>> segs, const ModContext& c) {
    Multisegment m;
    for (auto [a, b] : segs) m.segs.push_back(Segment::ints(a, b));
    return key_of(Irreducible::Z(m), c);
}
}

TEST_SUITE("structure") {

TEST_CASE("segment times character, one linked end") {
    ModContext c = ModContext::char_zero();
    auto r = structure_Z_times_char(Segment::ints(1, 3), {}, Character::nu({}), c);
    REQUIRE(r.known);
    CHECK(r.length() == 2);
    CHECK(r.constituents.mult(zk({{0, 3}}, c)) == 1);
    CHECK(r.constituents.mult(zk({{1, 3}, {0, 0}}, c)) == 1);
    CHECK(r.cosocle == zk({{0, 3}}, c));
    CHECK(r.socle == zk({{1, 3}, {0, 0}}, c));
}

TEST_CASE("segment times character, both ends") {
    ModContext c = ModContext::with_e(2);
    auto r = structure_Z_times_char(Segment::ints(1, 1), {}, Character::nu({}), c);
    CHECK(r.length() == 3);
    CHECK(r.indecomposable == true);
    auto irr = structure_Z_times_char(Segment::ints(2, 3), {}, Character::nu({}), ModContext::with_e(5));
    CHECK(irr.length() == 1);
}

TEST_CASE("q = 1: length depends on ell dividing n") {
    auto a = structure_Z_times_char(Segment::ints(0, 1), {}, Character::nu({}), ModContext::banal_free(3));
    CHECK(a.length() == 3);
    CHECK(a.indecomposable == true);
    CHECK(a.semisimple == false);
    auto b = structure_Z_times_char(Segment::ints(0, 1), {}, Character::nu({}), ModContext::banal_free(5));
    CHECK(b.length() == 2);
    CHECK(b.semisimple == true);
}

TEST_CASE("segment times Z([0,1]) case list") {
    ModContext c = ModContext::with_e(5);
    // b = 0 and a = 1 mod 5 with a <= b: [1,5]
    auto g = subquotients_Z_times_Z01(1, 5, c);
    CHECK(g.mult(zk({{1, 5}, {0, 1}}, c)) == 1);
    CHECK(g.mult(zk({{1, 6}, {0, 0}}, c)) == 1);
    CHECK(g.mult(zk({{0, 5}, {1, 1}}, c)) == 1);
    CHECK(g.mult(zk({{0, 6}}, c)) == 1);
    CHECK(g.total() == 4);
    CHECK_FALSE(g.lower_bound());
    // only case 1 applies
    auto h = subquotients_Z_times_Z01(3, 3, c);
    CHECK(h.total() == 1);
}

TEST_CASE("semisimplification of nu^-1 x 1 x nu at e = 3") {
    ModContext c = ModContext::with_e(3);
    auto s = semisimplify(Expr{nu_n(1, HalfInt::of(-1)), one(1), nu_n(1, HalfInt::of(1))}, c);
    REQUIRE(s.value);
    CHECK(s.value->total() == 7);
    CHECK(s.value->mult(key_of(make_St(3), c)) == 1);
    CHECK(s.value->mult(key_of(one(3), c)) == 1);
}

TEST_CASE("semisimplification in characteristic zero") {
    ModContext c = ModContext::char_zero();
    auto s = semisimplify(Expr{nu_n(1, HalfInt::of(-1)), one(1), nu_n(1, HalfInt::of(1))}, c);
    REQUIRE(s.value);
    // four constituents: 1_3, St_3 and the two mixed labels
    CHECK(s.value->total() == 4);
}

TEST_CASE("shifted principal series table at e = 2") {
    ModContext c = ModContext::with_e(2);
    auto s = semisimplify(Expr{nu_n(4, HalfInt{-1}), nu_n(1, HalfInt{-2})}, c); // n = 5
    REQUIRE(s.value);
    GrothElt want;
    want.add(key_of(nu_n(5, HalfInt::of(-1)), c));
    want.add(key_of(make_Pi_dual(5), c));
    CHECK(*s.value == want);
}

TEST_CASE("V_n structure") {
    auto r = V_n_structure(4, ModContext::with_e(2));
    REQUIRE(r.known);
    CHECK(r.length() == 3);
    auto s = V_n_structure(4, ModContext::with_e(3));
    CHECK(s.length() == 2);
}

}
