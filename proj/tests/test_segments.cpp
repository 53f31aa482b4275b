#include <doctest.h>

#include "msegcalc/segments.hpp"

using namespace msegcalc;

namespace {
Segment S(int a, int b) { return Segment::ints(a, b); }
}

TEST_SUITE("segments") {

TEST_CASE("linked segments in characteristic zero") {
    ModContext c = ModContext::char_zero();
    CHECK(linked(S(0, 1), S(2, 3), c));
    CHECK(linked(S(0, 2), S(1, 3), c));
    CHECK_FALSE(linked(S(0, 3), S(1, 2), c));
    CHECK_FALSE(linked(S(0, 1), S(3, 4), c));
    CHECK_FALSE(linked(S(0, 1), S(0, 1), c));
}

TEST_CASE("linked segments modulo e") {
    ModContext c = ModContext::with_e(3);
    // [0] and [2]: 2 = 0 - 1 mod 3
    CHECK(linked(S(0, 0), S(2, 2), c));
    CHECK_FALSE(linked(S(0, 2), S(1, 1), c));
    // [0,1] and [5,5]: 5 = 1 + 1 mod 3
    CHECK(linked(S(0, 1), S(5, 5), c));
    CHECK(juxtaposed(S(0, 1), S(5, 6), c));
    CHECK_FALSE(juxtaposed(S(0, 1), S(4, 6), c));
}

TEST_CASE("segments of different parity never interact") {
    ModContext c = ModContext::with_e(2);
    Segment h(HalfInt::halves(1), HalfInt::halves(1));
    CHECK_FALSE(linked(S(0, 0), h, c));
    CHECK_FALSE(juxtaposed(S(0, 0), h, c));
}

TEST_CASE("canonical multisegments") {
    ModContext c = ModContext::with_e(3);
    Multisegment m;
    m.segs = {S(4, 5), S(0, 0)};
    Multisegment n;
    n.segs = {S(0, 0), S(1, 2)};
    CHECK(multiseg_equal(m, n, c));
    CHECK_FALSE(multiseg_equal(m, n, ModContext::char_zero()));
    CHECK(canonical(shift(m, HalfInt::of(6)), c) == canonical(m, c));
}

TEST_CASE("support, shape and contragredient") {
    ModContext c = ModContext::with_e(3);
    Multisegment m;
    m.segs = {S(0, 1), S(3, 3)};
    Support s = support(m, c);
    CHECK(s.size() == 2);
    CHECK(s[HalfInt::of(0)] == 2);
    CHECK(s[HalfInt::of(1)] == 1);
    CHECK(lambda_of(m) == Partition({2, 1}));
    Multisegment d = contragredient(m);
    CHECK(d.segs[0] == S(-1, 0));
    CHECK(d.segs[1] == S(-3, -3));
    CHECK(m.degree() == 3);
}

TEST_CASE("invalid segments") {
    CHECK_THROWS_AS(Segment(HalfInt::of(2), HalfInt::of(1)), std::invalid_argument);
    CHECK_THROWS_AS(Segment(HalfInt::of(0), HalfInt::halves(1)), std::invalid_argument);
}

}
