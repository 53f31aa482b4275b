#include <doctest.h>

#include "msegcalc/solver.hpp"

using namespace msegcalc;

namespace {
Irreducible pt(int x) { return nu_n(1, HalfInt::of(x)); }
Irreducible seg(int a, int b) { return Irreducible::Z({Segment::ints(a, b)}); }
}

TEST_SUITE("solver") {

TEST_CASE("two characters in characteristic zero") {
    ModContext c = ModContext::char_zero();
    auto d = decompose(Expr{pt(0), pt(1)}, c);
    CHECK(d.exact);
    CHECK(d.value.total() == 2);
    CHECK(d.value.mult(key_of(seg(0, 1), c)) == 1);
}

TEST_CASE("two characters at e = 2 give length three") {
    ModContext c = ModContext::with_e(2);
    auto d = decompose(Expr{pt(0), pt(1)}, c);
    CHECK(d.exact);
    CHECK(d.value.total() == 3);
    CHECK(d.value.mult(key_of(twist(make_St(2), HalfInt::halves(1)), c)) == 1);
}

TEST_CASE("unlinked product is irreducible") {
    ModContext c = ModContext::with_e(5);
    auto d = decompose(Expr{seg(0, 1), pt(3)}, c);
    CHECK(d.exact);
    CHECK(d.value.total() == 1);
}

TEST_CASE("candidates for Z([1,3]) x L([0,1]) at e = 3") {
    ModContext c = ModContext::with_e(3);
    auto cs = enumerate_candidates(Expr{seg(1, 3), make_L(Segment::ints(0, 1), c)}, c);
    CHECK(cs.candidates.size() == 7);
    auto d = decompose(Expr{seg(1, 3), make_L(Segment::ints(0, 1), c)}, c);
    CHECK(d.exact);
    CHECK(d.value.total() == 1);
    int excluded = 0;
    for (const auto& k : d.cs.candidates) excluded += k.status == CandStatus::Excluded;
    CHECK(excluded == 6);
    CHECK(trace_of(d).size() == 7);
}

TEST_CASE("solver rejects cuspidal factors") {
    ModContext c = ModContext::with_e(3);
    CHECK_THROWS_AS(enumerate_candidates(Expr{Irreducible::cusp(2, "rho"), pt(0)}, c), std::invalid_argument);
}

TEST_CASE("full Jacquet length") {
    ModContext c = ModContext::with_e(3);
    CHECK(full_jacquet_length(Expr{pt(-1), pt(0), pt(1)}, c) == 6);
    CHECK(full_jacquet_length(Expr(seg(0, 3)), c) == 1);
}

TEST_CASE("elementary operations") {
    ModContext c = ModContext::char_zero();
    Multisegment m;
    m.segs = {Segment::ints(0, 0), Segment::ints(1, 1)};
    auto r = reachable_from(m, c);
    Multisegment joined;
    joined.segs = {Segment::ints(0, 1)};
    CHECK(r.count(canonical(joined, c)) == 1);
}

}
