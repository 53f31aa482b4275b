#include <doctest.h>

#include "msegcalc/arith.hpp"

using namespace msegcalc;

TEST_SUITE("arith") {

TEST_CASE("half-integers print as fractions") {
    CHECK(HalfInt::halves(3).str() == "3/2");
    CHECK(HalfInt::halves(-1).str() == "-1/2");
    CHECK(HalfInt::of(-2).str() == "-2");
    CHECK(HalfInt::of(2).integral());
    CHECK_FALSE(HalfInt::halves(1).integral());
    CHECK(HalfInt::halves(1) + HalfInt::halves(1) == HalfInt::of(1));
    CHECK(half(5, 2) == HalfInt::halves(5));
    CHECK_THROWS_AS(half(1, 3), std::invalid_argument);
}

TEST_CASE("context validation") {
    CHECK_THROWS_AS(ModContext(std::nullopt, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModContext(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(ModContext(7, 4), std::invalid_argument);
    CHECK_THROWS_AS(ModContext(3, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(ModContext(4, 1), std::invalid_argument);
    CHECK_NOTHROW(ModContext(2, 1));
    CHECK_NOTHROW(ModContext(7, 3));
}

TEST_CASE("quantum characteristic") {
    CHECK(ModContext::char_zero().f() == 0);
    CHECK(ModContext::with_e(3).f() == 3);
    CHECK(ModContext::banal_free(5).f() == 5);
    CHECK(ModContext(2, 1).f() == 2);
    CHECK(ModContext::banal_free(5).q_is_one());
    CHECK_FALSE(ModContext::with_e(2).q_is_one());
}

TEST_CASE("congruence mod e") {
    ModContext c = ModContext::with_e(3);
    CHECK(congruent(HalfInt::of(4), HalfInt::of(1), c));
    CHECK(congruent(HalfInt::halves(1), HalfInt::halves(7), c));
    CHECK_FALSE(congruent(HalfInt::of(0), HalfInt::halves(1), c));
    CHECK_FALSE(congruent(HalfInt::of(0), HalfInt::of(1), c));
    CHECK_FALSE(congruent(HalfInt::of(3), HalfInt::of(0), ModContext::char_zero()));
    CHECK(congruent(HalfInt::of(3), HalfInt::of(0), ModContext::banal_free(3)));
}

TEST_CASE("reduction to a representative") {
    CHECK(reduce(HalfInt::of(3), ModContext::with_e(4)) == HalfInt::of(-1));
    CHECK(reduce(HalfInt::of(2), ModContext::with_e(4)) == HalfInt::of(2));
    CHECK(reduce(HalfInt::of(2), ModContext::with_e(3)) == HalfInt::of(-1));
    CHECK(reduce(HalfInt::halves(7), ModContext::with_e(3)) == HalfInt::halves(1));
    CHECK(reduce(HalfInt::of(9), ModContext::char_zero()) == HalfInt::of(9));
}

TEST_CASE("dominance order") {
    Partition p31({3, 1}), p22({2, 2}), p3111({3, 1, 1, 1}), p222({2, 2, 2});
    CHECK(dominates(p31, p22));
    CHECK_FALSE(dominates(p22, p31));
    CHECK_FALSE(dominates(p3111, p222));
    CHECK_FALSE(dominates(p222, p3111));
    CHECK(strictly_dominates(Partition({4}), p31));
    CHECK_FALSE(strictly_dominates(p31, p31));
    CHECK_THROWS_AS(dominates(p31, p222), std::invalid_argument);
}

TEST_CASE("partition counts") {
    // p(n) for n = 1..10
    const int counts[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int n = 1; n <= 10; ++n) CHECK(partitions_of(n).size() == static_cast<std::size_t>(counts[n - 1]));
    CHECK(partitions_of(3).front() == Partition({3}));
    CHECK(partitions_of(3).back() == Partition({1, 1, 1}));
}

}
