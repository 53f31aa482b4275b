#include <doctest.h>

#include "msegcalc/distinction.hpp"

using namespace msegcalc;

TEST_SUITE("distinction") {

TEST_CASE("one-dimensional and cuspidal representations") {
    ModContext c = ModContext::with_e(3);
    CHECK(classify(Expr(one(3)), c).status == DStatus::Distinguished);
    CHECK(classify(Expr(nu_n(3, HalfInt::of(1))), c).status == DStatus::NotDistinguished);
    CHECK(classify(Expr(nu_n(3, HalfInt::of(3))), c).status == DStatus::Distinguished);
    CHECK(classify(Expr(Irreducible::cusp(2, "rho")), c).dimension == 1);
    CHECK(classify(Expr(Irreducible::cusp(3, "rho")), c).status == DStatus::NotDistinguished);
}

TEST_CASE("GL_2 dimensions of invariant forms") {
    CHECK(gl2_invariant_form_dims(0, ModContext::banal_free(3)) == std::pair{1, 0});
    CHECK(gl2_invariant_form_dims(1, ModContext::with_e(3)) == std::pair{1, 1});
    CHECK(gl2_invariant_form_dims(2, ModContext::with_e(3)) == std::pair{2, 2});
    CHECK(gl2_invariant_form_dims(1, ModContext::banal_free(3)) == std::pair{2, 1});
    CHECK(gl2_invariant_form_dims(2, ModContext::banal_free(3)) == std::pair{3, 2});
}

TEST_CASE("GL_2 Steinberg") {
    CHECK(classify_gl2(Expr(make_St(2)), ModContext::banal_free(3)).dimension == 2);
    CHECK(classify_gl2(Expr(make_St(2)), ModContext::banal_free(2)).dimension == 1);
    CHECK(classify_gl2(Expr(make_St(2)), ModContext::with_e(3)).dimension == 1);
}

TEST_CASE("Lambda_n and its twists") {
    ModContext c = ModContext::with_e(3);
    CHECK(classify(Expr(make_Lambda(4, c)), c).status == DStatus::Distinguished);
    CHECK(classify(Expr(make_Lambda_dual(4, c)), c).status == DStatus::Distinguished);
    CHECK(classify(Expr(twist(make_Lambda(4, c), HalfInt::of(1))), c).status == DStatus::NotDistinguished);
}

TEST_CASE("list members given as products") {
    ModContext c = ModContext::with_e(4);
    // nu_{n-1}^{-1/2} x chi for an unramified chi away from the reducibility points
    Expr p{nu_n(3, HalfInt{-1}), Irreducible::Z({Segment::point(HalfInt{})}, {{"a", 1}})};
    CHECK(classify(p, c).status == DStatus::Distinguished);
    // 1_{n-2} x tau with tau an infinite-dimensional irreducible of G_2
    Expr q{one(2), Irreducible::cusp(2, "rho")};
    CHECK(classify(q, c).status == DStatus::Distinguished);
}

TEST_CASE("three-orbit conditions") {
    ModContext c = ModContext::with_e(3);
    // V_n . chi = nu_{n-1}^{1/2} chi x nu^{(n+1)/2} chi with chi ramified
    auto oc = three_orbit_conditions(Expr(twist(nu_n(3, HalfInt{1}), Character::ramified("a"))),
                                     Expr(twist(nu_n(1, HalfInt{5}), Character::ramified("a"))), c);
    CHECK(oc.A == Tribool::False);
    CHECK(oc.conclusion.status == DStatus::NotDistinguished);
}

TEST_CASE("derivative test") {
    ModContext c = ModContext::with_e(3);
    CHECK(derivative_test(Expr(make_Phi(5)), c).verdict == DerivTest::NotDistinguished);
    CHECK(derivative_test(Expr(make_Psi(6)), c).verdict == DerivTest::NotDistinguished);
    CHECK(derivative_test(Expr(one(4)), c).verdict == DerivTest::Inconclusive);
}

TEST_CASE("dual closure at e = 3") {
    auto dc = dual_closure_check(ModContext::with_e(3), 6);
    CHECK(dc.ok);
    CHECK(dc.checked > 100);
}

TEST_CASE("reduction list") {
    auto l = reduction_list(5, ModContext::with_e(3));
    CHECK(l.size() >= 7);
    CHECK_THROWS_AS(reduction_list(5, ModContext::banal_free(3)), std::invalid_argument);
}

}
