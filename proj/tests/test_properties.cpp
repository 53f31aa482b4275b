#include <doctest.h>

#include "msegcalc/verify.hpp"

using namespace msegcalc;
using namespace msegcalc::verify_detail;

namespace {
void report(const CheckResult& r) {
    for (const auto& f : r.failures) INFO(f);
    CHECK(r.failed == 0);
    CHECK(r.pass);
}
}

// Fixed seeds; each sweep draws at least 10^4 random cases.
TEST_CASE("congruence and dominance are equivalence and partial orders") {
    auto r = order_axioms(kSeed, 10000);
    CHECK(r.checked >= 10000);
    report(r);
}

TEST_CASE("linked and juxtaposed are symmetric; contragredient and shift are involutive") {
    auto r = segment_symmetries(kSeed, 10000);
    CHECK(r.checked >= 10000);
    report(r);
}

TEST_CASE("geometric lemma conserves support and refines transitively") {
    auto r = geometric_lemma_laws(kSeed, 10000);
    CHECK(r.checked >= 10000);
    report(r);
}

TEST_CASE("parse after render is the identity on canonical expressions") {
    auto r = round_trip(kSeed, 10000);
    CHECK(r.checked == 10000);
    report(r);
}

TEST_CASE("structure and solver outputs conserve support and respect dominance") {
    report(output_support());
}

TEST_CASE("a second seed") {
    report(geometric_lemma_laws(kSeed ^ 0x9e3779b97f4a7c15ULL, 10000));
    report(segment_symmetries(kSeed ^ 0x9e3779b97f4a7c15ULL, 10000));
}
