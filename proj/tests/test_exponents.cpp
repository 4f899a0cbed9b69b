#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snls/exponents.hpp"

using namespace snls;

namespace {
Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }
}  // namespace

TEST_CASE("admissibility: endpoint and interior pairs") {
    CHECK(is_admissible(3, R(2), Rational::inf()));   // endpoint allowed, d != 2
    CHECK(is_admissible(1, R(3), R(12)));             // step1 pair at alpha=3, d=1
    CHECK_FALSE(is_admissible(2, Rational::inf(), R(2)));  // d=2 excludes p = inf
    CHECK(is_admissible(2, R(2), Rational::inf()));
    CHECK_FALSE(is_admissible(1, R(3), R(11)));       // scaling relation broken
    CHECK(is_admissible(1, Rational::inf(), R(4)));   // (inf, 4) for d=1
    CHECK_FALSE(is_admissible(3, R(1), R(2)));        // p below 2
    CHECK_THROWS(is_admissible(1, R(-3), R(12)));
}

TEST_CASE("admissibility certificate carries the scaling identity") {
    const auto cert = check_admissible(1, R(3), R(12));
    CHECK(cert.admissible);
    CHECK(cert.scaling_ok);
    CHECK(cert.range_ok);
    const auto bad = check_admissible(2, Rational::inf(), R(2));
    CHECK_FALSE(bad.admissible);
    CHECK(bad.scaling_ok);  // 2/2 = 1 = 2/2 - 0: scaling holds, range fails
    CHECK_FALSE(bad.range_ok);
}

TEST_CASE("dual exponents") {
    CHECK(dual_exponent(R(2)) == R(2));
    CHECK(dual_exponent(Rational::inf()) == R(1));
    CHECK(dual_exponent(R(1)).is_inf());
    CHECK(dual_exponent(R(3)) == R(3, 2));
    CHECK(dual_exponent(R(12)) == R(12, 11));
    CHECK_THROWS(dual_exponent(R(1, 2)));
}

TEST_CASE("dual exponent is an involution") {
    const Rational values[] = {R(2), R(3), R(12), R(7, 3), R(15, 7), R(101, 53)};
    for (const auto& p : values) CHECK(dual_exponent(dual_exponent(p)) == p);
    CHECK(dual_exponent(dual_exponent(Rational::inf())).is_inf());
}

TEST_CASE("theta gap") {
    CHECK(theta_gap(R(12)) == R(5, 6));
    CHECK(theta_gap(R(4)) == R(1, 2));
    CHECK(theta_gap(Rational::inf()) == R(1));
    CHECK_THROWS(theta_gap(R(2)));
    CHECK_THROWS(theta_gap(R(3, 2)));
}

TEST_CASE("scaling heuristic range 1 < alpha < 1 + 4/(d-2s)^+") {
    // s = 0
    CHECK(scaling_range(1, R(0)).intervals[0].hi == R(5));
    CHECK(scaling_range(4, R(0)).intervals[0].hi == R(2));
    // s = 1: infinite bound for d <= 2
    CHECK(scaling_range(2, R(1)).intervals[0].hi.is_inf());
    CHECK(scaling_range(3, R(1)).intervals[0].hi == R(5));
    // s = 2: infinite bound for d <= 4
    CHECK(scaling_range(4, R(2)).intervals[0].hi.is_inf());
    CHECK(scaling_range(5, R(2)).intervals[0].hi == R(5));
    CHECK(scaling_range(8, R(2)).intervals[0].hi == R(2));
    // the lower endpoint is always the open 1
    const auto r = scaling_range(3, R(0));
    CHECK_FALSE(r.contains(R(1)));
    CHECK(r.contains(R(101, 100)));
}

TEST_CASE("local H2 range matches the published table") {
    for (int d = 1; d <= 4; ++d) {
        const auto r = power_range(d, 2, -1, RangeScope::local_h2);
        REQUIRE(r.intervals.size() == 1);
        CHECK(r.intervals[0].lo == R(1));
        CHECK(r.intervals[0].hi.is_inf());
    }
    const auto r5 = power_range(5, 2, -1, RangeScope::local_h2);
    REQUIRE(r5.intervals.size() == 2);
    CHECK(r5.intervals[0].lo == R(1));
    CHECK(r5.intervals[0].hi == R(5, 3));
    CHECK_FALSE(r5.intervals[0].hi_closed);
    CHECK(r5.intervals[1].lo == R(2));
    CHECK(r5.intervals[1].lo_closed);
    CHECK(r5.intervals[1].hi == R(5));
    const auto r8 = power_range(8, 2, -1, RangeScope::local_h2);
    REQUIRE(r8.intervals.size() == 1);
    CHECK(r8.intervals[0].hi == R(4, 3));
    // membership at endpoints is exact
    CHECK(r5.contains(R(2)));
    CHECK_FALSE(r5.contains(R(5)));
    CHECK_FALSE(r5.contains(R(5, 3)));
    CHECK(r5.contains(R(5, 3) - R(1, 1000000)));
}

TEST_CASE("conservative L2 and H1 ranges") {
    CHECK(power_range(1, 0, -1, RangeScope::local_l2).intervals[0].hi == R(5));
    CHECK(power_range(2, 0, -1, RangeScope::local_l2).intervals[0].hi == R(3));
    CHECK(power_range(3, 0, -1, RangeScope::local_l2).intervals[0].hi == R(2));
    CHECK(power_range(2, 1, -1, RangeScope::local_h1).intervals[0].hi.is_inf());
    CHECK(power_range(3, 1, -1, RangeScope::local_h1).intervals[0].hi == R(5));
    const auto r4 = power_range(4, 1, -1, RangeScope::local_h1);
    REQUIRE(r4.intervals.size() == 2);
    CHECK(r4.intervals[0].hi == R(5, 3));
    CHECK(r4.intervals[1].lo == R(2));
    CHECK(r4.intervals[1].hi == R(3));
    CHECK(power_range(6, 1, -1, RangeScope::local_h1).intervals[0].hi == R(7, 5));
}

TEST_CASE("smooth-nonlinearity H2 range and dimension guard") {
    CHECK(power_range(4, 2, -1, RangeScope::h2_smooth).intervals[0].hi.is_inf());
    CHECK(power_range(5, 2, -1, RangeScope::h2_smooth).intervals[0].hi == R(5));
    CHECK(power_range(7, 2, -1, RangeScope::h2_smooth).intervals[0].hi == R(7, 3));
    CHECK(power_range(7, 2, -1, RangeScope::h2_smooth).intervals[0].lo_closed);
    CHECK_THROWS(power_range(8, 2, -1, RangeScope::h2_smooth));
}

TEST_CASE("global ranges depend on the sign of the nonlinearity") {
    CHECK(power_range(3, 1, -1, RangeScope::global_h1).intervals[0].hi == R(5));
    CHECK(power_range(3, 1, 1, RangeScope::global_h1).intervals[0].hi == R(7, 3));
    CHECK(power_range(2, 1, -1, RangeScope::global_h1).intervals[0].hi.is_inf());
    CHECK(power_range(1, 2, 1, RangeScope::global_h2).intervals[0].hi == R(5));
    CHECK(power_range(3, 2, -1, RangeScope::global_h2).intervals[0].hi == R(5));
    const auto g6 = power_range(6, 2, -1, RangeScope::global_h2);
    CHECK(g6.intervals[0].empty());  // [2, 2)
    CHECK_THROWS(power_range(8, 2, -1, RangeScope::global_h2));
}

TEST_CASE("s argument must match the scope") {
    CHECK_THROWS(power_range(3, 1, -1, RangeScope::local_l2));
    CHECK_THROWS(power_range(3, 0, -1, RangeScope::local_h2));
}

TEST_CASE("proof pairs reproduce the fixed-point choices") {
    const auto s1 = proof_pair(1, R(3), PairContext::step1);
    CHECK(s1.p == R(3));
    CHECK(s1.q == R(12));
    const auto c4 = proof_pair(4, R(2), PairContext::ycor_d4);
    CHECK(c4.p == R(8, 3));
    CHECK(c4.q == R(4));
    const auto c5 = proof_pair(5, R(2), PairContext::ycor_d567);
    CHECK(c5.p == R(15, 7));
    CHECK(c5.q == R(12));
    const auto g3 = proof_pair(3, R(2), PairContext::yglob);
    CHECK(g3.p == R(3));
    CHECK(g3.q == R(4));
}

TEST_CASE("proof pair domain guards") {
    CHECK_THROWS(proof_pair(5, R(6), PairContext::step1));       // q <= 2
    CHECK_THROWS(proof_pair(5, R(3, 2), PairContext::ycor_d567));  // below 2
    CHECK_THROWS(proof_pair(5, R(5), PairContext::ycor_d567));   // at the open top
    CHECK_THROWS(proof_pair(3, R(2), PairContext::ycor_d4));     // wrong dimension
    CHECK_THROWS(proof_pair(8, R(2), PairContext::yglob));
}

TEST_CASE("every proof pair is admissible over a rational sweep") {
    const int kSteps = 64;
    auto sweep = [&](int d, PairContext ctx) {
        const auto dom = proof_pair_domain(d, ctx);
        for (const auto& iv : dom.intervals) {
            if (iv.empty()) continue;
            const Rational lo = iv.lo;
            const Rational hi = iv.hi.is_inf() ? lo + R(8) : iv.hi;
            for (int j = 0; j <= kSteps; ++j) {
                Rational a = lo + (hi - lo) * R(j, kSteps);
                if (!iv.contains(a)) continue;  // skips open endpoints exactly
                const auto pair = proof_pair(d, a, ctx);
                CHECK(is_admissible(d, pair.p, pair.q));
            }
        }
    };
    for (int d = 1; d <= 10; ++d) sweep(d, PairContext::step1);
    sweep(4, PairContext::ycor_d4);
    for (int d = 5; d <= 7; ++d) sweep(d, PairContext::ycor_d567);
    for (int d = 1; d <= 7; ++d) sweep(d, PairContext::yglob);
}

TEST_CASE("global H2 range nests inside local H2 for d <= 7") {
    for (int d = 1; d <= 7; ++d) {
        for (int lambda : {-1, 1}) {
            const auto global = power_range(d, 2, lambda, RangeScope::global_h2);
            const auto local = power_range(d, 2, lambda, RangeScope::local_h2);
            for (const auto& iv : global.intervals) {
                if (iv.empty()) continue;
                // sample across the interval plus the closed endpoint
                const Rational hi = iv.hi.is_inf() ? iv.lo + R(10) : iv.hi;
                for (int j = 0; j <= 32; ++j) {
                    const Rational a = iv.lo + (hi - iv.lo) * R(j, 32);
                    if (global.contains(a)) CHECK(local.contains(a));
                }
            }
        }
    }
}

TEST_CASE("the local H2 component gap exists for d >= 5") {
    for (int d = 5; d <= 7; ++d) {
        const auto r = power_range(d, 2, -1, RangeScope::local_h2);
        REQUIRE(r.intervals.size() == 2);
        // first component ends strictly below the second's closed start
        CHECK(r.intervals[0].hi <= R(2));
        CHECK(r.intervals[1].lo == R(2));
        // a point in the gap is excluded
        const Rational mid = (r.intervals[0].hi + R(2)) / R(2);
        if (r.intervals[0].hi < R(2)) CHECK_FALSE(r.contains(mid));
    }
}
