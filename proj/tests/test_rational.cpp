#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "snls/rational.hpp"

#include <cstdint>

using snls::Nat;
using snls::Rational;

TEST_CASE("Nat arithmetic round trips through strings") {
    CHECK(Nat(0).to_string() == "0");
    CHECK(Nat(1234567890123456789ULL).to_string() == "1234567890123456789");
    CHECK((Nat(999999999999ULL) + Nat(1)).to_string() == "1000000000000");
    CHECK((Nat(1000000000000ULL) - Nat(1)).to_string() == "999999999999");
    CHECK((Nat(123456789) * Nat(987654321)).to_string() == "121932631112635269");
}

TEST_CASE("Nat divmod and gcd") {
    Nat q, r;
    Nat::divmod(Nat(1000000007ULL), Nat(97), q, r);
    CHECK(q.to_u64() == 1000000007ULL / 97);
    CHECK(r.to_u64() == 1000000007ULL % 97);
    CHECK(Nat::gcd(Nat(48), Nat(36)).to_u64() == 12);
    CHECK(Nat::gcd(Nat(17), Nat(5)).to_u64() == 1);
    // multi-limb division
    const Nat big = Nat(0xFFFFFFFFFFFFFFFFULL) * Nat(12345);
    Nat::divmod(big, Nat(12345), q, r);
    CHECK(q == Nat(0xFFFFFFFFFFFFFFFFULL));
    CHECK(r.is_zero());
}

TEST_CASE("Rational normalization and exact arithmetic") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(-6, 4) == Rational(3, -2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(1, 3) - Rational(1, 2)) == Rational(-1, 6));
    CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
    CHECK((Rational(2, 3) / Rational(4, 3)) == Rational(1, 2));
    CHECK(Rational(7, 3).to_string() == "7/3");
    CHECK(Rational(-7, 1).to_string() == "-7");
}

TEST_CASE("Rational ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(5, 3) < Rational::inf());
    CHECK(!(Rational::inf() < Rational::inf()));
    CHECK(Rational::inf() == Rational::inf());
}

TEST_CASE("Rational infinity arithmetic is guarded") {
    CHECK((Rational(1) / Rational::inf()) == Rational(0));
    CHECK((Rational(3) + Rational::inf()).is_inf());
    CHECK_THROWS(Rational(0) * Rational::inf());
    CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("Rational parse and render") {
    CHECK(Rational::parse("5/3") == Rational(5, 3));
    CHECK(Rational::parse("-12/8") == Rational(-3, 2));
    CHECK(Rational::parse("42") == Rational(42));
    CHECK(Rational::parse("inf").is_inf());
    CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("from_double recovers simple fractions") {
    CHECK(Rational::from_double(0.5) == Rational(1, 2));
    CHECK(Rational::from_double(3.0) == Rational(3));
    CHECK(Rational::from_double(2.0 / 3.0) == Rational(2, 3));
    CHECK(Rational::from_double(3.5) == Rational(7, 2));
}

TEST_CASE("to_double matches exact values") {
    CHECK(Rational(1, 4).to_double() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(Rational(5, 6).to_double() == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("randomized field axioms against 64-bit arithmetic") {
    std::uint64_t state = 12345;
    auto next = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::int64_t>((state >> 40) % 200) - 100;
    };
    for (int it = 0; it < 200; ++it) {
        const std::int64_t a = next(), c = next();
        std::int64_t b = next(), d = next();
        if (b == 0) b = 7;
        if (d == 0) d = 11;
        const Rational x(a, b), y(c, d);
        // cross-check addition against exact 64-bit cross products
        const Rational sum = x + y;
        CHECK(sum == Rational(a * d + c * b, b * d));
        CHECK((x * y) == Rational(a * c, b * d));
        CHECK((sum - y) == x);
        if (!y.is_zero()) CHECK(((x / y) * y) == x);
    }
}
